// Compares the serial reference kernels against the OpenMP ones on corpus
// workloads and checks that both produce identical results.

#include "ixl/langprops.hpp"
#include "ixl/pumping.hpp"
#include "ixl/tree_analysis.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double time_ms(const std::function<void()>& fn) {
    auto start = std::chrono::steady_clock::now();
    fn();
    auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

struct Row {
    std::string name;
    double serial_ms;
    double parallel_ms;
    bool equal;
};

void print_row(const Row& r) {
    std::printf("%-34s %10.1f ms %10.1f ms   x%.2f   %s\n", r.name.c_str(),
                r.serial_ms, r.parallel_ms,
                r.parallel_ms > 0 ? r.serial_ms / r.parallel_ms : 0.0,
                r.equal ? "results equal" : "RESULTS DIFFER");
}

} // namespace

int main(int argc, char** argv) {
    std::string corpus = argc > 1 ? argv[1] : "corpus";
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel falls back to serial\n");
#endif
    std::printf("%-34s %13s %13s\n", "workload", "serial", "openmp");

    ixl::SearchBudget big;
    big.max_expansions = 20000000;
    big.max_form_length = 200000;

    {
        auto g = ixl::parse_grammar(read_file(corpus + "/example1.ig"));
        Row r{"enumerate example1 max-len 120", 0, 0, false};
        ixl::EnumerateResult rs, rp;
        r.serial_ms = time_ms(
            [&] { rs = ixl::enumerate_words(g, 120, big, ixl::Execution::Serial); });
        r.parallel_ms = time_ms(
            [&] { rp = ixl::enumerate_words(g, 120, big, ixl::Execution::Parallel); });
        r.equal = rs.words == rp.words && rs.closed == rp.closed;
        print_row(r);
    }
    {
        auto g = ixl::parse_grammar(read_file(corpus + "/copy-ww.ig"));
        Row r{"enumerate copy-ww max-len 26", 0, 0, false};
        ixl::EnumerateResult rs, rp;
        r.serial_ms = time_ms(
            [&] { rs = ixl::enumerate_words(g, 26, big, ixl::Execution::Serial); });
        r.parallel_ms = time_ms(
            [&] { rp = ixl::enumerate_words(g, 26, big, ixl::Execution::Parallel); });
        r.equal = rs.words == rp.words && rs.closed == rp.closed;
        print_row(r);
    }
    {
        auto g = ixl::parse_grammar(read_file(corpus + "/example1.ig"));
        // one long word of the prefix language, then annotate + config scan
        auto words = ixl::enumerate_words(g, 1200, big).words;
        const auto& w = words.back();
        auto tree = ixl::derive_tree(g, w, big);
        auto marked = ixl::mark_tree(*tree, [&] {
            std::vector<std::size_t> all(w.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            return all;
        }());
        std::printf("(annotation tree: %zu nodes, yield %zu)\n", marked.size(),
                    w.size());
        Row r{"annotate sigma/eta/beta/tau", 0, 0, false};
        ixl::TreeAnnotations as, ap;
        r.serial_ms = time_ms([&] { as = ixl::annotate(marked, ixl::Execution::Serial); });
        r.parallel_ms =
            time_ms([&] { ap = ixl::annotate(marked, ixl::Execution::Parallel); });
        r.equal = as.beta == ap.beta && as.eta == ap.eta && as.sigma == ap.sigma;
        print_row(r);

        Row r2{"find_pump_config", 0, 0, false};
        std::optional<ixl::PumpConfig> cs, cp;
        r2.serial_ms =
            time_ms([&] { cs = ixl::find_pump_config(marked, ixl::Execution::Serial); });
        r2.parallel_ms = time_ms(
            [&] { cp = ixl::find_pump_config(marked, ixl::Execution::Parallel); });
        r2.equal = cs.has_value() == cp.has_value() &&
                   (!cs || (cs->path == cp->path && cs->b1 == cp->b1 &&
                            cs->t1 == cp->t1 && cs->t2 == cp->t2 && cs->b2 == cp->b2));
        print_row(r2);
    }
    return 0;
}
