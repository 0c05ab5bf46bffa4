#include "ixl/langprops.hpp"

#include <algorithm>

namespace ixl {

namespace {

bool is_prefix_of(const Word& a, const Word& b) {
    if (a.size() > b.size()) return false;
    return std::equal(a.begin(), a.end(), b.begin());
}

} // namespace

bool is_prefix_chain(const std::vector<Word>& words) {
    std::vector<Word> sorted = words;
    std::sort(sorted.begin(), sorted.end(), [](const Word& a, const Word& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (!is_prefix_of(sorted[i - 1], sorted[i])) return false;
    return true;
}

DeterminedPrefix determined_prefix(const GrammarPtr& g, std::size_t n,
                                   const SearchBudget& budget) {
    DeterminedPrefix out;
    std::size_t max_len = std::max<std::size_t>(n, 1);
    for (int round = 0; round < 6; ++round) {
        auto res = enumerate_words(g, max_len, budget);
        // conflict check on the sorted list
        for (std::size_t i = 1; i < res.words.size(); ++i) {
            if (!is_prefix_of(res.words[i - 1], res.words[i])) {
                out.status = DeterminedPrefix::Status::Conflict;
                out.conflict = {res.words[i - 1], res.words[i]};
                return out;
            }
        }
        const Word* longest = res.words.empty() ? nullptr : &res.words.back();
        if (longest && longest->size() >= n) {
            out.status = DeterminedPrefix::Status::Ok;
            out.prefix = Word(longest->begin(),
                              longest->begin() + static_cast<std::ptrdiff_t>(n));
            return out;
        }
        if (longest) out.prefix = *longest;
        if (res.closed) {
            out.status = DeterminedPrefix::Status::Finite;
            return out;
        }
        max_len *= 2;
    }
    out.status = DeterminedPrefix::Status::Partial;
    return out;
}

std::optional<std::pair<Word, Word>> ultimately_periodic_guess(const Word& x) {
    std::size_t len = x.size();
    for (std::size_t per = 1; per * 3 <= len; ++per) {
        for (std::size_t pre = 0; pre + 3 * per <= len; ++pre) {
            bool ok = true;
            for (std::size_t i = pre + per; i < len && ok; ++i)
                if (x[i] != x[i - per]) ok = false;
            if (ok) {
                Word u(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(pre));
                Word y(x.begin() + static_cast<std::ptrdiff_t>(pre),
                       x.begin() + static_cast<std::ptrdiff_t>(pre + per));
                return std::make_pair(u, y);
            }
        }
    }
    return std::nullopt;
}

RareFrequentReport rare_frequent_report(const std::vector<Word>& sample,
                                        const std::set<SymbolId>& B) {
    RareFrequentReport report;
    for (const Word& w : sample) {
        std::vector<std::size_t> positions;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (B.count(w[i])) positions.push_back(i);
        report.counts.push_back(positions.size());
        report.max_count = std::max(report.max_count, positions.size());
        if (positions.size() < 2) {
            report.min_gaps.push_back(std::nullopt);
        } else {
            std::size_t best = w.size();
            for (std::size_t i = 1; i < positions.size(); ++i)
                best = std::min(best, positions[i] - positions[i - 1]);
            report.min_gaps.push_back(best);
        }
    }

    auto strictly_increasing = [](const std::vector<std::size_t>& v) {
        if (v.size() < 2) return false;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] <= v[i - 1]) return false;
        return true;
    };

    std::vector<std::size_t> gaps;
    for (const auto& g : report.min_gaps)
        if (g) gaps.push_back(*g);

    bool counts_grow = strictly_increasing(report.counts);
    bool gaps_grow = gaps.size() >= 2 && strictly_increasing(gaps);

    bool plateau = !report.counts.empty();
    for (std::size_t i = report.counts.size() / 2; i < report.counts.size(); ++i)
        if (report.counts[i] != report.max_count) plateau = false;

    if (counts_grow && gaps_grow) {
        report.verdict = RareFrequentReport::Verdict::RareAndFrequentEvidence;
        report.note = "counts and minimum gaps both grow strictly along the sample";
    } else if (plateau && !counts_grow) {
        report.verdict = RareFrequentReport::Verdict::NonfrequentEvidence;
        report.note = "counts plateau at " + std::to_string(report.max_count);
    } else {
        report.verdict = RareFrequentReport::Verdict::Inconclusive;
        report.note = counts_grow ? "counts grow but gaps do not satisfy rare growth"
                                  : "no clear growth pattern in the sample";
    }
    return report;
}

} // namespace ixl
