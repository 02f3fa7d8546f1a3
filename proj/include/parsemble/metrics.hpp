// Scoring: the (correct, spurious, missed) count table, precision / recall /
// F / mean / exact-match metrics, directed parser distance, isolated
// precision with context breakdowns, and the two per-sentence oracles.

#ifndef PARSEMBLE_METRICS_HPP
#define PARSEMBLE_METRICS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parsemble/treebank.hpp"

namespace parsemble {

// Constituent outcome counts for one or more sentences:
//   a — in both guess and reference (correct)
//   b — in the guess only (precision error)
//   c — in the reference only (recall error)
// The fourth combination (in neither) is not observable and never stored.
struct CountTable {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;

    CountTable& operator+=(const CountTable& o) {
        a += o.a;
        b += o.b;
        c += o.c;
        return *this;
    }
    bool exact() const { return b == 0 && c == 0; }
    bool operator==(const CountTable&) const = default;
};

// Division convention used everywhere: 0/0 = 1.0 (vacuously perfect), any
// other zero denominator cannot occur because numerators count subsets.
double safe_ratio(double num, double den);

struct ScoreReport {
    double precision = 0.0;
    double recall = 0.0;
    double mean = 0.0;       // arithmetic mean of precision and recall
    double f_measure = 0.0;  // harmonic mean
    double exact = 0.0;      // fraction of sentences with b = c = 0
    std::int64_t sentence_count = 0;
    CountTable totals;
    std::map<std::string, CountTable> per_label;
    std::map<std::string, CountTable> per_parent;
};

// Compares one guess against one reference (equal pruned lengths required).
// With `multiset` the duplicate copies recorded by the normalization take
// part in the counting; by default sets are compared.
CountTable score(const ConstituentSet& guess, const ConstituentSet& reference,
                 bool multiset = false);

// Per-label breakdown of the same comparison.
std::map<std::string, CountTable> score_by_label(const ConstituentSet& guess,
                                                 const ConstituentSet& reference);

// Breakdown keyed by the label of the smallest strictly containing
// constituent ("TOP" when none): guess-side parents for a and b counts,
// reference-side parents for c counts.
std::map<std::string, CountTable> score_by_parent(const ConstituentSet& guess,
                                                  const ConstituentSet& reference);

// Sums per-sentence tables into corpus metrics. P = a/(a+b), R = a/(a+c),
// F = 2a/(2a+b+c), mean = (P+R)/2, exact = fraction of exact tables.
ScoreReport aggregate(const std::vector<CountTable>& tables);

// Corpus-level convenience: scores line-aligned forests and fills the
// per-label / per-parent breakdowns.
ScoreReport evaluate(const std::vector<ConstituentSet>& guesses,
                     const std::vector<ConstituentSet>& references,
                     bool multiset = false);

// |A - B| / |A|: the fraction of A's constituents absent from B. Equals
// 1 - recall(B against reference A). Empty A gives 0 (nothing to miss).
double directed_distance(const ConstituentSet& A, const ConstituentSet& B);

// Length bucketing shared by every context breakdown: 1,2,3,4,5,6-10,11-20,21+.
std::string length_bucket(int n);

enum class IsolatedContext { none, label, parent, span_length, sentence_length };

struct IsolatedCell {
    std::int64_t isolated = 0;  // constituents only parser i proposes
    std::int64_t correct = 0;   // of those, also in the reference
    // Not available when the parser proposed nothing alone in this context.
    std::optional<double> precision() const {
        if (isolated == 0) return std::nullopt;
        return static_cast<double>(correct) / static_cast<double>(isolated);
    }
};

// Precision of parser `parser_index` on constituents that it alone proposes:
// the constituents in S_i minus the majority vote of the other parsers,
// scored against the reference, optionally partitioned by context. Requires
// at least 3 parsers so the others' majority is meaningful.
std::map<std::string, IsolatedCell> isolated_precision(
    const std::vector<std::vector<ConstituentSet>>& parsers_by_sentence,
    const std::vector<ConstituentSet>& references, std::size_t parser_index,
    IsolatedContext context = IsolatedContext::none);

// Per sentence, keeps the candidate with the highest F against the reference
// (ties to the lowest index), then aggregates.
ScoreReport parser_switch_oracle(
    const std::vector<std::vector<ConstituentSet>>& candidates_by_sentence,
    const std::vector<ConstituentSet>& references);

// Per sentence, keeps (union of candidates) ∩ reference: precision is 1 by
// construction; recall shows how much of the reference the pool reaches.
ScoreReport max_precision_oracle(
    const std::vector<std::vector<ConstituentSet>>& candidates_by_sentence,
    const std::vector<ConstituentSet>& references);

}  // namespace parsemble

#endif  // PARSEMBLE_METRICS_HPP
