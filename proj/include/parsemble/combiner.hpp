// Combining the outputs of several parsers for one sentence: constituent
// voting, unsupervised similarity/distance switching, and naive-Bayes
// hybridization / switching with optional context conditioning.

#ifndef PARSEMBLE_COMBINER_HPP
#define PARSEMBLE_COMBINER_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parsemble/treebank.hpp"

namespace parsemble {

// --- Voting ----------------------------------------------------------------

struct VoteConfig {
    int threshold = 0;  // votes required for inclusion, 1..k
    int k = 0;          // ensemble size
};

// Keeps every constituent proposed by at least `threshold` of the sets. A
// strict-majority threshold (> k/2) guarantees a crossing-free result.
ConstituentSet constituent_vote(const std::vector<ConstituentSet>& sets,
                                const VoteConfig& cfg);

// std::nullopt when all span pairs nest or are disjoint; otherwise the first
// offending pair in canonical order.
std::optional<std::pair<Constituent, Constituent>> check_no_crossing(
    const ConstituentSet& set);

// --- Unsupervised switching ------------------------------------------------

struct SwitchDecision {
    std::size_t chosen = 0;      // winning candidate index
    std::vector<double> scores;  // per-candidate objective values
    bool tie = false;            // another candidate achieved the same value
};

std::int64_t match_count(const ConstituentSet& a, const ConstituentSet& b);
std::int64_t symmetric_difference_size(const ConstituentSet& a,
                                       const ConstituentSet& b);

// argmax_i sum_{j != i} |S_i ∩ S_j|; ties go to the lowest index.
SwitchDecision similarity_switch(const std::vector<ConstituentSet>& candidates);

// argmin_i sum_j |S_i △ S_j|; ties go to the lowest index. Related to the
// similarity objective by |S_i △ S_j| = |S_i| + |S_j| - 2|S_i ∩ S_j|.
SwitchDecision distance_switch(const std::vector<ConstituentSet>& candidates);

// --- Naive Bayes -----------------------------------------------------------

enum class BayesKind { plain, coprediction, independent_context };

enum class ContextFeature { tag, parenttag, clength, slength };

std::string context_feature_name(ContextFeature f);
ContextFeature parse_context_feature(const std::string& name);

// Raw counts for one binary conditional P(M | pi): n[m][pi].
struct BinaryCounts {
    std::array<std::array<std::int64_t, 2>, 2> n{{{0, 0}, {0, 0}}};
};

// Per-feature table for the threshold-adjustment factors P(T | pi).
struct ContextTable {
    std::map<std::string, std::array<std::int64_t, 2>> value_counts;  // value -> per-pi
    std::array<std::int64_t, 2> totals{0, 0};                         // per-pi totals
};

// Trained ensemble model. Counts (not just probabilities) are retained so a
// stored model can be audited; probabilities are derived on demand with
// add-lambda smoothing, so every conditional is strictly inside (0, 1).
struct BayesModel {
    BayesKind kind = BayesKind::plain;
    int k = 0;           // ensemble size the model was trained for
    double lambda = 1.0; // smoothing constant, > 0
    std::vector<ContextFeature> features;  // configured context features

    std::int64_t prior_true = 0;
    std::int64_t prior_total = 0;
    std::vector<BinaryCounts> parser;  // per-parser conditionals (plain/independent)
    // Per-parser conditionals keyed by the joint context value (coprediction).
    std::vector<std::map<std::string, BinaryCounts>> parser_by_context;
    std::vector<ContextTable> context_tables;  // per feature (independent_context)

    double p_prior(bool pi) const;
    double p_m(int parser_index, bool m, bool pi) const;
    double p_m_ctx(int parser_index, bool m, bool pi, const std::string& ctx) const;
    double p_ctx(std::size_t feature_index, const std::string& value, bool pi) const;

    // Versioned text serialization carrying the counts.
    std::string to_text() const;
    static BayesModel from_text(const std::string& text);
};

// The context value of a constituent, computed against the sentence's merged
// candidate universe (parent = smallest strictly containing constituent
// there, "TOP" when none). Length features use the shared buckets.
std::string context_value(ContextFeature f, const Constituent& c,
                          const ConstituentSet& universe);

// Estimates the model from line-aligned parser runs and references. The
// per-sentence event universe is the union of the parser sets and the
// reference set; pi(c) is true iff the reference contains c.
BayesModel bayes_train(const std::vector<std::vector<ConstituentSet>>& runs,
                       const std::vector<ConstituentSet>& references,
                       double lambda = 1.0, BayesKind kind = BayesKind::plain,
                       const std::vector<ContextFeature>& features = {});

// Keeps each candidate-universe constituent whose posterior for inclusion
// strictly beats the posterior for exclusion.
ConstituentSet bayes_hybrid(const BayesModel& model,
                            const std::vector<ConstituentSet>& sets);

// Scores each candidate parse by the joint posterior of the in/out decisions
// it makes over the candidate universe (accumulated in log space) and picks
// the best; ties go to the lowest index.
SwitchDecision bayes_switch(const BayesModel& model,
                            const std::vector<ConstituentSet>& candidates);

}  // namespace parsemble

#endif  // PARSEMBLE_COMBINER_HPP
