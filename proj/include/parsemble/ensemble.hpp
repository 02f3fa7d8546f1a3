// Resampling ensembles over a trainable base parser: sentence weighting
// schemes, weighted resampling, bagging with majority voting, boosting with
// per-constituent decision masses and a full weight-history ledger, the
// three-sample contradiction simulation, and training diagnostics.

#ifndef PARSEMBLE_ENSEMBLE_HPP
#define PARSEMBLE_ENSEMBLE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "parsemble/rng.hpp"
#include "parsemble/treebank.hpp"
#include "parsemble/weak_parser.hpp"

namespace parsemble {

// ---------------------------------------------------------------------------
// Sentence distributions and resampling.

enum class WeightScheme { uniform, length, possibilities, inverse_length };

std::string weight_scheme_name(WeightScheme s);
WeightScheme parse_weight_scheme(const std::string& name);

// Normalized sentence weights: uniform, proportional to the token count n,
// to the number of candidate spans n*(n+1)/2, or to 1/n.
std::vector<double> sentence_distribution(const std::vector<ParseTree>& corpus,
                                          WeightScheme scheme);

// Draws `count` samples (indices into `weights`) with replacement from the
// cumulative distribution, consuming one uniform draw per sample.
std::vector<std::size_t> resample_indices(const std::vector<double>& weights,
                                          std::size_t count, SplitRng& rng);

std::vector<ParseTree> resample(const std::vector<ParseTree>& corpus,
                                const std::vector<double>& weights,
                                std::size_t count, SplitRng& rng);

// Number of distinct sentence strings in a replicate.
std::size_t unique_sentence_types(const std::vector<ParseTree>& replicate);

// ---------------------------------------------------------------------------
// Ensembles.

struct EnsembleMember {
    ModelPtr model;
    double alpha = 1.0;      // guarded value used for updates and voting
    double alpha_raw = 1.0;  // unguarded value straight from the formula
    int iteration = 0;       // 1-based training round
    bool discarded = false;  // dropped by back-off; excluded from voting
};

// Weighted constituent vote over the outputs' union: keep a constituent when
// the weight of the sets containing it strictly exceeds half the total
// weight. All-equal weights reduce to strict-majority voting.
ConstituentSet weighted_constituent_vote(const std::vector<ConstituentSet>& outputs,
                                         const std::vector<double>& weights);

enum class VoteWeight { alpha, log_inverse_alpha };

std::string vote_weight_name(VoteWeight v);
VoteWeight parse_vote_weight(const std::string& name);

// Per-member vote weight: the guarded alpha itself or log(1/alpha); discarded
// members get weight zero.
std::vector<double> vote_weights(const std::vector<EnsembleMember>& members,
                                 VoteWeight scheme);

// Parses every sentence with every non-discarded member and combines the
// per-member constituent sets by weighted vote. Failed parses become empty
// sets. Sentence ids are assigned 0..n-1.
std::vector<ConstituentSet> ensemble_parse(
    Learner& learner, const std::vector<EnsembleMember>& members,
    const std::vector<std::vector<Token>>& sentences, VoteWeight scheme, int jobs);

// ---------------------------------------------------------------------------
// Bagging.

struct BagConfig {
    int members = 11;
    WeightScheme scheme = WeightScheme::uniform;
    std::size_t replicate_size = 0;  // 0: corpus size
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct BagResult {
    std::vector<EnsembleMember> members;      // all alpha 1
    std::vector<std::size_t> replicate_types; // distinct sentences per replicate
};

BagResult bag(const std::vector<ParseTree>& corpus, Learner& learner,
              const BagConfig& config);

// ---------------------------------------------------------------------------
// Boosting.

enum class AlphaMode { precision, recall, f, const_accuracy };

std::string alpha_mode_name(AlphaMode m);
AlphaMode parse_alpha_mode(const std::string& name);

struct IterationRecord {
    int iteration = 0;        // 1-based
    double alpha_raw = 0.0;
    double alpha = 0.0;       // guarded value (0 when no member was kept)
    double error = 0.0;       // weighted share of wrong constituent decisions
    bool violation = false;   // error strictly above one half
    bool discarded = false;   // back-off dropped this round's member
    bool reset = false;       // distribution was reset to the initial one
    bool degenerate = false;  // alpha was non-finite; round skipped entirely
};

struct WeightLedger {
    // snapshots[0] is the initial distribution; one more after every round.
    std::vector<std::vector<double>> snapshots;
    std::vector<int> up_weight_counts;  // rounds in which a sample gained mass
    std::vector<IterationRecord> iterations;
};

struct BoostConfig {
    int rounds = 5;
    AlphaMode mode = AlphaMode::f;
    WeightScheme scheme = WeightScheme::uniform;  // initial distribution
    bool backoff = false;
    std::size_t replicate_size = 0;  // 0: corpus size
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct BoostResult {
    std::vector<EnsembleMember> members;  // discarded members stay, flagged
    WeightLedger ledger;
};

// One shared formula for re-weighting a sample from its per-constituent
// decision counts: correct decisions contribute alpha each, wrong ones 1.
double boost_factor(double alpha, std::int64_t correct, std::int64_t wrong);

BoostResult boost(const std::vector<ParseTree>& corpus, Learner& learner,
                  const BoostConfig& config);

// ---------------------------------------------------------------------------
// Contradiction simulation.
//
// Three one-token samples, two of which share a string with opposite labels.
// Each round the majority-vote learner must get one of the twins wrong; the
// run records the distribution entering the round, the starred (wrong)
// sample, its error mass, and the down-weighting multiplier applied to the
// correct samples through the shared boost_factor formula.

struct SimulationRow {
    std::array<double, 3> weights{};  // distribution entering the round
    int starred = 0;                  // 1-based wrong sample this round
    double epsilon = 0.0;             // its mass
    double multiplier = 0.0;          // epsilon / (1 - epsilon)
};

std::vector<SimulationRow> simulate_contradiction(int rounds);

// ---------------------------------------------------------------------------
// Diagnostics.

struct MemorizationReport {
    std::vector<std::size_t> unlearnable;  // indices the learner cannot reproduce
    std::vector<ParseTree> trimmed;        // corpus without those samples
};

// Trains on each sample alone (replicated `replication` times; the extra
// copies only matter to learners whose estimates depend on corpus size) and
// checks the parse reproduces the sample's constituents exactly.
MemorizationReport memorization_check(const std::vector<ParseTree>& corpus,
                                      Learner& learner, int replication = 10,
                                      int jobs = 1);

struct WeightBinRow {
    std::size_t snapshot = 0;  // index into the ledger's snapshots
    std::size_t bin = 0;       // 1-based, heaviest first
    std::size_t size = 0;
    double mean_weight = 0.0;
};

struct HeavySample {
    std::size_t sample = 0;
    double weight = 0.0;
};

struct WeightDiagnostics {
    std::vector<WeightBinRow> rows;
    std::vector<HeavySample> heaviest;  // from the final snapshot
};

// Summarizes the ledger: per snapshot, mean mass of equal-count weight bins
// (heaviest first), plus the final snapshot's top samples.
WeightDiagnostics diagnose_weights(const WeightLedger& ledger, std::size_t bins,
                                   std::size_t top_n);

}  // namespace parsemble

#endif  // PARSEMBLE_ENSEMBLE_HPP
