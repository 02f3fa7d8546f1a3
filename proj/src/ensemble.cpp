// Ensemble training and combination over a base learner.

#include "parsemble/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "parsemble/errors.hpp"
#include "parsemble/metrics.hpp"
#include "parsemble/util.hpp"

namespace parsemble {

namespace {

constexpr double kAlphaFloor = 1e-6;
constexpr double kAlphaCeil = 1.0 - 1e-6;

void normalize(std::vector<double>& weights) {
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(sum > 0.0))
        throw DataError("weight distribution has no mass left");
    for (double& w : weights) w /= sum;
}

}  // namespace

std::string weight_scheme_name(WeightScheme s) {
    switch (s) {
        case WeightScheme::uniform: return "uniform";
        case WeightScheme::length: return "length";
        case WeightScheme::possibilities: return "possibilities";
        case WeightScheme::inverse_length: return "inverse";
    }
    throw UsageError("unknown weight scheme");
}

WeightScheme parse_weight_scheme(const std::string& name) {
    if (name == "uniform") return WeightScheme::uniform;
    if (name == "length") return WeightScheme::length;
    if (name == "possibilities") return WeightScheme::possibilities;
    if (name == "inverse") return WeightScheme::inverse_length;
    throw UsageError("unknown weight scheme: " + name);
}

std::vector<double> sentence_distribution(const std::vector<ParseTree>& corpus,
                                          WeightScheme scheme) {
    if (corpus.empty()) throw DataError("cannot weight an empty corpus");
    std::vector<double> weights(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const double n = double(corpus[i].token_count());
        if (n <= 0.0) throw DataError("corpus tree without tokens");
        switch (scheme) {
            case WeightScheme::uniform: weights[i] = 1.0; break;
            case WeightScheme::length: weights[i] = n; break;
            case WeightScheme::possibilities: weights[i] = n * (n + 1.0) / 2.0; break;
            case WeightScheme::inverse_length: weights[i] = 1.0 / n; break;
        }
    }
    normalize(weights);
    return weights;
}

std::vector<std::size_t> resample_indices(const std::vector<double>& weights,
                                          std::size_t count, SplitRng& rng) {
    if (weights.empty()) throw UsageError("cannot resample from an empty distribution");
    std::vector<double> cumulative(weights.size());
    std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
    const double total = cumulative.back();
    if (!(total > 0.0)) throw DataError("cannot resample from a zero distribution");
    std::vector<std::size_t> out(count);
    for (std::size_t s = 0; s < count; ++s) {
        const double u = rng.next_double() * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        out[s] = std::min(std::size_t(it - cumulative.begin()), weights.size() - 1);
    }
    return out;
}

std::vector<ParseTree> resample(const std::vector<ParseTree>& corpus,
                                const std::vector<double>& weights,
                                std::size_t count, SplitRng& rng) {
    if (corpus.size() != weights.size())
        throw UsageError("corpus and weight vector sizes differ");
    std::vector<ParseTree> out;
    out.reserve(count);
    for (std::size_t i : resample_indices(weights, count, rng))
        out.push_back(corpus[i]);
    return out;
}

std::size_t unique_sentence_types(const std::vector<ParseTree>& replicate) {
    std::set<std::string> seen;
    for (const ParseTree& tree : replicate) {
        std::ostringstream line;
        for (const Token& tok : tree.tokens()) line << tok.word << ' ';
        seen.insert(line.str());
    }
    return seen.size();
}

// ---------------------------------------------------------------------------
// Voting.

ConstituentSet weighted_constituent_vote(const std::vector<ConstituentSet>& outputs,
                                         const std::vector<double>& weights) {
    if (outputs.empty()) throw UsageError("vote needs at least one constituent set");
    if (outputs.size() != weights.size())
        throw UsageError("vote needs one weight per constituent set");
    for (std::size_t i = 1; i < outputs.size(); ++i) {
        if (outputs[i].length != outputs[0].length)
            throw DataError("vote requires parses of one sentence (length mismatch)");
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::map<Constituent, double> tally;
    for (std::size_t i = 0; i < outputs.size(); ++i)
        for (const Constituent& c : outputs[i].items) tally[c] += weights[i];
    ConstituentSet out;
    out.sentence_id = outputs[0].sentence_id;
    out.length = outputs[0].length;
    for (const auto& [c, mass] : tally)
        if (mass > total / 2.0) out.insert(c);
    out.normalize();
    return out;
}

std::string vote_weight_name(VoteWeight v) {
    switch (v) {
        case VoteWeight::alpha: return "alpha";
        case VoteWeight::log_inverse_alpha: return "log-inv-alpha";
    }
    throw UsageError("unknown vote weight");
}

VoteWeight parse_vote_weight(const std::string& name) {
    if (name == "alpha") return VoteWeight::alpha;
    if (name == "log-inv-alpha") return VoteWeight::log_inverse_alpha;
    throw UsageError("unknown vote weight: " + name);
}

std::vector<double> vote_weights(const std::vector<EnsembleMember>& members,
                                 VoteWeight scheme) {
    std::vector<double> out(members.size(), 0.0);
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (members[i].discarded) continue;
        out[i] = scheme == VoteWeight::alpha ? members[i].alpha
                                             : std::log(1.0 / members[i].alpha);
    }
    return out;
}

std::vector<ConstituentSet> ensemble_parse(
    Learner& learner, const std::vector<EnsembleMember>& members,
    const std::vector<std::vector<Token>>& sentences, VoteWeight scheme, int jobs) {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < members.size(); ++i)
        if (!members[i].discarded) active.push_back(i);
    if (active.empty()) throw DataError("no usable ensemble members");

    const std::vector<double> all_weights = vote_weights(members, scheme);
    std::vector<double> weights;
    for (std::size_t i : active) weights.push_back(all_weights[i]);

    // member-major parsing; each parse_batch call parallelizes internally.
    std::vector<std::vector<std::optional<ParseTree>>> parsed;
    parsed.reserve(active.size());
    for (std::size_t i : active)
        parsed.push_back(learner.parse_batch(*members[i].model, sentences, jobs));

    std::vector<ConstituentSet> voted(sentences.size());
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        std::vector<ConstituentSet> outputs;
        outputs.reserve(active.size());
        for (std::size_t m = 0; m < active.size(); ++m) {
            ConstituentSet set;
            if (parsed[m][s]) {
                set = evalb_transform(*parsed[m][s]).set;
            }
            set.sentence_id = std::int64_t(s);
            set.length = std::int64_t(sentences[s].size());
            outputs.push_back(std::move(set));
        }
        voted[s] = weighted_constituent_vote(outputs, weights);
    }
    return voted;
}

// ---------------------------------------------------------------------------
// Bagging.

BagResult bag(const std::vector<ParseTree>& corpus, Learner& learner,
              const BagConfig& config) {
    if (config.members < 1) throw UsageError("bagging needs at least one member");
    const std::vector<double> weights = sentence_distribution(corpus, config.scheme);
    const std::size_t m =
        config.replicate_size > 0 ? config.replicate_size : corpus.size();
    SplitRng base(config.seed);
    BagResult out;
    for (int r = 1; r <= config.members; ++r) {
        SplitRng rng = base.split("replicate", std::uint64_t(r));
        const std::vector<ParseTree> replicate = resample(corpus, weights, m, rng);
        out.replicate_types.push_back(unique_sentence_types(replicate));
        EnsembleMember member;
        member.model = learner.train(replicate);
        member.iteration = r;
        out.members.push_back(std::move(member));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Boosting.

std::string alpha_mode_name(AlphaMode m) {
    switch (m) {
        case AlphaMode::precision: return "precision";
        case AlphaMode::recall: return "recall";
        case AlphaMode::f: return "f";
        case AlphaMode::const_accuracy: return "const-acc";
    }
    throw UsageError("unknown alpha mode");
}

AlphaMode parse_alpha_mode(const std::string& name) {
    if (name == "precision") return AlphaMode::precision;
    if (name == "recall") return AlphaMode::recall;
    if (name == "f") return AlphaMode::f;
    if (name == "const-acc") return AlphaMode::const_accuracy;
    throw UsageError("unknown alpha mode: " + name);
}

double boost_factor(double alpha, std::int64_t correct, std::int64_t wrong) {
    // Per constituent decision: a correct one contributes alpha, a wrong one
    // alpha + (1 - alpha) = 1.
    return alpha * double(correct) + double(wrong);
}

BoostResult boost(const std::vector<ParseTree>& corpus, Learner& learner,
                  const BoostConfig& config) {
    if (config.rounds < 1) throw UsageError("boosting needs at least one round");
    const std::size_t n = corpus.size();
    const std::size_t m = config.replicate_size > 0 ? config.replicate_size : n;

    std::vector<std::vector<Token>> tokens(n);
    std::vector<ConstituentSet> refs(n);
    for (std::size_t i = 0; i < n; ++i) {
        tokens[i] = corpus[i].tokens();
        refs[i] = evalb_transform(corpus[i]).set;
    }

    const std::vector<double> initial = sentence_distribution(corpus, config.scheme);
    std::vector<double> dist = initial;

    BoostResult out;
    out.ledger.snapshots.push_back(dist);
    out.ledger.up_weight_counts.assign(n, 0);
    SplitRng base(config.seed);

    for (int t = 1; t <= config.rounds; ++t) {
        SplitRng rng = base.split("replicate", std::uint64_t(t));
        const std::vector<ParseTree> replicate = resample(corpus, dist, m, rng);
        ModelPtr model = learner.train(replicate);
        const auto parses = learner.parse_batch(*model, tokens, config.jobs);

        // Per-sample decision counts over the union of reference and
        // hypothesis constituents: matches are correct decisions, both error
        // directions are wrong ones. A failed parse abstains: it contributes
        // no decisions and keeps its weight through the update.
        std::vector<std::int64_t> correct(n, 0), wrong(n, 0);
        std::vector<char> abstained(n, 0);
        double mass_match = 0.0, mass_over = 0.0, mass_miss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!parses[i]) {
                abstained[i] = 1;
                continue;
            }
            const ConstituentSet hyp = evalb_transform(*parses[i]).set;
            const CountTable counts = score(hyp, refs[i]);
            correct[i] = counts.a;
            wrong[i] = counts.b + counts.c;
            const double total = double(counts.a + counts.b + counts.c);
            if (total <= 0.0) continue;
            mass_match += dist[i] * double(counts.a) / total;
            mass_over += dist[i] * double(counts.b) / total;
            mass_miss += dist[i] * double(counts.c) / total;
        }

        IterationRecord record;
        record.iteration = t;
        const double mass_wrong = mass_over + mass_miss;
        const double mass_total = mass_match + mass_wrong;
        record.error = mass_total > 0.0 ? mass_wrong / mass_total : 0.0;

        double alpha_raw = std::numeric_limits<double>::quiet_NaN();
        switch (config.mode) {
            case AlphaMode::precision: alpha_raw = mass_over / mass_match; break;
            case AlphaMode::recall: alpha_raw = mass_miss / mass_match; break;
            case AlphaMode::f: alpha_raw = mass_wrong / (2.0 * mass_match); break;
            case AlphaMode::const_accuracy: alpha_raw = mass_wrong / mass_match; break;
        }
        record.alpha_raw = alpha_raw;

        if (!std::isfinite(alpha_raw)) {
            // No usable confidence value this round; keep the distribution
            // and train the next round from it.
            record.degenerate = true;
            out.ledger.iterations.push_back(record);
            out.ledger.snapshots.push_back(dist);
            continue;
        }

        record.violation = record.error > 0.5;
        if (record.violation && config.backoff) {
            EnsembleMember member;
            member.model = std::move(model);
            member.alpha_raw = alpha_raw;
            member.iteration = t;
            member.discarded = true;
            out.members.push_back(std::move(member));
            dist = initial;
            record.discarded = true;
            record.reset = true;
            out.ledger.iterations.push_back(record);
            out.ledger.snapshots.push_back(dist);
            continue;
        }

        const double alpha = std::clamp(alpha_raw, kAlphaFloor, kAlphaCeil);
        record.alpha = alpha;
        EnsembleMember member;
        member.model = std::move(model);
        member.alpha = alpha;
        member.alpha_raw = alpha_raw;
        member.iteration = t;
        out.members.push_back(std::move(member));

        std::vector<double> next = dist;
        for (std::size_t i = 0; i < n; ++i) {
            if (abstained[i]) continue;
            next[i] = dist[i] * boost_factor(alpha, correct[i], wrong[i]);
        }
        normalize(next);
        for (std::size_t i = 0; i < n; ++i)
            if (next[i] > dist[i]) ++out.ledger.up_weight_counts[i];
        dist = std::move(next);
        out.ledger.iterations.push_back(record);
        out.ledger.snapshots.push_back(dist);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Contradiction simulation.

std::vector<SimulationRow> simulate_contradiction(int rounds) {
    if (rounds < 1) throw UsageError("simulation needs at least one round");
    // Samples: (a, +1), (a, -1), (b, +1). The majority-vote learner predicts
    // the heavier label per string (ties predict +1), so exactly one of the
    // twins is wrong each round.
    std::array<double, 3> dist{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    std::vector<SimulationRow> out;
    for (int t = 0; t < rounds; ++t) {
        SimulationRow row;
        row.weights = dist;
        const bool predict_positive = dist[0] >= dist[1];
        const std::size_t wrong = predict_positive ? 1 : 0;
        row.starred = int(wrong) + 1;
        row.epsilon = dist[wrong];
        row.multiplier = row.epsilon / (1.0 - row.epsilon);
        double sum = 0.0;
        for (std::size_t i = 0; i < dist.size(); ++i) {
            // Each sample carries a single decision, so the shared update
            // formula multiplies correct samples by the multiplier and keeps
            // the wrong one.
            dist[i] *= i == wrong ? boost_factor(row.multiplier, 0, 1)
                                  : boost_factor(row.multiplier, 1, 0);
            sum += dist[i];
        }
        for (double& w : dist) w /= sum;
        out.push_back(row);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Diagnostics.

MemorizationReport memorization_check(const std::vector<ParseTree>& corpus,
                                      Learner& learner, int replication,
                                      int jobs) {
    if (replication < 1) throw UsageError("replication must be at least 1");
    std::vector<char> learnable(corpus.size(), 0);
    parallel_for(corpus.size(), jobs, [&](std::size_t i) {
        const std::vector<ParseTree> mini(std::size_t(replication), corpus[i]);
        const ModelPtr model = learner.train(mini);
        const auto parsed = learner.parse(*model, corpus[i].tokens());
        if (!parsed) return;
        const ConstituentSet ref = evalb_transform(corpus[i]).set;
        const CountTable counts = score(evalb_transform(*parsed).set, ref);
        learnable[i] = counts.exact() ? 1 : 0;
    });
    MemorizationReport out;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (learnable[i]) {
            out.trimmed.push_back(corpus[i]);
        } else {
            out.unlearnable.push_back(i);
        }
    }
    return out;
}

WeightDiagnostics diagnose_weights(const WeightLedger& ledger, std::size_t bins,
                                   std::size_t top_n) {
    if (bins < 1) throw UsageError("need at least one weight bin");
    WeightDiagnostics out;
    for (std::size_t s = 0; s < ledger.snapshots.size(); ++s) {
        std::vector<double> sorted = ledger.snapshots[s];
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        const std::size_t m = sorted.size();
        const std::size_t k = std::min(bins, m);
        std::size_t offset = 0;
        for (std::size_t b = 0; b < k; ++b) {
            const std::size_t size = m / k + (b < m % k ? 1 : 0);
            double sum = 0.0;
            for (std::size_t i = 0; i < size; ++i) sum += sorted[offset + i];
            out.rows.push_back(WeightBinRow{s, b + 1, size, sum / double(size)});
            offset += size;
        }
    }
    if (!ledger.snapshots.empty() && top_n > 0) {
        const std::vector<double>& last = ledger.snapshots.back();
        std::vector<std::size_t> order(last.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return last[a] > last[b];
        });
        for (std::size_t i = 0; i < std::min(top_n, order.size()); ++i)
            out.heaviest.push_back(HeavySample{order[i], last[order[i]]});
    }
    return out;
}

}  // namespace parsemble
