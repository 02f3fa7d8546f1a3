// Voting, switching and naive-Bayes combination.

#include "parsemble/combiner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "parsemble/metrics.hpp"

namespace parsemble {

namespace {

void require_same_length(const std::vector<ConstituentSet>& sets) {
    for (std::size_t i = 1; i < sets.size(); ++i)
        if (sets[i].length != sets[0].length)
            throw DataError("parser outputs disagree on sentence length: " +
                            std::to_string(sets[0].length) + " vs " +
                            std::to_string(sets[i].length));
}

ConstituentSet merged_universe(const std::vector<ConstituentSet>& sets,
                               const ConstituentSet* reference = nullptr) {
    ConstituentSet u;
    u.length = sets.empty() ? (reference ? reference->length : 0) : sets[0].length;
    for (const ConstituentSet& s : sets)
        for (const Constituent& c : s.items) u.insert(c);
    if (reference)
        for (const Constituent& c : reference->items) u.insert(c);
    return u;
}

}  // namespace

// --- Voting ----------------------------------------------------------------

ConstituentSet constituent_vote(const std::vector<ConstituentSet>& sets,
                                const VoteConfig& cfg) {
    if (cfg.k != static_cast<int>(sets.size()))
        throw UsageError("vote config k=" + std::to_string(cfg.k) + " but " +
                         std::to_string(sets.size()) + " parser outputs given");
    if (cfg.threshold < 1 || cfg.threshold > cfg.k)
        throw UsageError("vote threshold must be in [1, k], got " +
                         std::to_string(cfg.threshold));
    require_same_length(sets);
    std::map<Constituent, int> votes;
    for (const ConstituentSet& s : sets)
        for (const Constituent& c : s.items) votes[c] += 1;
    ConstituentSet out;
    out.sentence_id = sets.empty() ? 0 : sets[0].sentence_id;
    out.length = sets.empty() ? 0 : sets[0].length;
    for (const auto& [c, n] : votes)
        if (n >= cfg.threshold) out.items.push_back(c);
    out.normalize();
    return out;
}

std::optional<std::pair<Constituent, Constituent>> check_no_crossing(
    const ConstituentSet& set) {
    const auto& v = set.items;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[i].crosses(v[j])) return std::make_pair(v[i], v[j]);
    return std::nullopt;
}

// --- Unsupervised switching ------------------------------------------------

std::int64_t match_count(const ConstituentSet& a, const ConstituentSet& b) {
    std::int64_t n = 0;
    for (const Constituent& c : a.items)
        if (b.contains(c)) ++n;
    return n;
}

std::int64_t symmetric_difference_size(const ConstituentSet& a,
                                       const ConstituentSet& b) {
    return static_cast<std::int64_t>(a.items.size()) +
           static_cast<std::int64_t>(b.items.size()) - 2 * match_count(a, b);
}

namespace {

SwitchDecision pick_best(const std::vector<double>& scores, bool maximize) {
    SwitchDecision d;
    d.scores = scores;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        bool better = maximize ? scores[i] > scores[d.chosen]
                               : scores[i] < scores[d.chosen];
        if (better) d.chosen = i;
    }
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (i != d.chosen && scores[i] == scores[d.chosen]) d.tie = true;
    return d;
}

}  // namespace

SwitchDecision similarity_switch(const std::vector<ConstituentSet>& candidates) {
    if (candidates.size() < 2)
        throw UsageError("switching needs at least 2 candidates");
    require_same_length(candidates);
    std::vector<double> scores(candidates.size(), 0.0);
    for (std::size_t i = 0; i < candidates.size(); ++i)
        for (std::size_t j = 0; j < candidates.size(); ++j)
            if (i != j)
                scores[i] += static_cast<double>(match_count(candidates[i], candidates[j]));
    return pick_best(scores, /*maximize=*/true);
}

SwitchDecision distance_switch(const std::vector<ConstituentSet>& candidates) {
    if (candidates.size() < 2)
        throw UsageError("switching needs at least 2 candidates");
    require_same_length(candidates);
    std::vector<double> scores(candidates.size(), 0.0);
    for (std::size_t i = 0; i < candidates.size(); ++i)
        for (std::size_t j = 0; j < candidates.size(); ++j)
            if (i != j)
                scores[i] += static_cast<double>(
                    symmetric_difference_size(candidates[i], candidates[j]));
    return pick_best(scores, /*maximize=*/false);
}

// --- Naive Bayes -----------------------------------------------------------

std::string context_feature_name(ContextFeature f) {
    switch (f) {
        case ContextFeature::tag: return "tag";
        case ContextFeature::parenttag: return "parenttag";
        case ContextFeature::clength: return "clength";
        case ContextFeature::slength: return "slength";
    }
    return "?";
}

ContextFeature parse_context_feature(const std::string& name) {
    if (name == "tag") return ContextFeature::tag;
    if (name == "parenttag") return ContextFeature::parenttag;
    if (name == "clength") return ContextFeature::clength;
    if (name == "slength") return ContextFeature::slength;
    throw UsageError("unknown context feature '" + name +
                     "' (expected tag, parenttag, clength or slength)");
}

std::string context_value(ContextFeature f, const Constituent& c,
                          const ConstituentSet& universe) {
    switch (f) {
        case ContextFeature::tag: return c.label;
        case ContextFeature::parenttag: {
            const Constituent* best = nullptr;
            for (const Constituent& p : universe.items) {
                if (p.start <= c.start && c.end <= p.end &&
                    (p.end - p.start) > (c.end - c.start)) {
                    if (!best || (p.end - p.start) < (best->end - best->start) ||
                        ((p.end - p.start) == (best->end - best->start) &&
                         p.label < best->label))
                        best = &p;
                }
            }
            return best ? best->label : "TOP";
        }
        case ContextFeature::clength: return length_bucket(c.end - c.start);
        case ContextFeature::slength: return length_bucket(universe.length);
    }
    return "?";
}

namespace {

std::string joint_context(const std::vector<ContextFeature>& features,
                          const Constituent& c, const ConstituentSet& universe) {
    std::string out;
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (i) out += '|';
        out += context_value(features[i], c, universe);
    }
    return out;
}

}  // namespace

double BayesModel::p_prior(bool pi) const {
    double t = static_cast<double>(prior_true);
    double n = static_cast<double>(prior_total);
    double num = pi ? t : n - t;
    return (num + lambda) / (n + 2 * lambda);
}

double BayesModel::p_m(int parser_index, bool m, bool pi) const {
    const auto& n = parser.at(static_cast<std::size_t>(parser_index)).n;
    double num = static_cast<double>(n[m ? 1 : 0][pi ? 1 : 0]);
    double den = static_cast<double>(n[0][pi ? 1 : 0] + n[1][pi ? 1 : 0]);
    return (num + lambda) / (den + 2 * lambda);
}

double BayesModel::p_m_ctx(int parser_index, bool m, bool pi,
                           const std::string& ctx) const {
    const auto& table = parser_by_context.at(static_cast<std::size_t>(parser_index));
    auto it = table.find(ctx);
    if (it == table.end()) return 0.5;  // unseen context: maximally uninformative
    const auto& n = it->second.n;
    double num = static_cast<double>(n[m ? 1 : 0][pi ? 1 : 0]);
    double den = static_cast<double>(n[0][pi ? 1 : 0] + n[1][pi ? 1 : 0]);
    return (num + lambda) / (den + 2 * lambda);
}

double BayesModel::p_ctx(std::size_t feature_index, const std::string& value,
                         bool pi) const {
    const ContextTable& t = context_tables.at(feature_index);
    // One reserved slot for unseen values keeps the smoothed mass positive.
    double v = static_cast<double>(t.value_counts.size() + 1);
    auto it = t.value_counts.find(value);
    double num = it == t.value_counts.end()
                     ? 0.0
                     : static_cast<double>(it->second[pi ? 1 : 0]);
    double den = static_cast<double>(t.totals[pi ? 1 : 0]);
    return (num + lambda) / (den + v * lambda);
}

BayesModel bayes_train(const std::vector<std::vector<ConstituentSet>>& runs,
                       const std::vector<ConstituentSet>& references,
                       double lambda, BayesKind kind,
                       const std::vector<ContextFeature>& features) {
    if (lambda <= 0.0)
        throw UsageError("smoothing lambda must be > 0 (got " +
                         std::to_string(lambda) + ")");
    if (runs.empty()) throw DataError("no training sentences");
    if (runs.size() != references.size())
        throw DataError("training sentence count mismatch");
    if (kind == BayesKind::plain && !features.empty())
        throw UsageError("the plain model takes no context features");
    if (kind != BayesKind::plain && features.empty())
        throw UsageError("context-conditioned models need at least one feature");

    BayesModel model;
    model.kind = kind;
    model.lambda = lambda;
    model.features = features;
    model.k = static_cast<int>(runs[0].size());
    if (model.k < 1) throw DataError("no parsers in training runs");
    model.parser.resize(static_cast<std::size_t>(model.k));
    if (kind == BayesKind::coprediction)
        model.parser_by_context.resize(static_cast<std::size_t>(model.k));
    if (kind == BayesKind::independent_context)
        model.context_tables.resize(features.size());

    for (std::size_t s = 0; s < runs.size(); ++s) {
        const auto& parsers = runs[s];
        if (static_cast<int>(parsers.size()) != model.k)
            throw DataError("sentence " + std::to_string(s) + " has " +
                            std::to_string(parsers.size()) + " parser outputs, expected " +
                            std::to_string(model.k));
        for (const ConstituentSet& p : parsers)
            if (p.length != references[s].length)
                throw DataError("sentence " + std::to_string(s) +
                                ": parser/reference length mismatch");
        ConstituentSet universe = merged_universe(parsers, &references[s]);
        for (const Constituent& c : universe.items) {
            bool pi = references[s].contains(c);
            model.prior_total += 1;
            if (pi) model.prior_true += 1;
            std::string ctx;
            if (kind == BayesKind::coprediction)
                ctx = joint_context(features, c, universe);
            for (int i = 0; i < model.k; ++i) {
                bool m = parsers[static_cast<std::size_t>(i)].contains(c);
                model.parser[static_cast<std::size_t>(i)].n[m ? 1 : 0][pi ? 1 : 0] += 1;
                if (kind == BayesKind::coprediction)
                    model.parser_by_context[static_cast<std::size_t>(i)][ctx]
                        .n[m ? 1 : 0][pi ? 1 : 0] += 1;
            }
            if (kind == BayesKind::independent_context) {
                for (std::size_t f = 0; f < features.size(); ++f) {
                    std::string value = context_value(features[f], c, universe);
                    model.context_tables[f].value_counts[value][pi ? 1 : 0] += 1;
                    model.context_tables[f].totals[pi ? 1 : 0] += 1;
                }
            }
        }
    }
    if (model.prior_total == 0) throw DataError("training produced no events");
    return model;
}

namespace {

// log-space posterior contributions of one constituent's in/out decision.
double log_posterior(const BayesModel& model, const Constituent& c,
                     const ConstituentSet& universe,
                     const std::vector<ConstituentSet>& sets, bool pi) {
    double lp = std::log(model.p_prior(pi));
    std::string ctx;
    if (model.kind == BayesKind::coprediction)
        ctx = joint_context(model.features, c, universe);
    for (int i = 0; i < model.k; ++i) {
        bool m = sets[static_cast<std::size_t>(i)].contains(c);
        if (model.kind == BayesKind::coprediction)
            lp += std::log(model.p_m_ctx(i, m, pi, ctx));
        else
            lp += std::log(model.p_m(i, m, pi));
    }
    if (model.kind == BayesKind::independent_context) {
        for (std::size_t f = 0; f < model.features.size(); ++f) {
            std::string value = context_value(model.features[f], c, universe);
            lp += std::log(model.p_ctx(f, value, pi));
        }
    }
    return lp;
}

void require_model_fit(const BayesModel& model,
                       const std::vector<ConstituentSet>& sets) {
    if (static_cast<int>(sets.size()) != model.k)
        throw DataError("model trained for " + std::to_string(model.k) +
                        " parsers but " + std::to_string(sets.size()) + " given");
    require_same_length(sets);
}

}  // namespace

ConstituentSet bayes_hybrid(const BayesModel& model,
                            const std::vector<ConstituentSet>& sets) {
    require_model_fit(model, sets);
    ConstituentSet universe = merged_universe(sets);
    ConstituentSet out;
    out.sentence_id = sets.empty() ? 0 : sets[0].sentence_id;
    out.length = universe.length;
    for (const Constituent& c : universe.items) {
        double lt = log_posterior(model, c, universe, sets, true);
        double lf = log_posterior(model, c, universe, sets, false);
        if (lt > lf) out.items.push_back(c);
    }
    out.normalize();
    return out;
}

SwitchDecision bayes_switch(const BayesModel& model,
                            const std::vector<ConstituentSet>& candidates) {
    require_model_fit(model, candidates);
    if (candidates.size() < 2)
        throw UsageError("switching needs at least 2 candidates");
    ConstituentSet universe = merged_universe(candidates);
    std::vector<double> scores(candidates.size(), 0.0);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        double total = 0.0;
        for (const Constituent& c : universe.items) {
            bool pi = candidates[i].contains(c);
            total += log_posterior(model, c, universe, candidates, pi);
        }
        scores[i] = total;
    }
    return pick_best(scores, /*maximize=*/true);
}

// --- Serialization ---------------------------------------------------------

namespace {

nlohmann::json counts_to_json(const BinaryCounts& c) {
    return nlohmann::json::array(
        {nlohmann::json::array({c.n[0][0], c.n[0][1]}),
         nlohmann::json::array({c.n[1][0], c.n[1][1]})});
}

BinaryCounts counts_from_json(const nlohmann::json& j) {
    BinaryCounts c;
    for (int m = 0; m < 2; ++m)
        for (int p = 0; p < 2; ++p)
            c.n[static_cast<std::size_t>(m)][static_cast<std::size_t>(p)] =
                j.at(static_cast<std::size_t>(m)).at(static_cast<std::size_t>(p))
                    .get<std::int64_t>();
    return c;
}

std::string kind_name(BayesKind k) {
    switch (k) {
        case BayesKind::plain: return "plain";
        case BayesKind::coprediction: return "coprediction";
        case BayesKind::independent_context: return "independent_context";
    }
    return "?";
}

BayesKind kind_from_name(const std::string& s) {
    if (s == "plain") return BayesKind::plain;
    if (s == "coprediction") return BayesKind::coprediction;
    if (s == "independent_context") return BayesKind::independent_context;
    throw DataError("unknown model kind '" + s + "'");
}

}  // namespace

std::string BayesModel::to_text() const {
    nlohmann::json j;
    j["format"] = "parsemble-bayes-model";
    j["version"] = 1;
    j["kind"] = kind_name(kind);
    j["k"] = k;
    j["lambda"] = lambda;
    j["features"] = nlohmann::json::array();
    for (ContextFeature f : features) j["features"].push_back(context_feature_name(f));
    j["prior_true"] = prior_true;
    j["prior_total"] = prior_total;
    j["parsers"] = nlohmann::json::array();
    for (const BinaryCounts& c : parser) j["parsers"].push_back(counts_to_json(c));
    j["parsers_by_context"] = nlohmann::json::array();
    for (const auto& table : parser_by_context) {
        nlohmann::json t = nlohmann::json::object();
        for (const auto& [ctx, c] : table) t[ctx] = counts_to_json(c);
        j["parsers_by_context"].push_back(t);
    }
    j["context_tables"] = nlohmann::json::array();
    for (const ContextTable& t : context_tables) {
        nlohmann::json jt;
        jt["totals"] = nlohmann::json::array({t.totals[0], t.totals[1]});
        jt["values"] = nlohmann::json::object();
        for (const auto& [value, counts] : t.value_counts)
            jt["values"][value] = nlohmann::json::array({counts[0], counts[1]});
        j["context_tables"].push_back(jt);
    }
    return j.dump(2) + "\n";
}

BayesModel BayesModel::from_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad model file: ") + e.what());
    }
    if (j.value("format", "") != "parsemble-bayes-model")
        throw DataError("not a combination model file");
    if (j.value("version", 0) != 1)
        throw DataError("unsupported model file version");
    BayesModel m;
    m.kind = kind_from_name(j.at("kind").get<std::string>());
    m.k = j.at("k").get<int>();
    m.lambda = j.at("lambda").get<double>();
    for (const auto& f : j.value("features", nlohmann::json::array()))
        m.features.push_back(parse_context_feature(f.get<std::string>()));
    m.prior_true = j.at("prior_true").get<std::int64_t>();
    m.prior_total = j.at("prior_total").get<std::int64_t>();
    for (const auto& c : j.value("parsers", nlohmann::json::array()))
        m.parser.push_back(counts_from_json(c));
    for (const auto& table : j.value("parsers_by_context", nlohmann::json::array())) {
        std::map<std::string, BinaryCounts> t;
        for (auto it = table.begin(); it != table.end(); ++it)
            t[it.key()] = counts_from_json(it.value());
        m.parser_by_context.push_back(std::move(t));
    }
    for (const auto& jt : j.value("context_tables", nlohmann::json::array())) {
        ContextTable t;
        t.totals[0] = jt.at("totals").at(0).get<std::int64_t>();
        t.totals[1] = jt.at("totals").at(1).get<std::int64_t>();
        const auto& values = jt.at("values");
        for (auto it = values.begin(); it != values.end(); ++it)
            t.value_counts[it.key()] = {it.value().at(0).get<std::int64_t>(),
                                        it.value().at(1).get<std::int64_t>()};
        m.context_tables.push_back(std::move(t));
    }
    if (m.lambda <= 0.0) throw DataError("model file has non-positive lambda");
    return m;
}

}  // namespace parsemble
