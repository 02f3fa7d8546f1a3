// Count tables, aggregate metrics, isolated precision and the oracles.

#include "parsemble/metrics.hpp"

#include <algorithm>
#include <cassert>

namespace parsemble {

namespace {

void require_equal_lengths(const ConstituentSet& g, const ConstituentSet& r) {
    if (g.length != r.length)
        throw DataError("sentence length mismatch: guess " + std::to_string(g.length) +
                        " vs reference " + std::to_string(r.length));
}

// (span, label) -> multiplicity, including duplicate copies.
std::map<Constituent, int> multiset_counts(const ConstituentSet& s) {
    std::map<Constituent, int> m;
    for (const Constituent& c : s.items) m[c] += 1;
    for (const Constituent& c : s.duplicates) m[c] += 1;
    return m;
}

// Label of the smallest constituent in `s` strictly containing `c`, "TOP"
// when none contains it.
std::string parent_label(const ConstituentSet& s, const Constituent& c) {
    const Constituent* best = nullptr;
    for (const Constituent& p : s.items) {
        bool contains = p.start <= c.start && c.end <= p.end &&
                        (p.start != c.start || p.end != c.end || p.label != c.label);
        // Same-span entries do not strictly contain each other: a parent must
        // have a strictly larger span.
        bool strictly_larger = (p.end - p.start) > (c.end - c.start);
        if (contains && strictly_larger) {
            if (!best || (p.end - p.start) < (best->end - best->start)) best = &p;
        }
    }
    return best ? best->label : "TOP";
}

}  // namespace

double safe_ratio(double num, double den) {
    if (den == 0.0) return num == 0.0 ? 1.0 : 0.0;
    return num / den;
}

CountTable score(const ConstituentSet& guess, const ConstituentSet& reference,
                 bool multiset) {
    require_equal_lengths(guess, reference);
    CountTable t;
    if (!multiset) {
        for (const Constituent& c : guess.items)
            (reference.contains(c) ? t.a : t.b) += 1;
        for (const Constituent& c : reference.items)
            if (!guess.contains(c)) t.c += 1;
        return t;
    }
    auto gm = multiset_counts(guess);
    auto rm = multiset_counts(reference);
    for (const auto& [c, gcount] : gm) {
        auto it = rm.find(c);
        int rcount = it == rm.end() ? 0 : it->second;
        t.a += std::min(gcount, rcount);
        t.b += std::max(0, gcount - rcount);
    }
    for (const auto& [c, rcount] : rm) {
        auto it = gm.find(c);
        int gcount = it == gm.end() ? 0 : it->second;
        t.c += std::max(0, rcount - gcount);
    }
    return t;
}

std::map<std::string, CountTable> score_by_label(const ConstituentSet& guess,
                                                 const ConstituentSet& reference) {
    require_equal_lengths(guess, reference);
    std::map<std::string, CountTable> out;
    for (const Constituent& c : guess.items)
        (reference.contains(c) ? out[c.label].a : out[c.label].b) += 1;
    for (const Constituent& c : reference.items)
        if (!guess.contains(c)) out[c.label].c += 1;
    return out;
}

std::map<std::string, CountTable> score_by_parent(const ConstituentSet& guess,
                                                  const ConstituentSet& reference) {
    require_equal_lengths(guess, reference);
    std::map<std::string, CountTable> out;
    for (const Constituent& c : guess.items) {
        std::string key = parent_label(guess, c);
        (reference.contains(c) ? out[key].a : out[key].b) += 1;
    }
    for (const Constituent& c : reference.items)
        if (!guess.contains(c)) out[parent_label(reference, c)].c += 1;
    return out;
}

ScoreReport aggregate(const std::vector<CountTable>& tables) {
    if (tables.empty()) throw DataError("aggregate: no sentences to score");
    ScoreReport r;
    std::int64_t exact = 0;
    for (const CountTable& t : tables) {
        r.totals += t;
        if (t.exact()) ++exact;
    }
    r.sentence_count = static_cast<std::int64_t>(tables.size());
    double a = static_cast<double>(r.totals.a);
    double b = static_cast<double>(r.totals.b);
    double c = static_cast<double>(r.totals.c);
    r.precision = safe_ratio(a, a + b);
    r.recall = safe_ratio(a, a + c);
    r.f_measure = safe_ratio(2 * a, 2 * a + b + c);
    r.mean = (r.precision + r.recall) / 2.0;
    r.exact = static_cast<double>(exact) / static_cast<double>(r.sentence_count);
    return r;
}

ScoreReport evaluate(const std::vector<ConstituentSet>& guesses,
                     const std::vector<ConstituentSet>& references, bool multiset) {
    if (guesses.size() != references.size())
        throw DataError("sentence count mismatch: " + std::to_string(guesses.size()) +
                        " guesses vs " + std::to_string(references.size()) +
                        " references");
    std::vector<CountTable> tables;
    tables.reserve(guesses.size());
    std::map<std::string, CountTable> per_label;
    std::map<std::string, CountTable> per_parent;
    for (std::size_t i = 0; i < guesses.size(); ++i) {
        tables.push_back(score(guesses[i], references[i], multiset));
        for (const auto& [label, t] : score_by_label(guesses[i], references[i]))
            per_label[label] += t;
        for (const auto& [label, t] : score_by_parent(guesses[i], references[i]))
            per_parent[label] += t;
    }
    ScoreReport r = aggregate(tables);
    r.per_label = std::move(per_label);
    r.per_parent = std::move(per_parent);
    return r;
}

double directed_distance(const ConstituentSet& A, const ConstituentSet& B) {
    require_equal_lengths(A, B);
    if (A.items.empty()) return 0.0;
    std::int64_t missing = 0;
    for (const Constituent& c : A.items)
        if (!B.contains(c)) ++missing;
    return static_cast<double>(missing) / static_cast<double>(A.items.size());
}

std::string length_bucket(int n) {
    if (n <= 5) return std::to_string(n);
    if (n <= 10) return "6-10";
    if (n <= 20) return "11-20";
    return "21+";
}

std::map<std::string, IsolatedCell> isolated_precision(
    const std::vector<std::vector<ConstituentSet>>& parsers_by_sentence,
    const std::vector<ConstituentSet>& references, std::size_t parser_index,
    IsolatedContext context) {
    if (parsers_by_sentence.size() != references.size())
        throw DataError("isolated_precision: sentence count mismatch");
    std::map<std::string, IsolatedCell> out;
    for (std::size_t s = 0; s < parsers_by_sentence.size(); ++s) {
        const auto& parsers = parsers_by_sentence[s];
        if (parsers.size() < 3)
            throw DataError("isolated_precision needs at least 3 parsers, got " +
                            std::to_string(parsers.size()));
        if (parser_index >= parsers.size())
            throw DataError("isolated_precision: parser index out of range");
        const ConstituentSet& mine = parsers[parser_index];
        // Strict majority among the other k-1 parsers.
        std::size_t others = parsers.size() - 1;
        std::size_t threshold = others / 2 + 1;
        for (const Constituent& c : mine.items) {
            std::size_t votes = 0;
            for (std::size_t j = 0; j < parsers.size(); ++j)
                if (j != parser_index && parsers[j].contains(c)) ++votes;
            if (votes >= threshold) continue;  // not isolated
            std::string key;
            switch (context) {
                case IsolatedContext::none: key = "all"; break;
                case IsolatedContext::label: key = c.label; break;
                case IsolatedContext::parent: key = parent_label(mine, c); break;
                case IsolatedContext::span_length:
                    key = length_bucket(c.end - c.start);
                    break;
                case IsolatedContext::sentence_length:
                    key = length_bucket(mine.length);
                    break;
            }
            IsolatedCell& cell = out[key];
            cell.isolated += 1;
            if (references[s].contains(c)) cell.correct += 1;
        }
    }
    return out;
}

ScoreReport parser_switch_oracle(
    const std::vector<std::vector<ConstituentSet>>& candidates_by_sentence,
    const std::vector<ConstituentSet>& references) {
    if (candidates_by_sentence.size() != references.size())
        throw DataError("oracle: sentence count mismatch");
    std::vector<CountTable> picked;
    picked.reserve(references.size());
    for (std::size_t s = 0; s < references.size(); ++s) {
        const auto& cands = candidates_by_sentence[s];
        if (cands.empty()) throw DataError("oracle: no candidates for sentence " +
                                           std::to_string(s));
        CountTable best;
        double best_f = -1.0;
        for (const ConstituentSet& cand : cands) {
            CountTable t = score(cand, references[s]);
            double a = static_cast<double>(t.a);
            double f = safe_ratio(2 * a, 2 * a + static_cast<double>(t.b) +
                                             static_cast<double>(t.c));
            if (f > best_f) {  // strict: ties keep the lowest index
                best_f = f;
                best = t;
            }
        }
        picked.push_back(best);
    }
    return aggregate(picked);
}

ScoreReport max_precision_oracle(
    const std::vector<std::vector<ConstituentSet>>& candidates_by_sentence,
    const std::vector<ConstituentSet>& references) {
    if (candidates_by_sentence.size() != references.size())
        throw DataError("oracle: sentence count mismatch");
    std::vector<CountTable> tables;
    std::map<std::string, CountTable> per_label;
    tables.reserve(references.size());
    for (std::size_t s = 0; s < references.size(); ++s) {
        ConstituentSet pool;
        pool.length = references[s].length;
        for (const ConstituentSet& cand : candidates_by_sentence[s]) {
            require_equal_lengths(cand, references[s]);
            for (const Constituent& c : cand.items) pool.insert(c);
        }
        ConstituentSet kept;
        kept.length = references[s].length;
        for (const Constituent& c : pool.items)
            if (references[s].contains(c)) kept.insert(c);
        tables.push_back(score(kept, references[s]));
        for (const auto& [label, t] : score_by_label(kept, references[s]))
            per_label[label] += t;
    }
    ScoreReport r = aggregate(tables);
    r.per_label = std::move(per_label);
    return r;
}

}  // namespace parsemble
