// Edit distances between constituents, minimum-weight edge cover via a
// reduction to assignment, alignment-based switching, and greedy consensus.

#include "parsemble/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>

#include "parsemble/errors.hpp"

namespace parsemble {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string distance_kind_name(EditDistanceKind k) {
    switch (k) {
        case EditDistanceKind::kronecker: return "kronecker";
        case EditDistanceKind::piecewise: return "piecewise";
        case EditDistanceKind::looselabel: return "looselabel";
        case EditDistanceKind::linear: return "linear";
        case EditDistanceKind::stringent: return "stringent";
    }
    throw UsageError("unknown distance kind");
}

EditDistanceKind parse_distance_kind(const std::string& name) {
    if (name == "kronecker") return EditDistanceKind::kronecker;
    if (name == "piecewise") return EditDistanceKind::piecewise;
    if (name == "looselabel") return EditDistanceKind::looselabel;
    if (name == "linear") return EditDistanceKind::linear;
    if (name == "stringent") return EditDistanceKind::stringent;
    throw UsageError("unknown distance kind: " + name);
}

double constituent_distance_raw(EditDistanceKind kind,
                                const std::optional<Constituent>& X,
                                const std::optional<Constituent>& Y) {
    if (!X && !Y) throw UsageError("distance between two NULL vertices is undefined");
    const bool null_edge = !X || !Y;
    if (!null_edge && *X == *Y) return 0.0;
    switch (kind) {
        case EditDistanceKind::kronecker:
            // Identity is free, insert/delete costs 1, everything else is
            // unreachable.
            return null_edge ? 1.0 : kInf;
        case EditDistanceKind::piecewise: {
            if (null_edge) return 2.0;
            const int diffs = int(X->start != Y->start) + int(X->end != Y->end) +
                              int(X->label != Y->label);
            return diffs == 1 ? 3.0 : kInf;
        }
        case EditDistanceKind::looselabel: {
            if (null_edge) return 2.0;
            // Same span, any label mismatch: one substitution.
            if (X->start == Y->start && X->end == Y->end) return 3.0;
            return kInf;
        }
        case EditDistanceKind::linear: {
            // Insert/delete costs the constituent's span length; moving one
            // endpoint of a same-label constituent costs the shift size.
            if (!Y) return double(X->end - X->start);
            if (!X) return double(Y->end - Y->start);
            if (X->label != Y->label) return kInf;
            if (X->start != Y->start && X->end != Y->end) return kInf;
            return double(std::abs(X->start - Y->start) + std::abs(X->end - Y->end));
        }
        case EditDistanceKind::stringent: {
            if (null_edge) return 2.0;
            if (X->start != Y->start && X->end != Y->end) return kInf;
            const bool span_differs = X->start != Y->start || X->end != Y->end;
            if (X->label != Y->label) return span_differs ? kInf : 3.0;
            return 3.0 * double(std::abs(X->start - Y->start) + std::abs(X->end - Y->end));
        }
    }
    throw UsageError("unknown distance kind");
}

double constituent_distance(const EditDistanceSpec& spec,
                            const std::optional<Constituent>& X,
                            const std::optional<Constituent>& Y) {
    const double d = constituent_distance_raw(spec.kind, X, Y);
    return std::isinf(d) ? spec.infinity_substitute : d;
}

namespace {

// Assignment problem on a square cost matrix (finite entries, negatives
// allowed) via the standard potentials algorithm; O(n^3). Returns the
// row-to-column assignment.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = int(cost.size());
    if (n == 0) return {};
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = kInf;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

std::optional<Constituent> vertex(const ConstituentSet& s, int index) {
    if (index < 0) return std::nullopt;
    return s.items[std::size_t(index)];
}

}  // namespace

Alignment align(const ConstituentSet& A, const ConstituentSet& B,
                EditDistanceKind kind) {
    const int na = int(A.items.size());
    const int nb = int(B.items.size());

    // Raw weights for every edge touching at least one real vertex.
    auto raw = [&](int i, int j) {
        return constituent_distance_raw(kind, vertex(A, i), vertex(B, j));
    };
    double finite_sum = 0.0;
    for (int i = -1; i < na; ++i) {
        for (int j = -1; j < nb; ++j) {
            if (i < 0 && j < 0) continue;
            const double d = raw(i, j);
            if (std::isfinite(d)) finite_sum += d;
        }
    }
    EditDistanceSpec spec{kind, 2.0 * finite_sum + 1.0};
    auto weight = [&](int i, int j) {
        return constituent_distance(spec, vertex(A, i), vertex(B, j));
    };

    // Cheapest incident edge per real vertex (candidate partners include the
    // opposite NULL). Ties prefer the NULL partner, then the lowest index,
    // purely for determinism.
    std::vector<double> min_a(std::size_t(na), kInf), min_b(std::size_t(nb), kInf);
    std::vector<int> arg_a(std::size_t(na), -1), arg_b(std::size_t(nb), -1);
    for (int i = 0; i < na; ++i) {
        min_a[std::size_t(i)] = weight(i, -1);
        for (int j = 0; j < nb; ++j) {
            const double w = weight(i, j);
            if (w < min_a[std::size_t(i)]) {
                min_a[std::size_t(i)] = w;
                arg_a[std::size_t(i)] = j;
            }
        }
    }
    for (int j = 0; j < nb; ++j) {
        min_b[std::size_t(j)] = weight(-1, j);
        for (int i = 0; i < na; ++i) {
            const double w = weight(i, j);
            if (w < min_b[std::size_t(j)]) {
                min_b[std::size_t(j)] = w;
                arg_b[std::size_t(j)] = i;
            }
        }
    }

    // A minimum edge cover decomposes into stars; shrinking every star to its
    // center leaves a matching M, and each vertex outside M pays its cheapest
    // incident edge. Minimizing over matchings equals an assignment problem on
    // reduced costs w'(i,j) = w(i,j) - min_a(i) - min_b(j) padded with
    // zero-cost dummies (a vertex left to the dummies simply keeps its
    // cheapest edge).
    const int n = na + nb;
    std::vector<std::vector<double>> reduced(std::size_t(n),
                                             std::vector<double>(std::size_t(n), 0.0));
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            reduced[std::size_t(i)][std::size_t(j)] =
                weight(i, j) - min_a[std::size_t(i)] - min_b[std::size_t(j)];
    const std::vector<int> assign = solve_assignment(reduced);

    // Collect the chosen edges: matched real-real pairs that actually help
    // (reduced cost < 0; ties are equivalent either way and resolve to the
    // two cheapest edges), plus the cheapest incident edge for every vertex
    // the matching left uncovered.
    std::map<std::pair<int, int>, double> chosen;
    std::vector<char> covered_a(std::size_t(na), 0), covered_b(std::size_t(nb), 0);
    for (int i = 0; i < na; ++i) {
        const int j = assign[std::size_t(i)];
        if (j < nb && reduced[std::size_t(i)][std::size_t(j)] < 0.0) {
            chosen.emplace(std::make_pair(i, j), weight(i, j));
            covered_a[std::size_t(i)] = 1;
            covered_b[std::size_t(j)] = 1;
        }
    }
    for (int i = 0; i < na; ++i)
        if (!covered_a[std::size_t(i)])
            chosen.emplace(std::make_pair(i, arg_a[std::size_t(i)]),
                           min_a[std::size_t(i)]);
    for (int j = 0; j < nb; ++j)
        if (!covered_b[std::size_t(j)])
            chosen.emplace(std::make_pair(arg_b[std::size_t(j)], j),
                           min_b[std::size_t(j)]);

    Alignment out;
    out.spec = spec;
    for (const auto& [edge, w] : chosen) {
        if (w >= spec.infinity_substitute) {
            // Unreachable by construction: the all-NULL cover is cheaper than
            // any cover using a substitute edge.
            throw std::logic_error("alignment selected an infinite-cost edge");
        }
        out.pairs.push_back(AlignedPair{edge.first, edge.second, w});
        out.cost += w;
    }
    return out;
}

SwitchDecision alignment_switch(const std::vector<ConstituentSet>& candidates,
                                EditDistanceKind kind) {
    if (candidates.empty()) throw UsageError("alignment switch needs at least one parse");
    SwitchDecision out;
    out.scores.assign(candidates.size(), 0.0);
    for (std::size_t i = 0; i < candidates.size(); ++i)
        for (std::size_t j = 0; j < candidates.size(); ++j)
            if (j != i) out.scores[i] += align(candidates[i], candidates[j], kind).cost;
    out.chosen = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (out.scores[i] < out.scores[out.chosen]) out.chosen = i;
    out.tie = false;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (i != out.chosen && out.scores[i] == out.scores[out.chosen]) out.tie = true;
    return out;
}

double default_consensus_threshold(EditDistanceKind kind, int k) {
    if (k < 1) throw UsageError("consensus needs at least one parse");
    const double null_cost = kind == EditDistanceKind::kronecker ? 1.0 : 2.0;
    return double(k - 1) * null_cost / 2.0;
}

ConstituentSet consensus_parse(const std::vector<ConstituentSet>& candidates,
                               EditDistanceKind kind, double t) {
    if (candidates.empty()) throw UsageError("consensus needs at least one parse");
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (candidates[i].length != candidates[0].length)
            throw DataError("consensus requires parses of one sentence (length mismatch)");
    }

    // Node ids: (parse index, item index). Edges come from the pairwise
    // alignments; all NULL vertices are merged into one pseudo-node that is
    // never selected and never removed, so its edges keep contributing to f.
    struct Edge {
        int parse = -1;  // neighbor's parse, -1 for the merged NULL
        int item = -1;
        double weight = 0.0;
    };
    std::vector<std::vector<std::vector<Edge>>> edges(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
        edges[i].resize(candidates[i].items.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (std::size_t j = i + 1; j < candidates.size(); ++j) {
            const Alignment al = align(candidates[i], candidates[j], kind);
            for (const AlignedPair& p : al.pairs) {
                if (p.left >= 0)
                    edges[i][std::size_t(p.left)].push_back(
                        Edge{p.right >= 0 ? int(j) : -1, p.right, p.weight});
                if (p.right >= 0)
                    edges[j][std::size_t(p.right)].push_back(
                        Edge{p.left >= 0 ? int(i) : -1, p.left, p.weight});
            }
        }
    }

    std::vector<std::vector<char>> alive(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
        alive[i].assign(candidates[i].items.size(), 1);

    ConstituentSet out;
    out.sentence_id = candidates[0].sentence_id;
    out.length = candidates[0].length;

    for (;;) {
        // Recompute f over the surviving graph: edges to removed constituents
        // are gone, edges to the merged NULL persist.
        bool found = false;
        std::size_t best_parse = 0, best_item = 0;
        double best_f = 0.0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            for (std::size_t a = 0; a < alive[i].size(); ++a) {
                if (!alive[i][a]) continue;
                double f = 0.0;
                for (const Edge& e : edges[i][a]) {
                    if (e.parse < 0 || alive[std::size_t(e.parse)][std::size_t(e.item)])
                        f += e.weight;
                }
                bool better = false;
                if (!found || f < best_f) {
                    better = true;
                } else if (f == best_f) {
                    const Constituent& cand = candidates[i].items[a];
                    const Constituent& cur = candidates[best_parse].items[best_item];
                    if (i < best_parse) {
                        better = true;
                    } else if (i == best_parse) {
                        better = std::tie(cand.start, cand.end, cand.label) <
                                 std::tie(cur.start, cur.end, cur.label);
                    }
                }
                if (better) {
                    found = true;
                    best_parse = i;
                    best_item = a;
                    best_f = f;
                }
            }
        }
        if (!found || best_f > t) break;
        out.insert(candidates[best_parse].items[best_item]);
        for (const Edge& e : edges[best_parse][best_item]) {
            if (e.parse >= 0) alive[std::size_t(e.parse)][std::size_t(e.item)] = 0;
        }
        alive[best_parse][best_item] = 0;
    }
    out.normalize();
    return out;
}

}  // namespace parsemble
