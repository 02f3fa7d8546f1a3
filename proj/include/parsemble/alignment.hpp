// Aligning two parses constituent-by-constituent: pluggable edit distances,
// minimum-weight edge cover over the bipartite constituent graph (each side
// extended with a NULL vertex for insertions/deletions), alignment-based
// parser switching, and the greedy consensus parse built from pairwise
// alignments.

#ifndef PARSEMBLE_ALIGNMENT_HPP
#define PARSEMBLE_ALIGNMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "parsemble/combiner.hpp"  // SwitchDecision
#include "parsemble/treebank.hpp"

namespace parsemble {

enum class EditDistanceKind { kronecker, piecewise, looselabel, linear, stringent };

std::string distance_kind_name(EditDistanceKind k);
EditDistanceKind parse_distance_kind(const std::string& name);

// Distance between two constituents, either of which may be NULL
// (std::nullopt) but not both. Unreachable edits are +infinity; align()
// replaces them with a per-instance finite substitute.
double constituent_distance_raw(EditDistanceKind kind,
                                const std::optional<Constituent>& X,
                                const std::optional<Constituent>& Y);

struct EditDistanceSpec {
    EditDistanceKind kind = EditDistanceKind::kronecker;
    double infinity_substitute = 0.0;  // finite stand-in for +infinity
};

// Same as the raw distance with infinities mapped to the substitute.
double constituent_distance(const EditDistanceSpec& spec,
                            const std::optional<Constituent>& X,
                            const std::optional<Constituent>& Y);

// One chosen edge; index -1 denotes the NULL vertex of that side.
struct AlignedPair {
    int left = -1;
    int right = -1;
    double weight = 0.0;
};

struct Alignment {
    std::vector<AlignedPair> pairs;  // canonical order: (left, right) ascending
    double cost = 0.0;               // sum of distinct chosen-edge weights
    EditDistanceSpec spec;           // kind + the substitute used
};

// Minimum-weight edge cover between A's and B's constituents: every real
// vertex is covered by at least one chosen edge, NULL vertices are exempt.
// The infinity substitute is 2 * (sum of finite edge weights) + 1, so an
// optimal cover can never afford an infinite edge.
Alignment align(const ConstituentSet& A, const ConstituentSet& B,
                EditDistanceKind kind);

// argmin_i sum_{j != i} align(candidate_i, candidate_j).cost; ties go to the
// lowest index.
SwitchDecision alignment_switch(const std::vector<ConstituentSet>& candidates,
                                EditDistanceKind kind);

// Default consensus acceptance threshold: (k-1) * null-cost / 2, i.e. a
// constituent missing from half the other parses is still worth keeping.
// The span-difference distance has no constant null cost; a nominal 2 is
// used there.
double default_consensus_threshold(EditDistanceKind kind, int k);

// Greedy consensus over the merged pairwise-alignment graph: repeatedly take
// the constituent with the cheapest total edge weight f(c) (ties: lowest
// parse index, then span, then label), stop once f exceeds `t`, and drop the
// chosen node together with its aligned neighbors. NULL vertices are never
// selected and never removed.
ConstituentSet consensus_parse(const std::vector<ConstituentSet>& candidates,
                               EditDistanceKind kind, double t);

}  // namespace parsemble

#endif  // PARSEMBLE_ALIGNMENT_HPP
