// Bracketed parse trees: data model, reading/writing, the evalb scoring
// normalization (trace stripping, punctuation pruning, span extraction) and
// its inverse (rebuilding a tree from a constituent set, reattaching
// punctuation), plus an exhaustive small-sentence parse enumerator used by
// oracle-style tests.

#ifndef PARSEMBLE_TREEBANK_HPP
#define PARSEMBLE_TREEBANK_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "parsemble/errors.hpp"

namespace parsemble {

// One terminal of a sentence.
struct Token {
    int index = 0;      // 0-based position within its sentence
    std::string word;
    std::string pos;    // part-of-speech tag

    bool operator==(const Token&) const = default;
};

// A labeled ordered tree. A node is either a preterminal (word set, no
// children) or an internal node (children set, word empty). `(N She)` becomes
// {label="N", word="She"}.
struct ParseTree {
    std::string label;
    std::string word;
    std::vector<ParseTree> children;

    bool is_preterminal() const { return children.empty(); }
    bool operator==(const ParseTree&) const = default;

    // All terminals, left to right, with indices assigned 0..n-1.
    std::vector<Token> tokens() const;
    // Number of terminals dominated by this node.
    int token_count() const;
};

// A labeled span: `start` terminals lie strictly to the left of the
// constituent, `end` = start + number of terminals it dominates.
struct Constituent {
    int start = 0;
    int end = 0;
    std::string label;

    bool operator==(const Constituent&) const = default;
    // Sort order: by start, then end, then label. Gives every container a
    // canonical layout so reports and ties are reproducible.
    auto operator<=>(const Constituent&) const = default;

    bool crosses(const Constituent& o) const {
        return (start < o.start && o.start < end && end < o.end) ||
               (o.start < start && start < o.end && o.end < end);
    }
    std::string str() const;
};

// The scorable image of one parse: a set of constituents over the pruned
// sentence. `items` is always sorted and duplicate-free; `duplicates` holds
// the extra copies that arise from unary chains repeating a (span, label)
// pair, kept only so the scorer can offer multiset counting.
struct ConstituentSet {
    int sentence_id = 0;
    int length = 0;  // terminal count after punctuation/trace pruning
    std::vector<Constituent> items;
    std::vector<Constituent> duplicates;

    bool contains(const Constituent& c) const;
    void insert(const Constituent& c);   // set insert; ignores duplicates
    void normalize();                    // sort + dedupe items into canonical form
    bool operator==(const ConstituentSet& o) const {
        return length == o.length && items == o.items;
    }
};

// Tokens removed by the scoring normalization, with everything needed to
// splice them back: original index, surface form, tag, and the pruned-token
// position they precede (their attachment context).
struct PrunedToken {
    int original_index = 0;
    std::string word;
    std::string pos;
    int pruned_position = 0;  // number of surviving tokens strictly left of it
    bool is_trace = false;    // trace/epsilon leaf rather than punctuation
};

struct PunctuationRecord {
    std::vector<PrunedToken> removed;
    std::string root_label = "TOP";  // root label of the source tree
    int original_token_count = 0;

    std::string to_json() const;
    static PunctuationRecord from_json(const std::string& text);
};

// Result of the scoring normalization of one tree.
struct EvalbResult {
    ConstituentSet set;
    PunctuationRecord record;
    std::vector<Token> tokens;      // surviving tokens, reindexed from 0
    bool empty_after_pruning = false;
};

// POS tags treated as punctuation (exact string match).
bool is_punctuation_pos(const std::string& pos);
// POS tag marking trace/epsilon leaves (exact string match on "-NONE-").
bool is_trace_pos(const std::string& pos);

// --- I/O ------------------------------------------------------------------

// Parses one tree per line. Empty (or all-whitespace) lines are skipped; a
// note per skipped line is appended to `warnings` when given. Unbalanced or
// malformed input raises TreeParseError with the 1-based line number.
std::vector<ParseTree> read_trees(const std::string& text,
                                  std::vector<std::string>* warnings = nullptr);

// Canonical one-line rendering, inverse of read_trees. Labels and words must
// be free of whitespace and parentheses.
std::string write_tree(const ParseTree& tree);
std::string write_trees(const std::vector<ParseTree>& trees);

// --- Scoring normalization -------------------------------------------------

// Normalizes a tree into its scorable constituent set:
//   1. drop trace leaves,
//   2. drop punctuation terminals (recorded for the inverse),
//   3. repeatedly drop constituents left with zero terminals,
//   4. collect (start, end, label) for internal nodes only (no preterminals),
//   5. drop the root node's own span (exactly one topmost constituent; inner
//      nodes that happen to span the whole pruned sentence are kept).
// Repeated (span, label) pairs from unary chains are deduplicated into
// `set.items` with the copies kept in `set.duplicates`.
EvalbResult evalb_transform(const ParseTree& tree);

// Rebuilds a tree from a non-crossing constituent set. Pruned tokens from
// `record` are spliced back in: each one is inserted into every constituent
// containing its left non-punctuation neighbor (right neighbor when there is
// no left one), i.e. it becomes a direct child of the deepest such
// constituent. `tokens` supplies the surviving terminals; when empty,
// placeholder terminals (w0/XX ...) are synthesized. Crossing input raises
// DataError naming the offending pair.
ParseTree inverse_evalb(const ConstituentSet& set, const PunctuationRecord& record,
                        const std::vector<Token>& tokens = {});

// --- Exhaustive enumeration (oracle support) -------------------------------

// Streams every properly nested labeled bracketing over `length` tokens to
// `sink` (return false from the sink to stop early). Spans never include the
// root span (0, length); each span carries exactly one label from `labels`.
// `max_branching` = 0 places no shape constraint (single-token constituents
// allowed); a value b >= 2 requires every implied node, the implicit root
// included, to have between 2 and b children (so b = 2 enumerates exactly
// the full-binary bracketings, whose count is a Catalan number).
// Refuses length > 5 or more than 3 labels: the space explodes.
void enumerate_parses(int length, const std::vector<std::string>& labels,
                      int max_branching,
                      const std::function<bool(const ConstituentSet&)>& sink);

// Convenience: materializes the whole enumeration.
std::vector<ConstituentSet> enumerate_parses(int length,
                                             const std::vector<std::string>& labels,
                                             int max_branching);

}  // namespace parsemble

#endif  // PARSEMBLE_TREEBANK_HPP
