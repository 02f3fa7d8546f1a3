// Shared fixtures for the test suites: seeded random constituent sets,
// random trees, and token builders. Everything draws from SplitRng so suites
// stay reproducible.

#ifndef PARSEMBLE_TESTS_SUPPORT_HPP
#define PARSEMBLE_TESTS_SUPPORT_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "parsemble/rng.hpp"
#include "parsemble/treebank.hpp"

namespace test_support {

using parsemble::Constituent;
using parsemble::ConstituentSet;
using parsemble::ParseTree;
using parsemble::SplitRng;
using parsemble::Token;

inline std::vector<Token> make_tokens(int n) {
    std::vector<Token> out;
    for (int i = 0; i < n; ++i)
        out.push_back({i, "w" + std::to_string(i), "T"});
    return out;
}

inline std::string pick_label(SplitRng& rng, const std::vector<std::string>& labels) {
    return labels[std::size_t(rng.next_int(0, int(labels.size()) - 1))];
}

// Random non-crossing constituent set over [0, n): recursively partitions the
// token range, bracketing each visited span with probability `density`.
// Same-span double labels appear occasionally, as unary chains produce them.
inline void random_set_spans(SplitRng& rng, int start, int end, bool is_root,
                             const std::vector<std::string>& labels, double density,
                             ConstituentSet& out) {
    if (!is_root && rng.next_double() < density) {
        const std::string label = pick_label(rng, labels);
        out.insert({start, end, label});
        if (labels.size() > 1 && rng.next_double() < 0.1) {
            std::string second = pick_label(rng, labels);
            if (second != label) out.insert({start, end, second});
        }
    }
    const int width = end - start;
    if (width < 2) return;
    // Split into 2 or 3 parts when room allows.
    const int parts = width >= 3 && rng.next_bool(0.5) ? 3 : 2;
    std::vector<int> cuts{start, end};
    while (int(cuts.size()) < parts + 1) {
        const int cut = rng.next_int(start + 1, end - 1);
        bool fresh = true;
        for (int c : cuts) fresh = fresh && c != cut;
        if (fresh) cuts.push_back(cut);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        random_set_spans(rng, cuts[i], cuts[i + 1], false, labels, density, out);
}

inline ConstituentSet random_set(SplitRng& rng, int length,
                                 const std::vector<std::string>& labels,
                                 double density = 0.6) {
    ConstituentSet out;
    out.length = length;
    random_set_spans(rng, 0, length, true, labels, density, out);
    out.normalize();
    return out;
}

// Random well-formed tree over `length` tokens: binary/ternary branching with
// occasional unary wrappers, every leaf a (POS, word) preterminal.
inline ParseTree random_tree_node(SplitRng& rng, int start, int end,
                                  const std::vector<std::string>& labels,
                                  const std::vector<Token>& tokens, int depth) {
    if (end - start == 1) {
        ParseTree pre;
        pre.label = tokens[std::size_t(start)].pos;
        pre.word = tokens[std::size_t(start)].word;
        if (depth > 0 && rng.next_double() < 0.15) {
            ParseTree wrap;
            wrap.label = pick_label(rng, labels);
            wrap.children.push_back(std::move(pre));
            return wrap;
        }
        return pre;
    }
    ParseTree node;
    node.label = pick_label(rng, labels);
    const int width = end - start;
    const int parts = width >= 3 && rng.next_bool(0.5) ? 3 : 2;
    std::vector<int> cuts{start, end};
    while (int(cuts.size()) < parts + 1) {
        const int cut = rng.next_int(start + 1, end - 1);
        bool fresh = true;
        for (int c : cuts) fresh = fresh && c != cut;
        if (fresh) cuts.push_back(cut);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        node.children.push_back(
            random_tree_node(rng, cuts[i], cuts[i + 1], labels, tokens, depth + 1));
    return node;
}

inline ParseTree random_tree(SplitRng& rng, int length,
                             const std::vector<std::string>& labels) {
    const std::vector<Token> tokens = make_tokens(length);
    ParseTree root;
    root.label = "TOP";
    root.children.push_back(random_tree_node(rng, 0, length, labels, tokens, 0));
    return root;
}

}  // namespace test_support

#endif  // PARSEMBLE_TESTS_SUPPORT_HPP