#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "parsemble/errors.hpp"
#include "parsemble/treebank.hpp"
#include "support.hpp"

using namespace parsemble;
using test_support::make_tokens;
using test_support::random_set;
using test_support::random_tree;

namespace {

ConstituentSet set_of(int length, std::vector<Constituent> items) {
    ConstituentSet out;
    out.length = length;
    for (Constituent& c : items) out.insert(std::move(c));
    out.normalize();
    return out;
}

}  // namespace

TEST_CASE("reading a bracketed line yields the token sequence") {
    const auto trees = read_trees("(TOP (S (NP (N She)) (VP (V saw))))");
    REQUIRE(trees.size() == 1);
    CHECK(trees[0].token_count() == 2);
    const auto tokens = trees[0].tokens();
    CHECK(tokens[0].word == "She");
    CHECK(tokens[0].pos == "N");
    CHECK(tokens[1].word == "saw");
    CHECK(tokens[1].pos == "V");
}

TEST_CASE("reading rejects malformed input") {
    CHECK_THROWS_AS(read_trees("(TOP (S (NP She))"), TreeParseError);   // unbalanced
    CHECK_THROWS_AS(read_trees("(TOP (S (NP)))"), TreeParseError);      // childless
    CHECK_THROWS_AS(read_trees(")"), TreeParseError);
    CHECK_THROWS_AS(read_trees("(TOP (S extra (NP (N a))))"), TreeParseError);
}

TEST_CASE("writing is the inverse of reading") {
    const std::string line = "(TOP (S (NP (N She)) (VP (V saw))))";
    const auto trees = read_trees(line);
    CHECK(write_tree(trees[0]) == line);
    CHECK(write_trees({}) == "");

    SplitRng rng(2024);
    for (int i = 0; i < 200; ++i) {
        const ParseTree tree =
            random_tree(rng, rng.next_int(1, 12), {"S", "NP", "VP", "PP"});
        const auto back = read_trees(write_tree(tree));
        REQUIRE(back.size() == 1);
        CHECK(back[0] == tree);
    }
}

TEST_CASE("writing rejects labels with whitespace") {
    ParseTree bad;
    bad.label = "N P";
    bad.word = "x";
    ParseTree root;
    root.label = "TOP";
    root.children.push_back(bad);
    CHECK_THROWS_AS((void)write_tree(root), DataError);
}

TEST_CASE("transforming keeps an inner constituent spanning the whole sentence") {
    const auto trees = read_trees("(TOP (S (NP (N She)) (VP (V saw)) (. .)))");
    const EvalbResult result = evalb_transform(trees[0]);
    CHECK_FALSE(result.empty_after_pruning);
    CHECK(result.set.length == 2);
    CHECK(result.set == set_of(2, {{0, 1, "NP"}, {1, 2, "VP"}, {0, 2, "S"}}));
}

TEST_CASE("transforming a punctuation-only sentence reports emptiness") {
    const auto trees = read_trees("(TOP (X (. .)))");
    const EvalbResult result = evalb_transform(trees[0]);
    CHECK(result.empty_after_pruning);
    CHECK(result.set.items.empty());
}

TEST_CASE("transforming the attachment-ambiguity fixture") {
    // Nine tokens; the instrument phrase attaches high, outside the object.
    const std::string line =
        "(S (NP (N She)) (VP (V saw) (NP (NP (Det the) (N boy)) (PP (P on) "
        "(NP (Det the) (N hill))))) (PP (P with) (NP (N binoculars))))";
    const auto trees = read_trees(line);
    const EvalbResult result = evalb_transform(trees[0]);
    CHECK(result.set.length == 9);
    CHECK(result.set == set_of(9, {{0, 1, "NP"},
                                   {1, 7, "VP"},
                                   {2, 4, "NP"},
                                   {2, 7, "NP"},
                                   {4, 7, "PP"},
                                   {5, 7, "NP"},
                                   {7, 9, "PP"},
                                   {8, 9, "NP"}}));
}

TEST_CASE("transforming strips traces and punctuation but keeps their record") {
    const auto trees = read_trees(
        "(TOP (S (NP (N She)) (, ,) (VP (V saw) (NP (-NONE- *T*))) (. .)))");
    const EvalbResult result = evalb_transform(trees[0]);
    CHECK(result.set.length == 2);
    CHECK(result.tokens.size() == 2);
    // Pruned length = original token count - punctuation - traces.
    CHECK(trees[0].token_count() == 5);
    int punct = 0, traces = 0;
    for (const PrunedToken& p : result.record.removed) (p.is_trace ? traces : punct)++;
    CHECK(punct == 2);
    CHECK(traces == 1);
    CHECK(result.set.length == trees[0].token_count() - punct - traces);
}

TEST_CASE("transformed sets never contain the dropped root span") {
    SplitRng rng(7);
    for (int i = 0; i < 300; ++i) {
        const int n = rng.next_int(1, 12);
        const ParseTree tree = random_tree(rng, n, {"S", "NP", "VP"});
        const EvalbResult result = evalb_transform(tree);
        if (result.empty_after_pruning) continue;
        // The root span may appear at most fewer times than in the raw tree;
        // count full-span nodes in the tree and in the set.
        int full_in_set = 0;
        for (const Constituent& c : result.set.items)
            if (c.start == 0 && c.end == result.set.length) ++full_in_set;
        std::function<int(const ParseTree&)> full_in_tree = [&](const ParseTree& t) {
            int count = t.token_count() == n && !t.is_preterminal() ? 1 : 0;
            for (const ParseTree& child : t.children) count += full_in_tree(child);
            return count;
        };
        // Exactly one full-span constituent (the root) is removed; duplicates
        // collapse further because the result is a set.
        CHECK(full_in_set <= full_in_tree(tree) - 1);
    }
}

TEST_CASE("rebuilding inserts punctuation beside its left neighbor") {
    // Trailing period: its left neighbor is token 1, inside B but not A, so
    // the period lands inside B only.
    const ConstituentSet set = set_of(2, {{0, 1, "A"}, {0, 2, "B"}});
    PunctuationRecord record;
    record.root_label = "TOP";
    record.original_token_count = 3;
    record.removed.push_back({2, ".", ".", 2, false});
    const ParseTree tree = inverse_evalb(set, record, make_tokens(2));

    REQUIRE(tree.children.size() == 1);  // TOP -> B
    const ParseTree& b = tree.children[0];
    CHECK(b.label == "B");
    REQUIRE(b.children.size() == 3);  // A, token 1, period
    CHECK(b.children[0].label == "A");
    CHECK(b.children[2].word == ".");

    const EvalbResult back = evalb_transform(tree);
    CHECK(back.set.items == set.items);
}

TEST_CASE("rebuilding rejects crossing brackets") {
    const ConstituentSet bad = set_of(3, {{0, 2, "A"}, {1, 3, "B"}});
    PunctuationRecord record;
    record.original_token_count = 3;
    CHECK_THROWS_WITH_AS((void)inverse_evalb(bad, record, make_tokens(3)),
                         doctest::Contains("(0,2,A)"), DataError);
}

TEST_CASE("transform then rebuild is the identity on constituent sets") {
    SplitRng rng(99);
    const std::vector<std::string> punct_pos{",", ":", "``", "''", "."};
    for (int i = 0; i < 300; ++i) {
        const int n = rng.next_int(1, 10);
        ConstituentSet set = random_set(rng, n, {"S", "NP", "VP"});

        // Inject punctuation at random original positions around the n kept
        // tokens: choose original slots for the kept tokens, the rest become
        // punctuation.
        const int extra = rng.next_int(0, 3);
        PunctuationRecord record;
        record.root_label = "TOP";
        record.original_token_count = n + extra;
        std::set<int> punct_slots;
        while (int(punct_slots.size()) < extra)
            punct_slots.insert(rng.next_int(0, n + extra - 1));
        int kept_before = 0;
        for (int slot = 0; slot < n + extra; ++slot) {
            if (punct_slots.count(slot)) {
                const std::string pos =
                    punct_pos[std::size_t(rng.next_int(0, 4))];
                record.removed.push_back({slot, pos, pos, kept_before, false});
            } else {
                ++kept_before;
            }
        }

        const ParseTree tree = inverse_evalb(set, record, make_tokens(n));
        const EvalbResult back = evalb_transform(tree);
        CHECK(back.set.length == n);
        CHECK(back.set.items == set.items);
    }
}

TEST_CASE("punctuation record survives serialization") {
    PunctuationRecord record;
    record.root_label = "TOP";
    record.original_token_count = 4;
    record.removed.push_back({1, ",", ",", 1, false});
    record.removed.push_back({3, "*T*", "-NONE-", 2, true});
    const PunctuationRecord back = PunctuationRecord::from_json(record.to_json());
    CHECK(back.root_label == record.root_label);
    CHECK(back.original_token_count == record.original_token_count);
    REQUIRE(back.removed.size() == 2);
    CHECK(back.removed[1].word == "*T*");
    CHECK(back.removed[1].is_trace);
}

TEST_CASE("enumeration counts match the closed forms") {
    // One token: only the empty bracketing (root span excluded).
    CHECK(enumerate_parses(1, {"X"}, 0).size() == 1);
    CHECK(enumerate_parses(1, {"X", "Y"}, 2).size() == 1);

    // Full-binary bracketings of n tokens with one label are the Catalan
    // numbers C(n-1): 1, 2, 5 for n = 2, 3, 4.
    CHECK(enumerate_parses(2, {"X"}, 2).size() == 1);
    CHECK(enumerate_parses(3, {"X"}, 2).size() == 2);
    CHECK(enumerate_parses(4, {"X"}, 2).size() == 5);

    // With L labels each of the n-1 non-root binary nodes picks a label
    // independently: C(n-1) * L^(n-2) for the binary case.
    CHECK(enumerate_parses(3, {"X", "Y"}, 2).size() == 2 * 2);
    CHECK(enumerate_parses(4, {"X", "Y"}, 2).size() == 5 * 4);

    CHECK_THROWS_AS((void)enumerate_parses(6, {"X"}, 0), UsageError);
    CHECK_THROWS_AS((void)enumerate_parses(3, {"A", "B", "C", "D"}, 0), UsageError);
}

TEST_CASE("enumeration yields distinct well-formed sets") {
    const auto space = enumerate_parses(4, {"X", "Y"}, 0);
    std::set<std::vector<Constituent>> seen;
    for (const ConstituentSet& set : space) {
        CHECK(set.length == 4);
        for (std::size_t i = 0; i < set.items.size(); ++i) {
            CHECK_FALSE((set.items[i].start == 0 && set.items[i].end == 4));
            for (std::size_t j = i + 1; j < set.items.size(); ++j)
                CHECK_FALSE(set.items[i].crosses(set.items[j]));
        }
        CHECK(seen.insert(set.items).second);
    }
    // Every random non-crossing single-label-per-span set over 4 tokens
    // appears in the enumeration.
    SplitRng rng(5);
    for (int i = 0; i < 100; ++i) {
        ConstituentSet sample = random_set(rng, 4, {"X", "Y"});
        std::vector<Constituent> filtered;
        for (const Constituent& c : sample.items) {
            const bool root_span = c.start == 0 && c.end == 4;
            const bool duplicate_span =
                !filtered.empty() && filtered.back().start == c.start &&
                filtered.back().end == c.end;
            if (!root_span && !duplicate_span) filtered.push_back(c);
        }
        CHECK(seen.count(filtered) == 1);
    }
}
