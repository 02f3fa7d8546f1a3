#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "parsemble/errors.hpp"
#include "parsemble/metrics.hpp"
#include "support.hpp"

using namespace parsemble;
using test_support::random_set;

namespace {

ConstituentSet set_of(int length, std::vector<Constituent> items) {
    ConstituentSet out;
    out.length = length;
    for (Constituent& c : items) out.insert(std::move(c));
    out.normalize();
    return out;
}

const std::vector<std::string> kLabels{"S", "NP", "VP"};

}  // namespace

TEST_CASE("counting splits constituents into matched, spurious, and missed") {
    const ConstituentSet r1 = set_of(1, {{0, 1, "NP"}});
    CHECK(score(r1, r1) == CountTable{1, 0, 0});

    const ConstituentSet g = set_of(2, {{0, 1, "NP"}, {0, 2, "S"}});
    const ConstituentSet r = set_of(2, {{0, 1, "NP"}, {1, 2, "VP"}});
    CHECK(score(g, r) == CountTable{1, 1, 1});

    ConstituentSet empty;
    empty.length = 1;
    CHECK(score(empty, r1) == CountTable{0, 0, 1});

    CHECK_THROWS_AS((void)score(r1, r), DataError);  // length mismatch
}

TEST_CASE("counting swaps error directions when arguments swap") {
    SplitRng rng(11);
    for (int i = 0; i < 500; ++i) {
        const int n = rng.next_int(1, 10);
        const ConstituentSet a = random_set(rng, n, kLabels);
        const ConstituentSet b = random_set(rng, n, kLabels);
        const CountTable ab = score(a, b);
        const CountTable ba = score(b, a);
        CHECK(ab.a == ba.a);
        CHECK(ab.b == ba.c);
        CHECK(ab.c == ba.b);
    }
}

TEST_CASE("aggregation applies the ratio formulas") {
    ScoreReport one = aggregate({CountTable{2, 1, 1}});
    CHECK(one.precision == doctest::Approx(2.0 / 3.0));
    CHECK(one.recall == doctest::Approx(2.0 / 3.0));
    CHECK(one.f_measure == doctest::Approx(2.0 / 3.0));

    ScoreReport two = aggregate({CountTable{1, 0, 0}, CountTable{1, 1, 1}});
    CHECK(two.f_measure == doctest::Approx(2.0 * 2.0 / (4.0 + 1.0 + 1.0)));

    // Empty guess against empty reference is vacuously perfect.
    ScoreReport zero = aggregate({CountTable{0, 0, 0}});
    CHECK(zero.precision == 1.0);
    CHECK(zero.recall == 1.0);
    CHECK(zero.f_measure == 1.0);
    CHECK(zero.exact == 1.0);

    // Mixed zero cases: empty numerator with nonempty denominator gives 0.
    ScoreReport spurious_only = aggregate({CountTable{0, 2, 0}});
    CHECK(spurious_only.precision == 0.0);
    CHECK(spurious_only.recall == 1.0);
    CHECK(spurious_only.f_measure == 0.0);
}

TEST_CASE("harmonic mean never exceeds the arithmetic mean") {
    SplitRng rng(12);
    for (int i = 0; i < 1000; ++i) {
        CountTable t{rng.next_int(0, 20), rng.next_int(0, 20), rng.next_int(0, 20)};
        const ScoreReport s = aggregate({t});
        CHECK(s.f_measure <= s.mean + 1e-12);
        if (t.a > 0 && t.b == t.c)  // P == R
            CHECK(s.f_measure == doctest::Approx(s.mean));
        if (s.f_measure >= s.mean - 1e-12 && s.f_measure <= s.mean + 1e-12 && t.a > 0)
            CHECK(t.b == t.c);
    }
}

TEST_CASE("directed distance is the unrecalled fraction") {
    const ConstituentSet a = set_of(2, {{0, 1, "NP"}, {1, 2, "VP"}});
    const ConstituentSet b = set_of(2, {{1, 2, "VP"}});
    CHECK(directed_distance(a, b) == doctest::Approx(0.5));
    CHECK(directed_distance(a, a) == 0.0);

    ConstituentSet empty;
    empty.length = 2;
    CHECK(directed_distance(empty, a) == 0.0);

    SplitRng rng(13);
    for (int i = 0; i < 100; ++i) {
        const int n = rng.next_int(1, 10);
        const ConstituentSet ref = random_set(rng, n, kLabels);
        const ConstituentSet guess = random_set(rng, n, kLabels);
        if (ref.items.empty()) continue;
        const ScoreReport s = aggregate({score(guess, ref)});
        CHECK(directed_distance(ref, guess) == doctest::Approx(1.0 - s.recall));
    }
}

TEST_CASE("per-label breakdown partitions the totals") {
    SplitRng rng(14);
    for (int i = 0; i < 100; ++i) {
        const int n = rng.next_int(1, 10);
        const ConstituentSet guess = random_set(rng, n, kLabels);
        const ConstituentSet ref = random_set(rng, n, kLabels);
        const CountTable total = score(guess, ref);
        CountTable sum;
        for (const auto& [label, cell] : score_by_label(guess, ref)) sum += cell;
        CHECK(sum == total);
    }
}

TEST_CASE("isolated precision rates constituents only one parser proposes") {
    const Constituent x{0, 1, "NP"}, y{1, 2, "VP"}, z{0, 2, "S"};
    const auto sentence = [&](std::vector<ConstituentSet> parsers) {
        return std::vector<std::vector<ConstituentSet>>{std::move(parsers)};
    };
    const std::vector<ConstituentSet> refs{set_of(2, {x})};

    // x is only in parser 0 and correct.
    auto cells = isolated_precision(
        sentence({set_of(2, {x}), set_of(2, {y}), set_of(2, {y})}), refs, 0);
    REQUIRE(cells.count(""));
    CHECK(cells[""].isolated == 1);
    CHECK(cells[""].precision() == 1.0);

    // Identical parsers isolate nothing: precision is not available.
    cells = isolated_precision(
        sentence({set_of(2, {x}), set_of(2, {x}), set_of(2, {x})}), refs, 0);
    CHECK_FALSE(cells[""].precision().has_value());

    // z is only in parser 2 and wrong.
    cells = isolated_precision(
        sentence({set_of(2, {x}), set_of(2, {x}), set_of(2, {z})}), refs, 2);
    CHECK(cells[""].isolated == 1);
    CHECK(cells[""].precision() == 0.0);

    CHECK_THROWS_AS((void)isolated_precision(sentence({set_of(2, {x}), set_of(2, {x})}),
                                             refs, 0),
                    DataError);
}

TEST_CASE("isolated precision partitions by context") {
    const Constituent x{0, 1, "NP"}, y{2, 4, "VP"};
    const std::vector<std::vector<ConstituentSet>> runs{
        {set_of(4, {x, y}), set_of(4, {}), set_of(4, {})}};
    const std::vector<ConstituentSet> refs{set_of(4, {x})};

    auto by_label = isolated_precision(runs, refs, 0, IsolatedContext::label);
    CHECK(by_label["NP"].precision() == 1.0);
    CHECK(by_label["VP"].precision() == 0.0);

    auto by_span = isolated_precision(runs, refs, 0, IsolatedContext::span_length);
    CHECK(by_span["1"].isolated == 1);
    CHECK(by_span["2"].isolated == 1);

    auto by_sentence = isolated_precision(runs, refs, 0,
                                          IsolatedContext::sentence_length);
    CHECK(by_sentence["4"].isolated == 2);
}

TEST_CASE("switch oracle picks the best candidate per sentence") {
    const ConstituentSet ref = set_of(2, {{0, 1, "NP"}, {1, 2, "VP"}});
    ConstituentSet empty;
    empty.length = 2;
    const std::vector<std::vector<ConstituentSet>> runs{{empty, ref}, {ref, empty}};
    const std::vector<ConstituentSet> refs{ref, ref};

    const ScoreReport report = parser_switch_oracle(runs, refs);
    CHECK(report.f_measure == 1.0);
    CHECK(report.exact == 1.0);

    // A single candidate leaves no choice.
    const std::vector<std::vector<ConstituentSet>> solo{{empty}, {ref}};
    const ScoreReport solo_report = parser_switch_oracle(solo, refs);
    CHECK(solo_report.totals == (CountTable{2, 0, 2}));
}

TEST_CASE("oracles dominate every individual parser on random corpora") {
    SplitRng rng(15);
    for (int trial = 0; trial < 30; ++trial) {
        const int sentences = rng.next_int(2, 8);
        const int k = rng.next_int(2, 4);
        std::vector<std::vector<ConstituentSet>> runs(static_cast<std::size_t>(sentences));
        std::vector<ConstituentSet> refs;
        for (int s = 0; s < sentences; ++s) {
            const int n = rng.next_int(1, 8);
            refs.push_back(random_set(rng, n, kLabels));
            for (int p = 0; p < k; ++p)
                runs[std::size_t(s)].push_back(random_set(rng, n, kLabels));
        }
        const ScoreReport switch_report = parser_switch_oracle(runs, refs);
        const ScoreReport pool_report = max_precision_oracle(runs, refs);
        CHECK(pool_report.precision == 1.0);

        std::int64_t pool_match = 0, ref_total = 0;
        for (int s = 0; s < sentences; ++s) {
            ConstituentSet pool;
            pool.length = refs[std::size_t(s)].length;
            for (const auto& run : runs[std::size_t(s)])
                for (const Constituent& c : run.items) pool.insert(c);
            pool.normalize();
            pool_match += score(pool, refs[std::size_t(s)]).a;
            ref_total += std::int64_t(refs[std::size_t(s)].items.size());
        }
        CHECK(pool_report.totals.a == pool_match);
        CHECK(pool_report.totals.a + pool_report.totals.c == ref_total);

        for (int p = 0; p < k; ++p) {
            std::vector<ConstituentSet> own;
            for (int s = 0; s < sentences; ++s)
                own.push_back(runs[std::size_t(s)][std::size_t(p)]);
            const ScoreReport individual = evaluate(own, refs);
            CHECK(switch_report.f_measure >= individual.f_measure - 1e-12);
            CHECK(pool_report.recall >= individual.recall - 1e-12);
        }
    }
}

TEST_CASE("multiset counting sees repeated span-label pairs") {
    // Duplicate (span, label) pairs are invisible to set scoring but counted
    // by the multiset mode.
    ConstituentSet g;
    g.length = 2;
    g.insert({0, 2, "S"});
    g.insert({0, 2, "S"});
    g.normalize();
    const ConstituentSet r = set_of(2, {{0, 2, "S"}});
    CHECK(score(g, r) == CountTable{1, 0, 0});
    CHECK(score(g, r, /*multiset=*/true) == CountTable{1, 1, 0});
}

TEST_CASE("length buckets follow the reporting scheme") {
    CHECK(length_bucket(1) == "1");
    CHECK(length_bucket(5) == "5");
    CHECK(length_bucket(6) == "6-10");
    CHECK(length_bucket(10) == "6-10");
    CHECK(length_bucket(11) == "11-20");
    CHECK(length_bucket(20) == "11-20");
    CHECK(length_bucket(21) == "21+");
    CHECK(length_bucket(100) == "21+");
}
