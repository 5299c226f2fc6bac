#include "doctest.h"

#include "ctop/coding.hpp"

#include <set>

using namespace ctop;

TEST_CASE("pairing basics") {
    CHECK(pair_code(0, 0) == 0);
    CHECK(pair_code(0, 1) == 2);
    auto [a, b] = unpair_code(5);
    CHECK(a == 0);
    CHECK(b == 2);
}

TEST_CASE("pairing roundtrip") {
    for (std::uint64_t n = 0; n < 3000; ++n) {
        auto [a, b] = unpair_code(Code(n));
        CHECK(pair_code(a, b) == Code(n));
    }
    for (std::uint64_t a = 0; a < 60; ++a)
        for (std::uint64_t b = 0; b < 60; ++b) {
            auto [x, y] = unpair_code(pair_code(Code(a), Code(b)));
            CHECK(x == Code(a));
            CHECK(y == Code(b));
        }
}

TEST_CASE("pairing is a bijection on an initial segment") {
    std::set<Code> seen;
    for (std::uint64_t a = 0; a < 50; ++a)
        for (std::uint64_t b = 0; b < 50; ++b) seen.insert(pair_code(Code(a), Code(b)));
    CHECK(seen.size() == 2500);
    // Diagonal order fills an initial segment: all codes < 50*51/2 occur.
    for (std::uint64_t n = 0; n < 1275; ++n) CHECK(seen.count(Code(n)) == 1);
}

TEST_CASE("sequence coding") {
    CHECK(seq_decode(0) == Seq{0});
    CHECK(seq_decode(35) == Seq{7});  // 35 = pair(0,7)
    Seq s{4, 9};
    CHECK(seq_decode(seq_encode(s)) == s);
    for (std::uint64_t j = 0; j < 2000; ++j) {
        Seq d = seq_decode(Code(j));
        CHECK(seq_encode(d) == Code(j));
        CHECK(seq_length(Code(j)) == Code(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i) CHECK(seq_item(Code(j), i) == d[i]);
    }
}

TEST_CASE("finite set coding") {
    CHECK(finset_decode(0) == FiniteSet{0});
    CHECK(finset_encode({0}) == 0);
    // decode of the sequence (2,2,5) deduplicates
    Code j = seq_encode({2, 2, 5});
    CHECK(finset_decode(j) == FiniteSet{2, 5});
    CHECK(finset_singleton(7) == 35);
    CHECK_THROWS(finset_encode({}));
}

TEST_CASE("finset_encode returns the least matching code") {
    // Against every code below the bound: decoding then re-encoding can only
    // shrink the code, and never changes the decoded set.
    for (std::uint64_t j = 0; j < 20000; ++j) {
        FiniteSet s = finset_decode(Code(j));
        Code e = finset_encode(s);
        CHECK(e <= Code(j));
        CHECK(finset_decode(e) == s);
    }
}

TEST_CASE("finset surjectivity over subsets of {0..6}") {
    std::set<FiniteSet> want;
    for (int mask = 1; mask < 128; ++mask) {
        FiniteSet s;
        for (int k = 0; k < 7; ++k)
            if (mask & (1 << k)) s.push_back(k);
        want.insert(s);
    }
    std::set<FiniteSet> got;
    for (const auto& s : want) {
        Code e = finset_encode(s);
        CHECK(finset_decode(e) == s);
        got.insert(finset_decode(e));
    }
    CHECK(got == want);
}

TEST_CASE("union_code") {
    Code a = finset_encode({0});
    Code b = finset_encode({1});
    CHECK(finset_decode(union_code(a, b)) == FiniteSet{0, 1});
    for (std::uint64_t j = 0; j < 200; ++j) {
        CHECK(finset_decode(union_code(Code(j), Code(j))) == finset_decode(Code(j)));
    }
    // decoded union law on arbitrary small codes
    for (std::uint64_t x = 0; x < 60; ++x)
        for (std::uint64_t y = 0; y < 60; y += 7) {
            FiniteSet ex = finset_decode(Code(x)), ey = finset_decode(Code(y));
            FiniteSet u;
            std::merge(ex.begin(), ex.end(), ey.begin(), ey.end(), std::back_inserter(u));
            u.erase(std::unique(u.begin(), u.end()), u.end());
            CHECK(finset_decode(union_code(Code(x), Code(y))) == u);
        }
}

TEST_CASE("rational enumeration") {
    CHECK(rat_enum(0) == Rat(1));
    CHECK(rat_enum(1) == Rat(2));
    CHECK(rat_enum(2) == Rat(1, 2));
    // every p/q with p,q <= 10 shows up among the first pair(p-1, q-1)+1 codes
    for (int p = 1; p <= 10; ++p)
        for (int q = 1; q <= 10; ++q) {
            Code idx = rat_index(Rat(p, q));
            CHECK(rat_enum(idx) == Rat(p, q));
            CHECK(idx <= pair_code(Code(p - 1), Code(q - 1)));
        }
}

TEST_CASE("cfv combinators satisfy their set equations") {
    CfvFn ident{[](const Code& x, const Code& y) { return x == y; },
                [](const Code& x) { return x; }};
    CfvFn succ_pair{[](const Code& z, const Code& y) { return y == z || y == z + 1; },
                    [](const Code& z) { return z + 1; }};

    CfvFn u = cfv_union(ident, ident);
    CfvFn comp = cfv_compose(ident, succ_pair);
    for (std::uint64_t x = 0; x < 100; ++x) {
        CHECK(u.values(Code(x)) == std::vector<Code>{Code(x)});
        CHECK(comp.values(Code(x)) == std::vector<Code>{Code(x), Code(x + 1)});
    }

    CfvFn below{[](const Code& x, const Code& y) { return y <= x; },
                [](const Code& x) { return x; }};
    CfvFn prod = cfv_product(ident, below);
    for (std::uint64_t x = 0; x < 40; ++x) {
        auto vals = prod.values(Code(x));
        std::vector<Code> expect;
        for (std::uint64_t y = 0; y <= x; ++y) expect.push_back(pair_code(Code(x), Code(y)));
        std::sort(expect.begin(), expect.end());
        CHECK(vals == expect);
    }
}

TEST_CASE("cfv_subset_ce against a c.e. target") {
    CfvFn below{[](const Code& x, const Code& y) { return y <= x; },
                [](const Code& x) { return x; }};
    CeMembership evens = [](const Code& y, Fuel fuel) { return fuel > 0 && y % 2 == 0; };
    CHECK(cfv_subset_ce(below, evens, 0, 1));
    for (Fuel f : {1u, 10u, 1000u}) CHECK_FALSE(cfv_subset_ce(below, evens, 3, f));
}
