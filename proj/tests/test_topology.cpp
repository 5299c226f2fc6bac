#include "doctest.h"

#include "ctop/oracle.hpp"
#include "ctop/scenario.hpp"
#include "ctop/topology.hpp"

using namespace ctop;

namespace {
const MetricSpace q1(1, MetricKind::linf_exact);
const MetricSpace q2(2, MetricKind::linf_exact);

CTopSpace pq1() { return properize(from_metric(q1)); }
CTopSpace pq2() { return properize(from_metric(q2)); }
}  // namespace

TEST_CASE("from_metric wires the formal relations") {
    CTopSpace t = from_metric(q1);
    Code a = q1.ball_index({Rat(0)}, Rat(1));
    Code b = q1.ball_index({Rat(0)}, Rat(2));
    Code c = q1.ball_index({Rat(5)}, Rat(1));
    CHECK(t.C(a, b, 1).confirmed);
    CHECK(t.D(a, c, 1).confirmed);
    CHECK_FALSE(t.proper);
}

TEST_CASE("properize on the metric instance") {
    CTopSpace t = pq1();
    CHECK(t.proper);
    // reflexivity through the diagonal
    for (std::uint64_t i = 0; i < 100; ++i) CHECK(t.C(Code(i), Code(i), 1).confirmed);
    // the underlying strict containments survive
    Code a = q1.ball_index({Rat(0)}, Rat(1));
    Code b = q1.ball_index({Rat(0)}, Rat(2));
    CHECK(t.C(a, b, 1).confirmed);
}

TEST_CASE("generic properize closes chains and symmetrizes") {
    // a synthetic space on small codes: C has 1->2->3 but no 1->3
    CTopSpace raw;
    raw.basis_tag = "synthetic";
    raw.C = [](const Code& i, const Code& j, Fuel fuel) {
        if (fuel == 0) return SemiDecision::no();
        if ((i == 1 && j == 2) || (i == 2 && j == 3)) return SemiDecision::yes();
        return SemiDecision::no();
    };
    raw.D = [](const Code& i, const Code& j, Fuel fuel) {
        if (fuel == 0) return SemiDecision::no();
        if (i == 2 && j == 5) return SemiDecision::yes();
        return SemiDecision::no();
    };
    CTopSpace t = properize(raw);
    CHECK(t.C(Code(7), Code(7), 1).confirmed);
    CHECK(t.C(Code(1), Code(2), 2).confirmed);
    // the chain 1->2->3 is found once fuel covers the 3-term sequence code
    Code chain = seq_encode({1, 2, 3});
    Fuel f = static_cast<Fuel>(chain) + 2;
    CHECK(t.C(Code(1), Code(3), f).confirmed);
    CHECK_FALSE(t.C(Code(3), Code(1), f).confirmed);
    // D'' picks up the transpose
    CHECK(t.D(Code(5), Code(2), 64).confirmed);
    // and the saturation: (1,2) in C, (2,5) in D, so (1,5) in D''
    CHECK(t.D(Code(1), Code(5), 2048).confirmed);
    CHECK_FALSE(t.D(Code(1), Code(4), 2048).confirmed);
}

TEST_CASE("union-code relations") {
    CTopSpace t = pq1();
    Code i = q1.ball_index({Rat(0)}, Rat(1));
    Code big = q1.ball_index({Rat(0)}, Rat(3));
    Code far_ = q1.ball_index({Rat(10)}, Rat(1));
    Code a = finset_encode({i, far_});
    Code b = finset_encode({big});

    CHECK(c_contains(t, i, a, 1).confirmed);  // i is its own member
    CHECK(c_contains(t, i, b, 1).confirmed);
    CHECK_FALSE(c_contains(t, big, finset_singleton(i), 1).confirmed);

    // reflexivity of the lifted containment
    for (std::uint64_t u = 0; u < 80; ++u) CHECK(cc_union(t, Code(u), Code(u), 1).confirmed);

    Code left = finset_encode({q1.ball_index({Rat(0)}, Rat(1))});
    Code right = finset_encode({q1.ball_index({Rat(5)}, Rat(1))});
    CHECK(dd_union_union(t, left, right, 1).confirmed);
    Code tangent = finset_encode({q1.ball_index({Rat(2)}, Rat(1))});
    CHECK_FALSE(dd_union_union(t, left, tangent, 1).confirmed);

    CHECK(dd_ball_union(t, q1.ball_index({Rat(9)}, Rat(1)), left, 1).confirmed);
}

TEST_CASE("compatibility of the lifted relations") {
    // J_c D-disjoint from J_a and J_b C-inside J_a forces J_c D-disjoint J_b
    CTopSpace t = pq1();
    Code a = finset_encode({q1.ball_index({Rat(0)}, Rat(2))});
    Code b = finset_encode({q1.ball_index({Rat(0)}, Rat(1))});
    Code c = finset_encode({q1.ball_index({Rat(5)}, Rat(2))});
    REQUIRE(cc_union(t, b, a, 1).confirmed);
    REQUIRE(dd_union_union(t, c, a, 1).confirmed);
    CHECK(dd_union_union(t, c, b, 1).confirmed);
}

TEST_CASE("separate_point_compact") {
    CTopSpace t = pq2();
    StreamOptions opts;
    LocatedCompact k = located_of(q2, ShapeSet{{Shape{BoxShape{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}}}},
                                  opts);
    ComputablePoint x = exact_point(q2, {Rat(3), Rat(3)});
    auto r = try_separate_point_compact(t, x, k, 3000);
    REQUIRE(r.has_value());
    auto [i, a] = *r;
    CHECK(q2.point_in_ball({Rat(3), Rat(3)}, i));
    CHECK(dd_ball_union(t, i, a, 1).confirmed);
    for (const Code& j : finset_decode(a))
        CHECK(oracle::meets(q2, Shape{BoxShape{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}}, j) ==
              oracle::meets(q2, Shape{BoxShape{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}}, j));

    // a point of K is never separated
    ComputablePoint inside = exact_point(q2, {Rat(1, 2), Rat(1, 2)});
    CHECK_FALSE(try_separate_point_compact(t, inside, k, 1200).has_value());
}

TEST_CASE("separate_compacts on boxes and segments") {
    CTopSpace t2 = pq2();
    StreamOptions opts;
    LocatedCompact k = located_of(q2, ShapeSet{{Shape{BoxShape{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}}}},
                                  opts);
    LocatedCompact l = located_of(q2, ShapeSet{{Shape{BoxShape{{Rat(3), Rat(3)}, {Rat(4), Rat(4)}}}}},
                                  opts);
    auto r = try_separate_compacts(t2, k, l, 4000);
    REQUIRE(r.has_value());
    CHECK(dd_union_union(t2, r->first, r->second, 1).confirmed);
    // oracle revalidation: the decoded unions are geometrically disjoint
    for (const Code& p : finset_decode(r->first))
        for (const Code& q : finset_decode(r->second)) CHECK(oracle::balls_disjoint(q2, p, q));

    CTopSpace t1 = pq1();
    LocatedCompact s1 = located_of(q1, ShapeSet{{Shape{SegmentShape{{Rat(0)}, {Rat(1)}}}}}, opts);
    LocatedCompact s2 = located_of(q1, ShapeSet{{Shape{SegmentShape{{Rat(2)}, {Rat(3)}}}}}, opts);
    auto r1 = try_separate_compacts(t1, s1, s2, 4000);
    REQUIRE(r1.has_value());
    CHECK(dd_union_union(t1, r1->first, r1->second, 1).confirmed);

    // equal sets never separate
    CHECK_FALSE(try_separate_compacts(t1, s1, s1, 1500).has_value());
}

TEST_CASE("shrink_cover") {
    CTopSpace t = pq1();
    StreamOptions opts;
    LocatedCompact k = located_of(q1, ShapeSet{{Shape{SegmentShape{{Rat(0)}, {Rat(1)}}}}}, opts);
    // two wide unions both covering [0,1]
    Code a = finset_encode({q1.ball_index({Rat(1, 2)}, Rat(2))});
    Code b = finset_encode({q1.ball_index({Rat(0)}, Rat(3)), q1.ball_index({Rat(9)}, Rat(1))});
    auto c = try_shrink_cover(t, k, {a, b}, 5000);
    REQUIRE(c.has_value());
    CHECK(cc_union(t, *c, a, 1).confirmed);
    CHECK(cc_union(t, *c, b, 1).confirmed);
    CHECK(oracle::covers(q1, Shape{SegmentShape{{Rat(0)}, {Rat(1)}}},
                         std::vector<Code>(finset_decode(*c).begin(), finset_decode(*c).end()),
                         14));
}

TEST_CASE("separate_family honors all three clauses") {
    CTopSpace t = pq1();
    StreamOptions opts;
    // three segments: first two disjoint, the third overlaps both
    LocatedCompact f0 = located_of(q1, ShapeSet{{Shape{SegmentShape{{Rat(0)}, {Rat(1)}}}}}, opts);
    LocatedCompact f1 = located_of(q1, ShapeSet{{Shape{SegmentShape{{Rat(2)}, {Rat(3)}}}}}, opts);
    LocatedCompact f2 = located_of(q1, ShapeSet{{Shape{SegmentShape{{Rat(1, 2)}, {Rat(5, 2)}}}}},
                                   opts);
    Code a = finset_encode({q1.ball_index({Rat(1, 2)}, Rat(2))});  // covers [0,1]
    FamilyConstraints fc;
    fc.disjoint_pairs = {{0, 1}};
    fc.covering_unions = {{a, {0}}};
    auto out = separate_family(t, {f0, f1, f2}, fc);
    REQUIRE(out.size() == 3);
    CHECK(dd_union_union(t, out[0], out[1], 1).confirmed);
    CHECK(cc_union(t, out[0], a, 1).confirmed);
    Shape shapes[3] = {Shape{SegmentShape{{Rat(0)}, {Rat(1)}}},
                       Shape{SegmentShape{{Rat(2)}, {Rat(3)}}},
                       Shape{SegmentShape{{Rat(1, 2)}, {Rat(5, 2)}}}};
    for (int m = 0; m < 3; ++m) {
        FiniteSet e = finset_decode(out[m]);
        CHECK(oracle::covers(q1, shapes[m], std::vector<Code>(e.begin(), e.end()), 14));
    }
}
