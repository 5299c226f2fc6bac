#include "doctest.h"

#include "ctop/metric.hpp"

#include <random>

using namespace ctop;

namespace {

Rat rr(std::mt19937_64& rng, int max_num = 8, int max_den = 16) {
    std::uniform_int_distribution<int> num(-max_num * 4, max_num * 4);
    std::uniform_int_distribution<int> den(1, max_den);
    return Rat(num(rng), den(rng));
}

}  // namespace

TEST_CASE("dense point enumeration is surjective with an exact inverse") {
    MetricSpace q1(1, MetricKind::linf_exact);
    CHECK(q1.dense_point(0) == Point{Rat(0)});
    MetricSpace q2(2, MetricKind::linf_exact);
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        Point p{rr(rng), rr(rng)};
        CHECK(q2.dense_point(q2.dense_index(p)) == p);
    }
}

TEST_CASE("ball decoding") {
    MetricSpace q1(1, MetricKind::linf_exact);
    Ball b0 = q1.ball(0);
    CHECK(b0.center == Point{Rat(0)});
    CHECK(b0.radius == Rat(1));
    // roundtrip through explicit indices
    Code i = q1.ball_index({Rat(3, 2)}, Rat(2, 5));
    Ball bi = q1.ball(i);
    CHECK(bi.center == Point{Rat(3, 2)});
    CHECK(bi.radius == Rat(2, 5));
}

TEST_CASE("formal relations on hand instances") {
    MetricSpace q1(1, MetricKind::linf_exact);
    Code a = q1.ball_index({Rat(0)}, Rat(1));
    Code b = q1.ball_index({Rat(3)}, Rat(1));
    Code c = q1.ball_index({Rat(2)}, Rat(1));
    Code big = q1.ball_index({Rat(0)}, Rat(2));
    CHECK(formally_disjoint(q1, a, b, 1).confirmed);
    CHECK_FALSE(formally_disjoint(q1, a, c, 1).confirmed);    // tangent: 2 > 2 fails
    CHECK_FALSE(formally_disjoint(q1, a, b, 0).confirmed);    // no fuel, no answer
    CHECK(formally_contained(q1, a, big, 1).confirmed);
    CHECK_FALSE(formally_contained(q1, a, a, 1).confirmed);   // 1 < 1 fails
}

TEST_CASE("l2 relations certify through squared distances") {
    MetricSpace q2(2, MetricKind::l2_interval);
    Code a = q2.ball_index({Rat(0), Rat(0)}, Rat(1));
    Code b = q2.ball_index({Rat(3), Rat(4)}, Rat(1));  // center distance 5
    CHECK(formally_disjoint(q2, a, b, 1).confirmed);
    Code big = q2.ball_index({Rat(0), Rat(0)}, Rat(7));
    CHECK(formally_contained(q2, b, big, 1).confirmed);  // 5 + 1 < 7
    // dist_approx refines monotonically around sqrt(2)
    Code p = q2.dense_index({Rat(0), Rat(0)});
    Code q = q2.dense_index({Rat(1), Rat(1)});
    for (int k = 1; k < 20; ++k) {
        Rat approx = q2.dist_approx(p, q, k);
        Rat err2 = approx * approx - Rat(2);
        if (err2 < 0) err2 = -err2;
        // |approx - sqrt(2)| < 2^-k implies |approx^2 - 2| < 2^-k * (approx + sqrt2) < 4*2^-k
        CHECK(err2 < 4 * pow2(-k));
    }
}

TEST_CASE("linf dist_approx is exact at every precision") {
    MetricSpace q2(2, MetricKind::linf_exact);
    Code p = q2.dense_index({Rat(1, 3), Rat(0)});
    Code q = q2.dense_index({Rat(2), Rat(1, 2)});
    Rat d = q2.dist_approx(p, q, 1);
    for (int k = 2; k < 30; k += 7) CHECK(q2.dist_approx(p, q, k) == d);
    CHECK(d == Rat(5, 3));
}

TEST_CASE("separate_points follows the quarter-distance recipe") {
    MetricSpace q1(1, MetricKind::linf_exact);
    ComputablePoint x = exact_point(q1, {Rat(0)});
    ComputablePoint y = exact_point(q1, {Rat(1)});
    auto r = try_separate_points(q1, x, y, 200000);
    REQUIRE(r.has_value());
    auto [i, j] = *r;
    Ball bi = q1.ball(i), bj = q1.ball(j);
    CHECK(q1.point_in_ball({Rat(0)}, i));
    CHECK(q1.point_in_ball({Rat(1)}, j));
    CHECK(q1.formally_disjoint_true(i, j));
    CHECK(bi.radius < Rat(1, 4));
    CHECK(bj.radius < Rat(1, 4));
}

TEST_CASE("separate_points stays unknown on equal points") {
    MetricSpace q1(1, MetricKind::linf_exact);
    ComputablePoint x = exact_point(q1, {Rat(2, 3)});
    ComputablePoint y = exact_point(q1, {Rat(2, 3)});
    CHECK_FALSE(try_separate_points(q1, x, y, 3000).has_value());
}

TEST_CASE("refine_common finds a common formal refinement") {
    MetricSpace q1(1, MetricKind::linf_exact);
    Code i = q1.ball_index({Rat(0)}, Rat(1));     // (-1, 1)
    Code j = q1.ball_index({Rat(-3, 4)}, Rat(5, 4));  // (-2, 1/2)
    ComputablePoint x = exact_point(q1, {Rat(0)});
    auto k = try_refine_common(q1, i, j, x, 100000);
    REQUIRE(k.has_value());
    CHECK(q1.point_in_ball({Rat(0)}, *k));
    CHECK(q1.formally_contained_true(*k, i));
    CHECK(q1.formally_contained_true(*k, j));
}

TEST_CASE("refine_common output is compatible with later disjointness") {
    // claim (7) shape: I_k inside I_i and I_i formally disjoint from I_m
    // forces I_k formally disjoint from I_m.
    MetricSpace q1(1, MetricKind::linf_exact);
    Code i = q1.ball_index({Rat(0)}, Rat(1));
    Code j = q1.ball_index({Rat(1, 4)}, Rat(3, 2));
    ComputablePoint x = exact_point(q1, {Rat(1, 8)});
    Code k = refine_common(q1, i, j, x);
    Code m = q1.ball_index({Rat(5)}, Rat(3));
    if (q1.formally_disjoint_true(i, m)) CHECK(q1.formally_disjoint_true(k, m));
}

TEST_CASE("escape_closed_ball certifies the recipe inequality") {
    MetricSpace q1(1, MetricKind::linf_exact);
    Code i = q1.ball_index({Rat(0)}, Rat(1));
    ComputablePoint x = exact_point(q1, {Rat(3)});
    auto j = try_escape_closed_ball(q1, x, i, 100000);
    REQUIRE(j.has_value());
    CHECK(q1.point_in_ball({Rat(3)}, *j));
    CHECK(q1.formally_disjoint_true(*j, i));
    CHECK(q1.ball(*j).radius < Rat(1));

    // a point on the sphere never escapes
    ComputablePoint boundary = exact_point(q1, {Rat(1)});
    CHECK_FALSE(try_escape_closed_ball(q1, boundary, i, 5000).has_value());

    MetricSpace q2(2, MetricKind::linf_exact);
    Code i2 = q2.ball_index({Rat(0), Rat(0)}, Rat(1));
    ComputablePoint x2 = exact_point(q2, {Rat(2), Rat(2)});
    auto j2 = try_escape_closed_ball(q2, x2, i2, 200000);
    REQUIRE(j2.has_value());
    CHECK(q2.formally_disjoint_true(*j2, i2));
}

TEST_CASE("join_balls") {
    MetricSpace q1(1, MetricKind::linf_exact);
    Code i = q1.ball_index({Rat(0)}, Rat(1));
    Code j = q1.ball_index({Rat(5)}, Rat(1));
    auto k = try_join_balls(q1, i, j, 100000);
    REQUIRE(k.has_value());
    CHECK(q1.formally_contained_true(i, *k));
    CHECK(q1.formally_contained_true(j, *k));
    Ball bk = q1.ball(*k);
    CHECK(bk.center == Point{Rat(0)});
    CHECK(bk.radius == Rat(7));  // first enumerated rational above 6

    Code same = join_balls(q1, i, i);
    CHECK(q1.formally_contained_true(i, same));
}

TEST_CASE("far_ball is certified disjoint") {
    MetricSpace q1(1, MetricKind::linf_exact);
    for (std::uint64_t i = 0; i < 100; ++i) {
        Code j = far_ball(q1, Code(i));
        CHECK(q1.formally_disjoint_true(Code(i), j));
    }
    MetricSpace q2(2, MetricKind::linf_exact);
    Code i = q2.ball_index({Rat(1), Rat(-2)}, Rat(1, 3));
    CHECK(q2.formally_disjoint_true(i, far_ball(q2, i)));
}

TEST_CASE("fuel monotonicity of formal relations on random pairs") {
    MetricSpace q2(2, MetricKind::linf_exact);
    std::mt19937_64 rng(12345);
    for (int t = 0; t < 300; ++t) {
        Code i = q2.ball_index({rr(rng), rr(rng)}, Rat(1 + t % 5, 1 + t % 7));
        Code j = q2.ball_index({rr(rng), rr(rng)}, Rat(1 + t % 3, 2));
        for (Fuel f1 = 1; f1 < 4; ++f1)
            for (Fuel f2 = f1; f2 < 5; ++f2) {
                if (formally_disjoint(q2, i, j, f1).confirmed)
                    CHECK(formally_disjoint(q2, i, j, f2).confirmed);
                if (formally_contained(q2, i, j, f1).confirmed)
                    CHECK(formally_contained(q2, i, j, f2).confirmed);
            }
    }
}
