#include "doctest.h"

#include "ctop/shapes.hpp"

using namespace ctop;

namespace {
const MetricSpace q2(2, MetricKind::linf_exact);
const MetricSpace q1(1, MetricKind::linf_exact);

CircleShape unit_circle() { return CircleShape{{Rat(0), Rat(0)}, Rat(1)}; }
}  // namespace

TEST_CASE("circle vs open box, exact") {
    Shape c{unit_circle()};
    // box strictly inside the disk: no curve points
    CHECK_FALSE(shape_meets_box(c, {Rat(-1, 2), Rat(-1, 2)}, {Rat(1, 2), Rat(1, 2)}, true));
    // box straddling the circle on the right
    CHECK(shape_meets_box(c, {Rat(1, 2), Rat(-1, 4)}, {Rat(2), Rat(1, 4)}, true));
    // open box with a face tangent at (1,0) from outside: no meet
    CHECK_FALSE(shape_meets_box(c, {Rat(1), Rat(-1)}, {Rat(2), Rat(1)}, true));
    // the closed version of the same box does touch
    CHECK(shape_meets_box(c, {Rat(1), Rat(-1)}, {Rat(2), Rat(1)}, false));
    // open box around the whole circle
    CHECK(shape_meets_box(c, {Rat(-2), Rat(-2)}, {Rat(2), Rat(2)}, true));
    // box far away
    CHECK_FALSE(shape_meets_box(c, {Rat(3), Rat(3)}, {Rat(4), Rat(4)}, false));
    // box containing exactly the topmost point (0,1) strictly inside
    CHECK(shape_meets_box(c, {Rat(-1, 8), Rat(7, 8)}, {Rat(1, 8), Rat(9, 8)}, true));
    // thin open box cutting the circle at x = 0 bottom
    CHECK(shape_meets_box(c, {Rat(-1, 8), Rat(-9, 8)}, {Rat(1, 8), Rat(-7, 8)}, true));
}

TEST_CASE("arc pieces vs boxes") {
    // right half circle: u in [-1, 1] of the standard parametrization
    Shape right_half{ArcShape{{Rat(0), Rat(0)}, Rat(1), false, Rat(-1), Rat(1)}};
    CHECK(shape_meets_box(right_half, {Rat(1, 2), Rat(-1, 4)}, {Rat(2), Rat(1, 4)}, true));
    // the left extreme (-1,0) is not on the right half
    CHECK_FALSE(shape_meets_box(right_half, {Rat(-2), Rat(-1, 4)}, {Rat(-3, 4), Rat(1, 4)}, false));
    // top point (0,1) is the u=1 endpoint: closed arc contains it
    CHECK(shape_meets_box(right_half, {Rat(-1, 8), Rat(7, 8)}, {Rat(1, 8), Rat(9, 8)}, true));

    // mirror arc through (-1, 0): v in [-1/4, 1/4] stays near the left pole
    Shape left_cap{ArcShape{{Rat(0), Rat(0)}, Rat(1), true, Rat(-1, 4), Rat(1, 4)}};
    CHECK(shape_meets_box(left_cap, {Rat(-9, 8), Rat(-1, 8)}, {Rat(-7, 8), Rat(1, 8)}, true));
    CHECK_FALSE(shape_meets_box(left_cap, {Rat(3, 4), Rat(-1)}, {Rat(2), Rat(1)}, false));
}

TEST_CASE("segment and ray clipping") {
    Shape seg{SegmentShape{{Rat(0), Rat(0)}, {Rat(1), Rat(0)}}};
    CHECK(shape_meets_box(seg, {Rat(1, 4), Rat(-1, 4)}, {Rat(3, 4), Rat(1, 4)}, true));
    // open box touching only the endpoint (1,0) on its face: no strict meet
    CHECK_FALSE(shape_meets_box(seg, {Rat(1), Rat(-1)}, {Rat(2), Rat(1)}, true));
    CHECK(shape_meets_box(seg, {Rat(1), Rat(-1)}, {Rat(2), Rat(1)}, false));

    Shape ray{RayShape{{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, Rat(0), std::nullopt}};
    CHECK(shape_meets_box(ray, {Rat(100), Rat(-1)}, {Rat(102), Rat(1)}, true));
    CHECK_FALSE(shape_meets_box(ray, {Rat(-3), Rat(-1)}, {Rat(-1), Rat(1)}, false));
}

TEST_CASE("ball membership and containment") {
    Shape c{unit_circle()};
    // ball around the circle
    Code big = q2.ball_index({Rat(0), Rat(0)}, Rat(3, 2));
    CHECK(ball_contains_shape(q2, c, big));
    // tangent-size ball does not strictly contain
    Code tight = q2.ball_index({Rat(0), Rat(0)}, Rat(1));
    CHECK_FALSE(ball_contains_shape(q2, c, tight));
    // ball entirely inside the disk misses the curve
    Code inner = q2.ball_index({Rat(0), Rat(0)}, Rat(1, 2));
    CHECK_FALSE(shape_meets_ball(q2, c, inner));
    Code cross = q2.ball_index({Rat(1), Rat(0)}, Rat(1, 4));
    CHECK(shape_meets_ball(q2, c, cross));
}

TEST_CASE("covers_shape certifies strict covers and rejects gaps") {
    Shape seg1{SegmentShape{{Rat(0)}, {Rat(1)}}};
    std::vector<Code> balls{q1.ball_index({Rat(0)}, Rat(3, 8)), q1.ball_index({Rat(1, 2)}, Rat(3, 8)),
                            q1.ball_index({Rat(1)}, Rat(3, 8))};
    CHECK(covers_shape(q1, seg1, balls, 12));
    // drop the middle ball: [3/8, 5/8] uncovered
    std::vector<Code> gap{balls[0], balls[2]};
    CHECK_FALSE(covers_shape(q1, seg1, gap, 12));

    Shape c{unit_circle()};
    std::vector<Code> eight;
    for (int k = 0; k < 8; ++k) {
        // centers on a surrounding grid octagon, radius 1/2
        static const int xs[8] = {1, 1, 0, -1, -1, -1, 0, 1};
        static const int ys[8] = {0, 1, 1, 1, 0, -1, -1, -1};
        eight.push_back(q2.ball_index({Rat(xs[k]), Rat(ys[k])}, Rat(5, 8)));
    }
    CHECK(covers_shape(q2, c, eight, 12));
}

TEST_CASE("l2 shape predicates") {
    MetricSpace e2(2, MetricKind::l2_interval);
    Shape box{BoxShape{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}};
    Code near = e2.ball_index({Rat(2), Rat(0)}, Rat(3, 2));
    CHECK(shape_meets_ball(e2, box, near));
    Code far = e2.ball_index({Rat(3), Rat(3)}, Rat(1));
    CHECK_FALSE(shape_meets_ball(e2, box, far));
    Code envel = e2.ball_index({Rat(1, 2), Rat(1, 2)}, Rat(2));
    CHECK(ball_contains_shape(e2, box, envel));
    Shape c{unit_circle()};
    CHECK_THROWS(shape_meets_ball(e2, c, near));
}
