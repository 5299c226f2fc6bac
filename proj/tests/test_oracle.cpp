#include "doctest.h"

#include "ctop/oracle.hpp"

using namespace ctop;

namespace {
const MetricSpace q1(1, MetricKind::linf_exact);
const MetricSpace q2(2, MetricKind::linf_exact);
}  // namespace

TEST_CASE("oracle ball set relations use the closed inequalities") {
    Code a = q1.ball_index({Rat(0)}, Rat(1));
    Code b = q1.ball_index({Rat(2)}, Rat(1));  // tangent open balls: disjoint sets
    CHECK(oracle::balls_disjoint(q1, a, b));
    Code c = q1.ball_index({Rat(3, 2)}, Rat(1));
    CHECK_FALSE(oracle::balls_disjoint(q1, a, c));
    // equal balls include one another
    CHECK(oracle::ball_subset(q1, a, a));
    Code inner = q1.ball_index({Rat(1, 2)}, Rat(1, 2));  // (0,1) inside (-1,1)
    CHECK(oracle::ball_subset(q1, inner, a));
    CHECK_FALSE(oracle::ball_subset(q1, a, inner));
}

TEST_CASE("oracle disjoint on boxes and segments") {
    Shape b1{BoxShape{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}};
    Shape b2{BoxShape{{Rat(3), Rat(3)}, {Rat(4), Rat(4)}}};
    CHECK(oracle::disjoint(b1, b2));
    Shape b3{BoxShape{{Rat(1), Rat(1)}, {Rat(2), Rat(2)}}};
    CHECK_FALSE(oracle::disjoint(b1, b3));  // shared corner point

    Shape s1{SegmentShape{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}};
    Shape s2{SegmentShape{{Rat(0), Rat(1)}, {Rat(1), Rat(0)}}};
    CHECK_FALSE(oracle::disjoint(s1, s2));  // proper crossing
    Shape s3{SegmentShape{{Rat(5), Rat(5)}, {Rat(6), Rat(5)}}};
    CHECK(oracle::disjoint(s1, s3));
}

TEST_CASE("oracle circle meets via distance extrema") {
    Shape c{CircleShape{{Rat(0), Rat(0)}, Rat(1)}};
    CHECK(oracle::meets(q2, c, q2.ball_index({Rat(1), Rat(0)}, Rat(1, 4))));
    // strictly inside the disk
    CHECK_FALSE(oracle::meets(q2, c, q2.ball_index({Rat(0), Rat(0)}, Rat(1, 2))));
    // tangent from outside along a face: open ball misses the curve
    CHECK_FALSE(oracle::meets(q2, c, q2.ball_index({Rat(2), Rat(0)}, Rat(1))));
    CHECK(oracle::contains(q2, q2.ball_index({Rat(0), Rat(0)}, Rat(2)), c));
    CHECK_FALSE(oracle::contains(q2, q2.ball_index({Rat(0), Rat(0)}, Rat(1)), c));
}

TEST_CASE("oracle covers by bisection") {
    Shape seg{SegmentShape{{Rat(0)}, {Rat(1)}}};
    std::vector<Code> balls{q1.ball_index({Rat(0)}, Rat(3, 8)),
                            q1.ball_index({Rat(1, 2)}, Rat(3, 8)),
                            q1.ball_index({Rat(1)}, Rat(3, 8))};
    CHECK(oracle::covers(q1, seg, balls, 12));
    CHECK_FALSE(oracle::covers(q1, seg, {balls[0], balls[2]}, 12));
}

TEST_CASE("oracle hausdorff certificate") {
    Shape seg{SegmentShape{{Rat(0)}, {Rat(1)}}};
    std::vector<Point> pts{{Rat(0)}, {Rat(1, 2)}, {Rat(1)}};
    CHECK(oracle::hausdorff_lt(q1, seg, pts, Rat(3, 8), 14));
    CHECK_FALSE(oracle::hausdorff_lt(q1, seg, pts, Rat(1, 8), 14));
    // a faraway sample point breaks the first direction
    std::vector<Point> bad{{Rat(0)}, {Rat(5)}};
    CHECK_FALSE(oracle::hausdorff_lt(q1, seg, bad, Rat(3, 8), 14));
}

TEST_CASE("oracle meets on unbounded ray") {
    Shape ray{RayShape{{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, Rat(0), std::nullopt}};
    CHECK(oracle::meets(q2, ray, q2.ball_index({Rat(50), Rat(0)}, Rat(1))));
    CHECK_FALSE(oracle::meets(q2, ray, q2.ball_index({Rat(50), Rat(5)}, Rat(1))));
    CHECK_FALSE(oracle::meets(q2, ray, q2.ball_index({Rat(-2), Rat(0)}, Rat(1))));
    CHECK(oracle::meets(q2, ray, q2.ball_index({Rat(-2), Rat(0)}, Rat(3))));
}
