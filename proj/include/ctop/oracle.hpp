#pragma once

#include "ctop/shapes.hpp"

namespace ctop::oracle {

// Exact geometric ground truth, kept separate from the code-level machinery
// it audits. Ball predicates are the closed-form set relations (non-strict
// where the true geometry is non-strict), shape predicates run on distance
// formulas, and `covers` discharges cells by coordinate bisection.

// Set disjointness / inclusion of decoded open balls.
bool balls_disjoint(const MetricSpace& space, const Code& i, const Code& j);
bool ball_subset(const MetricSpace& space, const Code& i, const Code& j);

// Shape vs open ball.
bool meets(const MetricSpace& space, const Shape& s, const Code& ball_code);
bool meets_raw(const MetricSpace& space, const Shape& s, const Point& center, const Rat& radius);
bool contains(const MetricSpace& space, const Code& ball_code, const Shape& s);

// Shape vs shape disjointness for the audit combinations.
bool disjoint(const Shape& a, const Shape& b);

// Complete semi-decider: shape inside the union of the decoded open balls.
// Returns true only on a certified cover; false means not certified within
// the depth budget (exact for strict covers at sufficient depth).
bool covers(const MetricSpace& space, const Shape& s, const std::vector<Code>& balls, int depth);
bool covers_raw(const MetricSpace& space, const Shape& s,
                const std::vector<std::pair<Point, Rat>>& balls, int depth);

// d_H(shape, point set) < bound, certified both ways.
bool hausdorff_lt(const MetricSpace& space, const Shape& s, const std::vector<Point>& pts,
                  const Rat& bound, int depth);

}  // namespace ctop::oracle
