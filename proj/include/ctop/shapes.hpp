#pragma once

#include "ctop/metric.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace ctop {

// Exact-rational shape descriptors for the built-in scenarios. Curve shapes
// (circle, arc) are only supported under the linf metric, where every test
// reduces to sign decisions on rationals and pure square roots.
struct BoxShape {
    Point lo, hi;  // closed axis box; degenerate (lo == hi on axes) allowed
};

struct SegmentShape {
    Point a, b;
};

struct PolylineShape {
    std::vector<Point> pts;
};

struct CircleShape {
    Point center;  // Q^2
    Rat radius;
};

// Closed arc of a circle in the rational parametrization
//   W(u) = c + r*((1-u^2)/(1+u^2), 2u/(1+u^2)),
// or its mirror M(v) = c + r*((v^2-1)/(1+v^2), 2v/(1+v^2)) (which reaches the
// point W misses). Arc = parameter range [u_lo, u_hi].
struct ArcShape {
    Point center;
    Rat radius;
    bool mirror = false;
    Rat u_lo, u_hi;
};

struct RayShape {
    Point origin;
    Point dir;          // rational direction, not all zero
    Rat t_lo;           // parameter range [t_lo, t_hi] or [t_lo, inf)
    std::optional<Rat> t_hi;
};

// Axis-aligned product set unbounded upward along one axis:
// { x : lo <= x <= hi coordinatewise, except x[axis] >= lo[axis] }.
struct HalfStripShape {
    Point lo, hi;
    int axis = 1;
};

using Shape = std::variant<BoxShape, SegmentShape, PolylineShape, CircleShape, ArcShape, RayShape,
                           HalfStripShape>;

bool shape_is_compact(const Shape& s);
// Exact bounding box (compact shapes only).
std::pair<Point, Point> shape_bounds(const Shape& s);

// Exact intersection tests against axis boxes (the linf balls) and l2 disks.
// `strict` selects the open box/disk.
bool shape_meets_box(const Shape& s, const Point& lo, const Point& hi, bool strict);
bool shape_meets_ball(const MetricSpace& space, const Shape& s, const Code& ball_code);

// Exact test: does the decoded open ball contain the whole (compact) shape?
bool ball_contains_shape(const MetricSpace& space, const Shape& s, const Code& ball_code);

// Complete semi-decision of shape ⊆ union of the decoded open balls by
// adaptive exact subdivision of the shape's bounding box.
bool covers_shape(const MetricSpace& space, const Shape& s, const std::vector<Code>& balls,
                  int max_depth);

// A rational point lying on the shape (used to seed touch certificates).
Point shape_sample_point(const Shape& s);

// Exact: shape ⊆ closed ball (both metrics; curve shapes linf only).
bool closed_ball_contains_shape(const MetricSpace& space, const Shape& s, const Code& ball_code);

// Exact clip against a closed axis box; may split into several parts, returns
// an empty list when the intersection is empty. Circles and arcs clip only in
// the all-or-nothing cases.
std::vector<Shape> clip_shape(const Shape& s, const Point& lo, const Point& hi);

}  // namespace ctop
