#include "ctop/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace ctop::oracle {

namespace {

Rat abs_rat(const Rat& r) { return r < 0 ? -r : r; }

Rat linf_dist(const Point& a, const Point& b) {
    Rat m(0);
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, abs_rat(a[k] - b[k]));
    return m;
}

Rat l2_sq(const Point& a, const Point& b) {
    Rat s(0);
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return s;
}

// Euclidean squared distance extrema from a point to a closed box.
Rat box_min_sq(const Point& c, const Point& lo, const Point& hi) {
    Rat s(0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        Rat d(0);
        if (c[k] < lo[k]) d = lo[k] - c[k];
        else if (c[k] > hi[k]) d = c[k] - hi[k];
        s += d * d;
    }
    return s;
}

Rat box_max_sq(const Point& c, const Point& lo, const Point& hi) {
    Rat s(0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        Rat d = std::max(abs_rat(c[k] - lo[k]), abs_rat(hi[k] - c[k]));
        s += d * d;
    }
    return s;
}

Rat segment_min_sq(const Point& a, const Point& b, const Point& c) {
    Rat dd(0), wd(0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        Rat d = b[k] - a[k];
        dd += d * d;
        wd += (c[k] - a[k]) * d;
    }
    Rat t = dd == 0 ? Rat(0) : wd / dd;
    if (t < 0) t = 0;
    if (t > 1) t = 1;
    Rat s(0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        Rat diff = a[k] + t * (b[k] - a[k]) - c[k];
        s += diff * diff;
    }
    return s;
}

// linf distance from a point to a closed box (0 when inside).
Rat box_linf_dist(const Point& c, const Point& lo, const Point& hi) {
    Rat m(0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        Rat d(0);
        if (c[k] < lo[k]) d = lo[k] - c[k];
        else if (c[k] > hi[k]) d = c[k] - hi[k];
        m = std::max(m, d);
    }
    return m;
}

struct RawBall {
    Point center;
    Rat radius;
};

std::pair<Point, Point> ball_box(const RawBall& b) {
    Point lo(b.center.size()), hi(b.center.size());
    for (std::size_t k = 0; k < lo.size(); ++k) {
        lo[k] = b.center[k] - b.radius;
        hi[k] = b.center[k] + b.radius;
    }
    return {lo, hi};
}

std::vector<std::pair<Point, Point>> segment_list(const Shape& s) {
    std::vector<std::pair<Point, Point>> out;
    if (const auto* seg = std::get_if<SegmentShape>(&s)) {
        out.emplace_back(seg->a, seg->b);
    } else if (const auto* pl = std::get_if<PolylineShape>(&s)) {
        for (std::size_t i = 0; i + 1 < pl->pts.size(); ++i)
            out.emplace_back(pl->pts[i], pl->pts[i + 1]);
        if (out.empty() && !pl->pts.empty()) out.emplace_back(pl->pts[0], pl->pts[0]);
    } else if (const auto* r = std::get_if<RayShape>(&s)) {
        if (!r->t_hi) throw std::invalid_argument("oracle: unbounded ray needs a clipped query");
        Point a(r->origin.size()), b(r->origin.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            a[k] = r->origin[k] + r->t_lo * r->dir[k];
            b[k] = r->origin[k] + *r->t_hi * r->dir[k];
        }
        out.emplace_back(a, b);
    }
    return out;
}

// Closed-box meets for the oracle's cell discharge, via distance reasoning.
bool cell_meets(const MetricSpace& space, const Shape& s, const Point& lo, const Point& hi);

bool segment_meets_closed_box(const Point& a, const Point& b, const Point& lo, const Point& hi) {
    // Clip parametrically (non-strict).
    Rat t0(0), t1(1);
    for (std::size_t k = 0; k < a.size(); ++k) {
        Rat d = b[k] - a[k];
        if (d == 0) {
            if (a[k] < lo[k] || a[k] > hi[k]) return false;
            continue;
        }
        Rat ta = (lo[k] - a[k]) / d, tb = (hi[k] - a[k]) / d;
        if (d < 0) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
    }
    return t0 <= t1;
}

bool cell_meets(const MetricSpace& space, const Shape& s, const Point& lo, const Point& hi) {
    (void)space;
    return std::visit(
        [&](const auto& sh) -> bool {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, BoxShape>) {
                for (std::size_t k = 0; k < lo.size(); ++k)
                    if (sh.hi[k] < lo[k] || sh.lo[k] > hi[k]) return false;
                return true;
            } else if constexpr (std::is_same_v<T, CircleShape>) {
                Rat r2 = sh.radius * sh.radius;
                return box_min_sq(sh.center, lo, hi) <= r2 && r2 <= box_max_sq(sh.center, lo, hi);
            } else if constexpr (std::is_same_v<T, ArcShape>) {
                throw std::invalid_argument("oracle: arc cells unsupported");
            } else {
                for (const auto& [a, b] : segment_list(Shape{sh}))
                    if (segment_meets_closed_box(a, b, lo, hi)) return true;
                return false;
            }
        },
        s);
}

bool cell_inside_open_ball(const MetricSpace& space, const Point& lo, const Point& hi,
                           const RawBall& b) {
    if (space.kind() == MetricKind::linf_exact) {
        for (std::size_t k = 0; k < lo.size(); ++k)
            if (!(lo[k] > b.center[k] - b.radius && hi[k] < b.center[k] + b.radius)) return false;
        return true;
    }
    return box_max_sq(b.center, lo, hi) < b.radius * b.radius;
}

bool covers_rec(const MetricSpace& space, const Shape& s, const std::vector<RawBall>& balls,
                Point lo, Point hi, int depth) {
    if (!cell_meets(space, s, lo, hi)) return true;
    for (const RawBall& b : balls)
        if (cell_inside_open_ball(space, lo, hi, b)) return true;
    if (depth == 0) return false;
    std::size_t k = 0;
    Rat w = hi[0] - lo[0];
    for (std::size_t j = 1; j < lo.size(); ++j)
        if (hi[j] - lo[j] > w) {
            w = hi[j] - lo[j];
            k = j;
        }
    Rat mid = (lo[k] + hi[k]) / 2;
    Point hi1 = hi, lo2 = lo;
    hi1[k] = mid;
    lo2[k] = mid;
    return covers_rec(space, s, balls, lo, hi1, depth - 1) &&
           covers_rec(space, s, balls, lo2, hi, depth - 1);
}

}  // namespace

bool balls_disjoint(const MetricSpace& space, const Code& i, const Code& j) {
    Ball a = space.ball(i), b = space.ball(j);
    Rat s = a.radius + b.radius;
    if (space.kind() == MetricKind::linf_exact) return linf_dist(a.center, b.center) >= s;
    return l2_sq(a.center, b.center) >= s * s;
}

bool ball_subset(const MetricSpace& space, const Code& i, const Code& j) {
    Ball a = space.ball(i), b = space.ball(j);
    Rat gap = b.radius - a.radius;
    if (gap < 0) return false;
    if (space.kind() == MetricKind::linf_exact) return linf_dist(a.center, b.center) <= gap;
    return l2_sq(a.center, b.center) <= gap * gap;
}

namespace {

// Open-box vs segment, by strict parametric clip. The feasible t-set is
// relatively open in [0,1], so emptiness of the clipped interval is exact.
bool segment_meets_open_box(const Point& a, const Point& b, const Point& lo, const Point& hi) {
    Rat t0(0), t1(1);
    bool all_degenerate_inside = true;
    bool has_direction = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        Rat d = b[k] - a[k];
        if (d == 0) {
            if (!(a[k] > lo[k] && a[k] < hi[k])) all_degenerate_inside = false;
            continue;
        }
        has_direction = true;
        Rat ta = (lo[k] - a[k]) / d, tb = (hi[k] - a[k]) / d;
        if (d < 0) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
    }
    if (!all_degenerate_inside) return false;
    if (!has_direction) return true;  // point "segment", already checked
    return t0 < t1;
}

}  // namespace

bool meets_raw(const MetricSpace& space, const Shape& s, const Point& center, const Rat& radius) {
    RawBall rb{center, radius};
    if (space.kind() == MetricKind::linf_exact) {
        auto [lo, hi] = ball_box(rb);
        return std::visit(
            [&](const auto& sh) -> bool {
                using T = std::decay_t<decltype(sh)>;
                if constexpr (std::is_same_v<T, BoxShape>) {
                    for (std::size_t k = 0; k < lo.size(); ++k)
                        if (!(sh.hi[k] > lo[k] && sh.lo[k] < hi[k])) return false;
                    return true;
                } else if constexpr (std::is_same_v<T, CircleShape>) {
                    Rat r2 = sh.radius * sh.radius;
                    // open box meets the circle iff r^2 falls strictly between
                    // the distance-square extrema over the closed box
                    return box_min_sq(sh.center, lo, hi) < r2 && r2 < box_max_sq(sh.center, lo, hi);
                } else if constexpr (std::is_same_v<T, ArcShape>) {
                    throw std::invalid_argument("oracle: arc meets unsupported");
                } else if constexpr (std::is_same_v<T, RayShape>) {
                    if (!sh.t_hi) {
                        // clip the ray to a parameter range that certainly
                        // passes every point near the box
                        Rat reach(1);
                        for (std::size_t k = 0; k < sh.origin.size(); ++k)
                            reach += abs_rat(sh.origin[k] - center[k]) + radius;
                        Rat dmax(0);
                        for (std::size_t k = 0; k < sh.dir.size(); ++k)
                            dmax = std::max(dmax, abs_rat(sh.dir[k]));
                        RayShape clipped = sh;
                        clipped.t_hi = sh.t_lo + reach / std::max(Rat(1, 1024), dmax) * 4 + 1;
                        return meets_raw(space, Shape{clipped}, center, radius);
                    }
                    for (const auto& [a, b] : segment_list(Shape{sh}))
                        if (segment_meets_open_box(a, b, lo, hi)) return true;
                    return false;
                } else {
                    for (const auto& [a, b] : segment_list(Shape{sh}))
                        if (segment_meets_open_box(a, b, lo, hi)) return true;
                    return false;
                }
            },
            s);
    }
    // l2 ambient
    Rat r2 = radius * radius;
    return std::visit(
        [&](const auto& sh) -> bool {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, BoxShape>) {
                return box_min_sq(center, sh.lo, sh.hi) < r2;
            } else if constexpr (std::is_same_v<T, CircleShape> || std::is_same_v<T, ArcShape>) {
                throw std::invalid_argument("oracle: circle vs l2 ball unsupported");
            } else if constexpr (std::is_same_v<T, RayShape>) {
                if (!sh.t_hi) {
                    Rat reach(1);
                    for (std::size_t k = 0; k < sh.origin.size(); ++k)
                        reach += abs_rat(sh.origin[k] - center[k]) + radius;
                    Rat dmax(0);
                    for (std::size_t k = 0; k < sh.dir.size(); ++k)
                        dmax = std::max(dmax, abs_rat(sh.dir[k]));
                    RayShape clipped = sh;
                    clipped.t_hi = sh.t_lo + reach / std::max(Rat(1, 1024), dmax) * 4 + 1;
                    return meets_raw(space, Shape{clipped}, center, radius);
                }
                for (const auto& [a, b] : segment_list(Shape{sh}))
                    if (segment_min_sq(a, b, center) < r2) return true;
                return false;
            } else {
                for (const auto& [a, b] : segment_list(Shape{sh}))
                    if (segment_min_sq(a, b, center) < r2) return true;
                return false;
            }
        },
        s);
}

bool meets(const MetricSpace& space, const Shape& s, const Code& ball_code) {
    Ball b = space.ball(ball_code);
    return meets_raw(space, s, b.center, b.radius);
}

bool contains(const MetricSpace& space, const Code& ball_code, const Shape& s) {
    Ball b = space.ball(ball_code);
    if (space.kind() == MetricKind::linf_exact) {
        auto [lo, hi] = ball_box(RawBall{b.center, b.radius});
        if (const auto* c = std::get_if<CircleShape>(&s)) {
            // farthest point of the circle from any box face: use the exact
            // circle bounding box, which the circle attains
            Point clo{c->center[0] - c->radius, c->center[1] - c->radius};
            Point chi{c->center[0] + c->radius, c->center[1] + c->radius};
            for (std::size_t k = 0; k < lo.size(); ++k)
                if (!(clo[k] > lo[k] && chi[k] < hi[k])) return false;
            return true;
        }
        auto [slo, shi] = shape_bounds(s);
        for (std::size_t k = 0; k < lo.size(); ++k)
            if (!(slo[k] > lo[k] && shi[k] < hi[k])) return false;
        return true;
    }
    Rat r2 = b.radius * b.radius;
    if (std::holds_alternative<CircleShape>(s) || std::holds_alternative<ArcShape>(s))
        throw std::invalid_argument("oracle: circle vs l2 ball unsupported");
    auto [slo, shi] = shape_bounds(s);
    return box_max_sq(b.center, slo, shi) < r2;
}

bool disjoint(const Shape& a, const Shape& b) {
    // Supported audit combinations; distance-based.
    if (const auto* ba = std::get_if<BoxShape>(&a)) {
        if (const auto* bb = std::get_if<BoxShape>(&b)) {
            for (std::size_t k = 0; k < ba->lo.size(); ++k)
                if (ba->hi[k] < bb->lo[k] || ba->lo[k] > bb->hi[k]) return true;
            return false;
        }
        if (std::holds_alternative<SegmentShape>(b) || std::holds_alternative<PolylineShape>(b)) {
            for (const auto& [p, q] : segment_list(b))
                if (segment_meets_closed_box(p, q, ba->lo, ba->hi)) return false;
            return true;
        }
    }
    if (std::holds_alternative<BoxShape>(b)) return disjoint(b, a);
    if (const auto* aa = std::get_if<ArcShape>(&a)) {
        if (const auto* ab = std::get_if<ArcShape>(&b)) {
            // same-circle arcs: parameter interval logic
            if (aa->center == ab->center && aa->radius == ab->radius &&
                aa->mirror == ab->mirror) {
                return aa->u_hi < ab->u_lo || ab->u_hi < aa->u_lo;
            }
        }
    }
    auto sa = segment_list(a), sb = segment_list(b);
    if (!sa.empty() && !sb.empty()) {
        for (const auto& [p1, q1] : sa)
            for (const auto& [p2, q2] : sb) {
                // closed segments disjoint iff min distance positive; check
                // endpoint-vs-segment minima and proper crossing
                if (segment_min_sq(p1, q1, p2) == 0 || segment_min_sq(p1, q1, q2) == 0 ||
                    segment_min_sq(p2, q2, p1) == 0 || segment_min_sq(p2, q2, q1) == 0)
                    return false;
                if (p1.size() == 2) {
                    auto orient = [](const Point& o, const Point& x, const Point& y) {
                        Rat v = (x[0] - o[0]) * (y[1] - o[1]) - (x[1] - o[1]) * (y[0] - o[0]);
                        return v > 0 ? 1 : (v < 0 ? -1 : 0);
                    };
                    int o1 = orient(p1, q1, p2), o2 = orient(p1, q1, q2);
                    int o3 = orient(p2, q2, p1), o4 = orient(p2, q2, q1);
                    if (o1 * o2 < 0 && o3 * o4 < 0) return false;  // proper crossing
                }
            }
        return true;
    }
    throw std::invalid_argument("oracle: unsupported disjointness combination");
}

bool covers_raw(const MetricSpace& space, const Shape& s,
                const std::vector<std::pair<Point, Rat>>& balls, int depth) {
    std::vector<RawBall> rb;
    rb.reserve(balls.size());
    for (const auto& [c, r] : balls) rb.push_back(RawBall{c, r});
    auto [lo, hi] = shape_bounds(s);
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (lo[k] == hi[k]) {
            lo[k] -= Rat(1, 1024);
            hi[k] += Rat(1, 1024);
        }
    return covers_rec(space, s, rb, lo, hi, depth);
}

bool covers(const MetricSpace& space, const Shape& s, const std::vector<Code>& balls, int depth) {
    std::vector<std::pair<Point, Rat>> raw;
    raw.reserve(balls.size());
    for (const Code& c : balls) {
        Ball b = space.ball(c);
        raw.emplace_back(b.center, b.radius);
    }
    return covers_raw(space, s, raw, depth);
}

bool hausdorff_lt(const MetricSpace& space, const Shape& s, const std::vector<Point>& pts,
                  const Rat& bound, int depth) {
    if (pts.empty()) return false;
    // every sample point close to the shape
    for (const Point& p : pts)
        if (!meets_raw(space, s, p, bound)) return false;
    // every shape point close to a sample
    std::vector<std::pair<Point, Rat>> balls;
    balls.reserve(pts.size());
    for (const Point& p : pts) balls.emplace_back(p, bound);
    return covers_raw(space, s, balls, depth);
}

}  // namespace ctop::oracle
