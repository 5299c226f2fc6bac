#include "ctop/shapes.hpp"

#include <algorithm>
#include <stdexcept>

namespace ctop {

namespace {

//
// Pure-root algebraic values: q or sgn*sqrt(rad) with rad a positive
// non-square rational. Everything the circle predicates need reduces to
// comparing these.
//
struct Alg {
    bool is_rat = true;
    Rat q;        // value when rational
    int sgn = 1;  // else value = sgn * sqrt(rad)
    Rat rad;

    static Alg rational(Rat v) { return Alg{true, std::move(v), 1, Rat(0)}; }
    static Alg root(const Rat& radicand, int sign) {
        // normalize perfect squares to rationals
        Code n = rat_num(radicand), d = rat_den(radicand);
        Code sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
        if (sn * sn == n && sd * sd == d) return rational(Rat(sn, sd) * sign);
        return Alg{false, Rat(0), sign, radicand};
    }
};

// sign of (a - b)
int alg_cmp(const Alg& a, const Alg& b) {
    auto sgn_rat = [](const Rat& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); };
    if (a.is_rat && b.is_rat) return sgn_rat(a.q - b.q);
    auto cmp_rat_root = [&](const Rat& q, int sgn, const Rat& rad) {
        // sign of q - sgn*sqrt(rad), rad > 0 irrational root
        if (sgn > 0) {
            if (q <= 0) return -1;
            return sgn_rat(q * q - rad);
        }
        if (q >= 0) return 1;
        return sgn_rat(rad - q * q);
    };
    if (a.is_rat) return cmp_rat_root(a.q, b.sgn, b.rad);
    if (b.is_rat) return -cmp_rat_root(b.q, a.sgn, a.rad);
    if (a.sgn != b.sgn) return a.sgn > b.sgn ? 1 : -1;
    int c = sgn_rat(a.rad - b.rad);
    return a.sgn > 0 ? c : -c;
}

// rational bounds of an Alg value within 2^-prec
Rat alg_lower(const Alg& a, int prec) {
    if (a.is_rat) return a.q;
    Code scale = Code(1) << prec;
    Code num = rat_num(a.rad), den = rat_den(a.rad);
    Code root = boost::multiprecision::sqrt(Code(num * den * scale * scale));
    Rat lo(root, den * scale);
    return a.sgn > 0 ? lo : -(lo + pow2(-prec));
}

Rat alg_upper(const Alg& a, int prec) {
    if (a.is_rat) return a.q;
    return -alg_lower(Alg{false, Rat(0), -a.sgn, a.rad}, prec);
}

struct Interval {
    Alg lo, hi;
    bool lo_strict = false, hi_strict = false;
};

bool interval_nonempty(const Interval& iv) {
    int w = alg_cmp(iv.lo, iv.hi);
    if (w < 0) return true;
    return w == 0 && !iv.lo_strict && !iv.hi_strict;
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
    Interval out = a;
    int c = alg_cmp(b.lo, out.lo);
    if (c > 0)
        out.lo = b.lo, out.lo_strict = b.lo_strict;
    else if (c == 0)
        out.lo_strict = out.lo_strict || b.lo_strict;
    c = alg_cmp(b.hi, out.hi);
    if (c < 0)
        out.hi = b.hi, out.hi_strict = b.hi_strict;
    else if (c == 0)
        out.hi_strict = out.hi_strict || b.hi_strict;
    if (!interval_nonempty(out)) return std::nullopt;
    return out;
}

using IntervalSet = std::vector<Interval>;

IntervalSet intersect_set(const IntervalSet& s, const IntervalSet& t) {
    IntervalSet out;
    for (const auto& a : s)
        for (const auto& b : t)
            if (auto iv = intersect(a, b)) out.push_back(*iv);
    return out;
}

//
// Circle machinery. A circle or arc decomposes into pieces
//   { (x, s*sqrt(r^2 - (x-cx)^2) + cy) : x in [xlo, xhi] }
// with rational x-ranges and a fixed upper/lower branch sign s.
//
struct CirclePiece {
    Rat cx, cy, r;
    Rat xlo, xhi;  // absolute x coordinates, [cx - r, cx + r] at widest
    int s;         // +1 upper branch, -1 lower
};

Rat weier_x(const Rat& u) { return (1 - u * u) / (1 + u * u); }
Rat weier_y(const Rat& u) { return 2 * u / (1 + u * u); }

std::vector<CirclePiece> circle_pieces(const CircleShape& c) {
    return {CirclePiece{c.center[0], c.center[1], c.radius, c.center[0] - c.radius,
                        c.center[0] + c.radius, +1},
            CirclePiece{c.center[0], c.center[1], c.radius, c.center[0] - c.radius,
                        c.center[0] + c.radius, -1}};
}

std::vector<CirclePiece> arc_pieces(const ArcShape& a) {
    if (a.u_lo > a.u_hi) throw std::invalid_argument("arc: bad parameter range");
    // split the parameter range where a coordinate changes monotonicity
    std::vector<Rat> cuts{a.u_lo};
    for (int v : {-1, 0, 1})
        if (a.u_lo < Rat(v) && Rat(v) < a.u_hi) cuts.push_back(Rat(v));
    cuts.push_back(a.u_hi);
    std::vector<CirclePiece> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Rat &ua = cuts[i], &ub = cuts[i + 1];
        Rat xa = weier_x(ua), xb = weier_x(ub);
        if (a.mirror) {
            xa = -xa;
            xb = -xb;
        }
        Rat xlo = std::min(xa, xb), xhi = std::max(xa, xb);
        // branch sign: sign of y on the open piece (y = 0 only at endpoints)
        Rat umid = (ua + ub) / 2;
        Rat ymid = weier_y(umid);
        int s = ymid >= 0 ? +1 : -1;
        if (ymid == 0) s = +1;  // degenerate piece (single point on the axis)
        out.push_back(CirclePiece{a.center[0], a.center[1], a.radius, a.center[0] + xlo,
                                  a.center[0] + xhi, s});
    }
    return out;
}

// Does the piece intersect the (open or closed) box? The piece is
// { (X, sqrt(r^2 - X^2)) : X in [xlo, xhi] } in circle-centered coordinates
// (the lower branch reflects the y-window), so the question is emptiness of
// an intersection of X-interval sets with rational-or-root endpoints.
bool piece_meets_box(const CirclePiece& p, const Point& lo, const Point& hi, bool strict) {
    Rat A1 = lo[0] - p.cx, B1 = hi[0] - p.cx;
    Rat A2 = lo[1] - p.cy, B2 = hi[1] - p.cy;
    if (p.s < 0) {
        Rat na2 = -B2, nb2 = -A2;
        A2 = na2;
        B2 = nb2;
    }
    Rat r2 = p.r * p.r;

    IntervalSet feas{Interval{Alg::rational(p.xlo - p.cx), Alg::rational(p.xhi - p.cx)}};
    feas = intersect_set(feas, {Interval{Alg::rational(A1), Alg::rational(B1), strict, strict}});

    // Y <= / < B2, with Y = sqrt(r2 - X^2) >= 0:
    if (strict ? B2 <= 0 : B2 < 0) return false;
    if (B2 == 0) {
        // closed case only: Y = 0, i.e. X = ±r
        IntervalSet pts{Interval{Alg::rational(-p.r), Alg::rational(-p.r)},
                        Interval{Alg::rational(p.r), Alg::rational(p.r)}};
        feas = intersect_set(feas, pts);
    } else {
        Rat pb = r2 - B2 * B2;
        if (pb > 0 || (pb == 0 && strict)) {
            // |X| > / >= sqrt(pb)
            Alg rt = Alg::root(pb, 1), nrt = Alg::root(pb, -1);
            IntervalSet outside{Interval{Alg::rational(-p.r), nrt, false, strict},
                                Interval{rt, Alg::rational(p.r), strict, false}};
            feas = intersect_set(feas, outside);
        }
    }

    // Y >= / > A2:
    if (A2 > 0 || (A2 == 0 && strict)) {
        Rat pa = r2 - A2 * A2;
        if (pa < 0 || (pa == 0 && strict)) return false;
        Alg rt = Alg::root(pa, 1), nrt = Alg::root(pa, -1);
        feas = intersect_set(feas, {Interval{nrt, rt, strict, strict}});
    }

    for (const auto& iv : feas)
        if (interval_nonempty(iv)) return true;
    return false;
}

// max/min of sqrt(r^2 - (x-cx)^2) over the piece's x-range, as Alg
Alg piece_y_max(const CirclePiece& p) {
    Rat lo = p.xlo - p.cx, hi = p.xhi - p.cx;
    Rat r2 = p.r * p.r;
    if (lo <= 0 && 0 <= hi) return Alg::rational(p.r);
    Rat closest = lo > 0 ? lo : hi;  // smallest |X|
    return Alg::root(r2 - closest * closest, 1);
}

Alg piece_y_min(const CirclePiece& p) {
    Rat lo = p.xlo - p.cx, hi = p.xhi - p.cx;
    Rat r2 = p.r * p.r;
    Rat a = lo < 0 ? -lo : lo, b = hi < 0 ? -hi : hi;
    Rat far = std::max(a, b);
    if (far > p.r) far = p.r;
    return Alg::root(r2 - far * far, 1);
}

bool piece_inside_open_box(const CirclePiece& p, const Point& lo, const Point& hi) {
    if (!(p.xlo > lo[0] && p.xhi < hi[0])) return false;
    Alg ymax = piece_y_max(p), ymin = piece_y_min(p);
    if (p.s > 0) {
        // y in [cy + ymin, cy + ymax]
        return alg_cmp(ymax, Alg::rational(hi[1] - p.cy)) < 0 &&
               alg_cmp(ymin, Alg::rational(lo[1] - p.cy)) > 0;
    }
    return alg_cmp(ymax, Alg::rational(p.cy - lo[1])) < 0 &&
           alg_cmp(ymin, Alg::rational(p.cy - hi[1])) > 0;
}

//
// Segment/box/ray primitives (interval logic, exact).
//
bool box_meets_box(const Point& alo, const Point& ahi, const Point& blo, const Point& bhi,
                   bool strict) {
    for (std::size_t k = 0; k < alo.size(); ++k) {
        if (strict) {
            if (!(ahi[k] > blo[k] && alo[k] < bhi[k])) return false;
        } else {
            if (!(ahi[k] >= blo[k] && alo[k] <= bhi[k])) return false;
        }
    }
    return true;
}

bool box_inside_open_box(const Point& alo, const Point& ahi, const Point& blo, const Point& bhi) {
    for (std::size_t k = 0; k < alo.size(); ++k)
        if (!(alo[k] > blo[k] && ahi[k] < bhi[k])) return false;
    return true;
}

// parametric clip of {o + t d : t in [t0, t1 or inf)} against a box
bool param_line_meets_box(const Point& o, const Point& d, const Rat& t0,
                          const std::optional<Rat>& t1, const Point& lo, const Point& hi,
                          bool strict) {
    Rat tlo = t0;
    bool tlo_strict = false;
    std::optional<Rat> thi = t1;
    bool thi_strict = false;
    for (std::size_t k = 0; k < o.size(); ++k) {
        if (d[k] == 0) {
            if (strict ? !(lo[k] < o[k] && o[k] < hi[k]) : !(lo[k] <= o[k] && o[k] <= hi[k]))
                return false;
            continue;
        }
        Rat ta = (lo[k] - o[k]) / d[k];
        Rat tb = (hi[k] - o[k]) / d[k];
        if (d[k] < 0) std::swap(ta, tb);
        if (ta > tlo || (ta == tlo && strict)) {
            tlo = ta;
            tlo_strict = strict;
        }
        if (!thi || tb < *thi || (tb == *thi && strict)) {
            thi = tb;
            thi_strict = strict;
        }
    }
    if (!thi) return true;
    if (tlo < *thi) return true;
    if (tlo == *thi && !tlo_strict && !thi_strict) return true;
    return false;
}

std::vector<SegmentShape> polyline_segments(const PolylineShape& p) {
    std::vector<SegmentShape> segs;
    for (std::size_t i = 0; i + 1 < p.pts.size(); ++i)
        segs.push_back(SegmentShape{p.pts[i], p.pts[i + 1]});
    if (segs.empty() && !p.pts.empty()) segs.push_back(SegmentShape{p.pts[0], p.pts[0]});
    return segs;
}

Point sub(const Point& a, const Point& b) {
    Point d(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
    return d;
}

bool segment_meets_box(const SegmentShape& s, const Point& lo, const Point& hi, bool strict) {
    return param_line_meets_box(s.a, sub(s.b, s.a), Rat(0), Rat(1), lo, hi, strict);
}

Rat min_dist_sq_box(const Point& c, const Point& lo, const Point& hi) {
    Rat s(0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        Rat d(0);
        if (c[k] < lo[k]) d = lo[k] - c[k];
        else if (c[k] > hi[k]) d = c[k] - hi[k];
        s += d * d;
    }
    return s;
}

Rat max_dist_sq_box(const Point& c, const Point& lo, const Point& hi) {
    Rat s(0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        Rat a = c[k] - lo[k];
        if (a < 0) a = -a;
        Rat b = hi[k] - c[k];
        if (b < 0) b = -b;
        Rat d = std::max(a, b);
        s += d * d;
    }
    return s;
}

Rat seg_min_dist_sq(const SegmentShape& s, const Point& c) {
    Point d = sub(s.b, s.a), w = sub(c, s.a);
    Rat dd(0), wd(0);
    for (std::size_t k = 0; k < d.size(); ++k) {
        dd += d[k] * d[k];
        wd += w[k] * d[k];
    }
    Rat t = dd == 0 ? Rat(0) : wd / dd;
    if (t < 0) t = 0;
    if (t > 1) t = 1;
    Rat out(0);
    for (std::size_t k = 0; k < d.size(); ++k) {
        Rat diff = s.a[k] + t * d[k] - c[k];
        out += diff * diff;
    }
    return out;
}

}  // namespace

bool shape_is_compact(const Shape& s) {
    if (const auto* r = std::get_if<RayShape>(&s)) return r->t_hi.has_value();
    if (std::holds_alternative<HalfStripShape>(s)) return false;
    return true;
}

std::pair<Point, Point> shape_bounds(const Shape& s) {
    return std::visit(
        [](const auto& sh) -> std::pair<Point, Point> {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, BoxShape>) {
                return {sh.lo, sh.hi};
            } else if constexpr (std::is_same_v<T, SegmentShape>) {
                Point lo(sh.a.size()), hi(sh.a.size());
                for (std::size_t k = 0; k < sh.a.size(); ++k) {
                    lo[k] = std::min(sh.a[k], sh.b[k]);
                    hi[k] = std::max(sh.a[k], sh.b[k]);
                }
                return {lo, hi};
            } else if constexpr (std::is_same_v<T, PolylineShape>) {
                Point lo = sh.pts.at(0), hi = sh.pts.at(0);
                for (const Point& p : sh.pts)
                    for (std::size_t k = 0; k < p.size(); ++k) {
                        lo[k] = std::min(lo[k], p[k]);
                        hi[k] = std::max(hi[k], p[k]);
                    }
                return {lo, hi};
            } else if constexpr (std::is_same_v<T, CircleShape>) {
                Point lo{sh.center[0] - sh.radius, sh.center[1] - sh.radius};
                Point hi{sh.center[0] + sh.radius, sh.center[1] + sh.radius};
                return {lo, hi};
            } else if constexpr (std::is_same_v<T, ArcShape>) {
                auto pieces = arc_pieces(sh);
                Rat xlo = pieces[0].xlo, xhi = pieces[0].xhi;
                Rat ylo = sh.center[1] + sh.radius, yhi = sh.center[1] - sh.radius;
                for (const auto& p : pieces) {
                    xlo = std::min(xlo, p.xlo);
                    xhi = std::max(xhi, p.xhi);
                    Alg ymax = piece_y_max(p), ymin = piece_y_min(p);
                    // rational outer bounds are fine for a bounding box
                    Rat up = p.s > 0 ? alg_upper(ymax, 20) : -alg_lower(ymin, 20);
                    Rat dn = p.s > 0 ? alg_lower(ymin, 20) : -alg_upper(ymax, 20);
                    yhi = std::max(yhi, Rat(p.cy + up));
                    ylo = std::min(ylo, Rat(p.cy + dn));
                }
                return {Point{xlo, ylo}, Point{xhi, yhi}};
            } else if constexpr (std::is_same_v<T, HalfStripShape>) {
                throw std::invalid_argument("shape_bounds: noncompact strip");
            } else if constexpr (std::is_same_v<T, RayShape>) {
                if (!sh.t_hi) throw std::invalid_argument("shape_bounds: noncompact ray");
                Point a(sh.origin.size()), b(sh.origin.size());
                for (std::size_t k = 0; k < a.size(); ++k) {
                    a[k] = sh.origin[k] + sh.t_lo * sh.dir[k];
                    b[k] = sh.origin[k] + *sh.t_hi * sh.dir[k];
                }
                Point lo(a.size()), hi(a.size());
                for (std::size_t k = 0; k < a.size(); ++k) {
                    lo[k] = std::min(a[k], b[k]);
                    hi[k] = std::max(a[k], b[k]);
                }
                return {lo, hi};
            }
        },
        s);
}

bool shape_meets_box(const Shape& s, const Point& lo, const Point& hi, bool strict) {
    return std::visit(
        [&](const auto& sh) -> bool {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, BoxShape>) {
                return box_meets_box(sh.lo, sh.hi, lo, hi, strict);
            } else if constexpr (std::is_same_v<T, SegmentShape>) {
                return segment_meets_box(sh, lo, hi, strict);
            } else if constexpr (std::is_same_v<T, PolylineShape>) {
                for (const auto& seg : polyline_segments(sh))
                    if (segment_meets_box(seg, lo, hi, strict)) return true;
                return false;
            } else if constexpr (std::is_same_v<T, CircleShape>) {
                for (const auto& p : circle_pieces(sh))
                    if (piece_meets_box(p, lo, hi, strict)) return true;
                return false;
            } else if constexpr (std::is_same_v<T, ArcShape>) {
                for (const auto& p : arc_pieces(sh))
                    if (piece_meets_box(p, lo, hi, strict)) return true;
                return false;
            } else if constexpr (std::is_same_v<T, RayShape>) {
                return param_line_meets_box(sh.origin, sh.dir, sh.t_lo, sh.t_hi, lo, hi, strict);
            } else if constexpr (std::is_same_v<T, HalfStripShape>) {
                for (std::size_t k = 0; k < lo.size(); ++k) {
                    bool bounded_above = static_cast<int>(k) != sh.axis;
                    if (strict) {
                        if (!(hi[k] > sh.lo[k])) return false;
                        if (bounded_above && !(lo[k] < sh.hi[k])) return false;
                    } else {
                        if (!(hi[k] >= sh.lo[k])) return false;
                        if (bounded_above && !(lo[k] <= sh.hi[k])) return false;
                    }
                }
                return true;
            }
        },
        s);
}

bool shape_meets_ball(const MetricSpace& space, const Shape& s, const Code& ball_code) {
    Ball b = space.ball(ball_code);
    if (space.kind() == MetricKind::linf_exact) {
        Point lo(b.center.size()), hi(b.center.size());
        for (std::size_t k = 0; k < lo.size(); ++k) {
            lo[k] = b.center[k] - b.radius;
            hi[k] = b.center[k] + b.radius;
        }
        return shape_meets_box(s, lo, hi, true);
    }
    // l2: supported for the interval-logic shapes
    Rat r2 = b.radius * b.radius;
    return std::visit(
        [&](const auto& sh) -> bool {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, BoxShape>) {
                return min_dist_sq_box(b.center, sh.lo, sh.hi) < r2;
            } else if constexpr (std::is_same_v<T, SegmentShape>) {
                return seg_min_dist_sq(sh, b.center) < r2;
            } else if constexpr (std::is_same_v<T, PolylineShape>) {
                for (const auto& seg : polyline_segments(sh))
                    if (seg_min_dist_sq(seg, b.center) < r2) return true;
                return false;
            } else if constexpr (std::is_same_v<T, RayShape>) {
                Rat hi_t;
                if (sh.t_hi) {
                    hi_t = *sh.t_hi;
                } else {
                    // beyond some parameter the ray only recedes; clip at a
                    // bound that surely passes the closest point
                    Rat far(1);
                    for (std::size_t k = 0; k < sh.origin.size(); ++k) {
                        Rat o = sh.origin[k] - b.center[k];
                        if (o < 0) o = -o;
                        far += o + b.radius;
                    }
                    Rat dmin(1);
                    for (std::size_t k = 0; k < sh.dir.size(); ++k) {
                        Rat a = sh.dir[k] < 0 ? -sh.dir[k] : sh.dir[k];
                        if (a > 0) dmin = std::min(dmin, a);
                    }
                    hi_t = sh.t_lo + far / dmin + 1;
                }
                Point a(sh.origin.size()), bb(sh.origin.size());
                for (std::size_t k = 0; k < a.size(); ++k) {
                    a[k] = sh.origin[k] + sh.t_lo * sh.dir[k];
                    bb[k] = sh.origin[k] + hi_t * sh.dir[k];
                }
                return seg_min_dist_sq(SegmentShape{a, bb}, b.center) < r2;
            } else if constexpr (std::is_same_v<T, HalfStripShape>) {
                Point chi = sh.hi;
                Rat reach = sh.lo[sh.axis] + 1;
                for (std::size_t k = 0; k < b.center.size(); ++k) {
                    Rat a = b.center[k] < 0 ? -b.center[k] : b.center[k];
                    reach += a + b.radius;
                }
                chi[sh.axis] = reach;
                return min_dist_sq_box(b.center, sh.lo, chi) < r2;
            } else {
                throw std::invalid_argument("shape_meets_ball: circle shapes need the linf metric");
            }
        },
        s);
}

bool ball_contains_shape(const MetricSpace& space, const Shape& s, const Code& ball_code) {
    Ball b = space.ball(ball_code);
    if (space.kind() == MetricKind::linf_exact) {
        Point lo(b.center.size()), hi(b.center.size());
        for (std::size_t k = 0; k < lo.size(); ++k) {
            lo[k] = b.center[k] - b.radius;
            hi[k] = b.center[k] + b.radius;
        }
        return std::visit(
            [&](const auto& sh) -> bool {
                using T = std::decay_t<decltype(sh)>;
                if constexpr (std::is_same_v<T, BoxShape>) {
                    return box_inside_open_box(sh.lo, sh.hi, lo, hi);
                } else if constexpr (std::is_same_v<T, SegmentShape>) {
                    auto [slo, shi] = shape_bounds(Shape{sh});
                    return box_inside_open_box(slo, shi, lo, hi);
                } else if constexpr (std::is_same_v<T, PolylineShape>) {
                    auto [slo, shi] = shape_bounds(Shape{sh});
                    return box_inside_open_box(slo, shi, lo, hi);
                } else if constexpr (std::is_same_v<T, CircleShape>) {
                    for (const auto& p : circle_pieces(sh))
                        if (!piece_inside_open_box(p, lo, hi)) return false;
                    return true;
                } else if constexpr (std::is_same_v<T, ArcShape>) {
                    for (const auto& p : arc_pieces(sh))
                        if (!piece_inside_open_box(p, lo, hi)) return false;
                    return true;
                } else if constexpr (std::is_same_v<T, RayShape>) {
                    if (!sh.t_hi) return false;
                    auto [slo, shi] = shape_bounds(Shape{sh});
                    return box_inside_open_box(slo, shi, lo, hi);
                } else if constexpr (std::is_same_v<T, HalfStripShape>) {
                    return false;
                }
            },
            s);
    }
    Rat r2 = b.radius * b.radius;
    return std::visit(
        [&](const auto& sh) -> bool {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, BoxShape>) {
                return max_dist_sq_box(b.center, sh.lo, sh.hi) < r2;
            } else if constexpr (std::is_same_v<T, SegmentShape>) {
                Rat da = space.dist_sq(sh.a, b.center), db = space.dist_sq(sh.b, b.center);
                return da < r2 && db < r2;
            } else if constexpr (std::is_same_v<T, PolylineShape>) {
                for (const Point& p : sh.pts)
                    if (!(space.dist_sq(p, b.center) < r2)) return false;
                return true;
            } else if constexpr (std::is_same_v<T, RayShape>) {
                if (!sh.t_hi) return false;
                auto [slo, shi] = shape_bounds(Shape{sh});
                return max_dist_sq_box(b.center, slo, shi) < r2;
            } else if constexpr (std::is_same_v<T, HalfStripShape>) {
                return false;
            } else {
                throw std::invalid_argument("ball_contains_shape: circle shapes need linf");
            }
        },
        s);
}

namespace {

bool cell_inside_ball(const MetricSpace& space, const Point& lo, const Point& hi, const Ball& b) {
    if (space.kind() == MetricKind::linf_exact) {
        for (std::size_t k = 0; k < lo.size(); ++k)
            if (!(lo[k] > b.center[k] - b.radius && hi[k] < b.center[k] + b.radius)) return false;
        return true;
    }
    return max_dist_sq_box(b.center, lo, hi) < b.radius * b.radius;
}

bool covers_rec(const MetricSpace& space, const Shape& s, const std::vector<Ball>& balls,
                Point lo, Point hi, int depth) {
    if (!shape_meets_box(s, lo, hi, false)) return true;  // cell misses the shape
    for (const Ball& b : balls)
        if (cell_inside_ball(space, lo, hi, b)) return true;
    if (depth == 0) return false;
    // split the widest coordinate
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

bool covers_shape(const MetricSpace& space, const Shape& s, const std::vector<Code>& ball_codes,
                  int max_depth) {
    if (!shape_is_compact(s)) throw std::invalid_argument("covers_shape: shape must be compact");
    std::vector<Ball> balls;
    balls.reserve(ball_codes.size());
    for (const Code& c : ball_codes) balls.push_back(space.ball(c));
    auto [lo, hi] = shape_bounds(s);
    // widen degenerate axes a touch so splitting makes progress
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (lo[k] == hi[k]) {
            lo[k] -= Rat(1, 1024);
            hi[k] += Rat(1, 1024);
        }
    return covers_rec(space, s, balls, lo, hi, max_depth);
}

Point shape_sample_point(const Shape& s) {
    return std::visit(
        [](const auto& sh) -> Point {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, BoxShape>) {
                Point p(sh.lo.size());
                for (std::size_t k = 0; k < p.size(); ++k) p[k] = (sh.lo[k] + sh.hi[k]) / 2;
                return p;
            } else if constexpr (std::is_same_v<T, SegmentShape>) {
                Point p(sh.a.size());
                for (std::size_t k = 0; k < p.size(); ++k) p[k] = (sh.a[k] + sh.b[k]) / 2;
                return p;
            } else if constexpr (std::is_same_v<T, PolylineShape>) {
                return sh.pts.at(0);
            } else if constexpr (std::is_same_v<T, CircleShape>) {
                return Point{sh.center[0] + sh.radius, sh.center[1]};
            } else if constexpr (std::is_same_v<T, ArcShape>) {
                Rat um = (sh.u_lo + sh.u_hi) / 2;
                Rat x = weier_x(um), y = weier_y(um);
                if (sh.mirror) x = -x;
                return Point{sh.center[0] + sh.radius * x, sh.center[1] + sh.radius * y};
            } else if constexpr (std::is_same_v<T, RayShape>) {
                Point p(sh.origin.size());
                for (std::size_t k = 0; k < p.size(); ++k)
                    p[k] = sh.origin[k] + sh.t_lo * sh.dir[k];
                return p;
            } else if constexpr (std::is_same_v<T, HalfStripShape>) {
                return sh.lo;
            }
        },
        s);
}

}  // namespace ctop

namespace ctop {

bool closed_ball_contains_shape(const MetricSpace& space, const Shape& s, const Code& ball_code) {
    Ball b = space.ball(ball_code);
    if (!shape_is_compact(s)) return false;
    if (space.kind() == MetricKind::linf_exact) {
        Point lo(b.center.size()), hi(b.center.size());
        for (std::size_t k = 0; k < lo.size(); ++k) {
            lo[k] = b.center[k] - b.radius;
            hi[k] = b.center[k] + b.radius;
        }
        // exact bounding boxes are attained for the interval shapes; circle
        // pieces compare through their algebraic extrema
        if (std::holds_alternative<CircleShape>(s)) {
            const auto& c = std::get<CircleShape>(s);
            return c.center[0] - c.radius >= lo[0] && c.center[0] + c.radius <= hi[0] &&
                   c.center[1] - c.radius >= lo[1] && c.center[1] + c.radius <= hi[1];
        }
        if (std::holds_alternative<ArcShape>(s)) {
            const auto& a = std::get<ArcShape>(s);
            for (const auto& p : arc_pieces(a)) {
                if (!(p.xlo >= lo[0] && p.xhi <= hi[0])) return false;
                Alg ymax = piece_y_max(p), ymin = piece_y_min(p);
                if (p.s > 0) {
                    if (alg_cmp(ymax, Alg::rational(hi[1] - p.cy)) > 0) return false;
                    if (alg_cmp(ymin, Alg::rational(lo[1] - p.cy)) < 0) return false;
                } else {
                    if (alg_cmp(ymax, Alg::rational(p.cy - lo[1])) > 0) return false;
                    if (alg_cmp(ymin, Alg::rational(p.cy - hi[1])) < 0) return false;
                }
            }
            return true;
        }
        auto [slo, shi] = shape_bounds(s);
        for (std::size_t k = 0; k < lo.size(); ++k)
            if (!(slo[k] >= lo[k] && shi[k] <= hi[k])) return false;
        return true;
    }
    Rat r2 = b.radius * b.radius;
    auto [slo, shi] = shape_bounds(s);
    Rat m(0);
    for (std::size_t k = 0; k < slo.size(); ++k) {
        Rat a = b.center[k] - slo[k];
        if (a < 0) a = -a;
        Rat c = shi[k] - b.center[k];
        if (c < 0) c = -c;
        Rat d = std::max(a, c);
        m += d * d;
    }
    return m <= r2;
}

std::vector<Shape> clip_shape(const Shape& s, const Point& lo, const Point& hi) {
    std::vector<Shape> out;
    if (!shape_meets_box(s, lo, hi, false)) return out;
    if (const auto* b = std::get_if<BoxShape>(&s)) {
        Point nlo = b->lo, nhi = b->hi;
        for (std::size_t k = 0; k < nlo.size(); ++k) {
            nlo[k] = std::max(nlo[k], lo[k]);
            nhi[k] = std::min(nhi[k], hi[k]);
        }
        out.push_back(BoxShape{nlo, nhi});
        return out;
    }
    if (const auto* st = std::get_if<HalfStripShape>(&s)) {
        Point nlo = st->lo, nhi = st->hi;
        nhi[st->axis] = hi[st->axis];
        for (std::size_t k = 0; k < nlo.size(); ++k) {
            nlo[k] = std::max(nlo[k], lo[k]);
            if (static_cast<int>(k) != st->axis) nhi[k] = std::min(nhi[k], hi[k]);
        }
        out.push_back(BoxShape{nlo, nhi});
        return out;
    }
    auto clip_param = [&](const Point& o, const Point& d, Rat t0, std::optional<Rat> t1)
        -> std::optional<std::pair<Rat, Rat>> {
        Rat a = t0;
        std::optional<Rat> b1 = t1;
        for (std::size_t k = 0; k < o.size(); ++k) {
            if (d[k] == 0) {
                if (o[k] < lo[k] || o[k] > hi[k]) return std::nullopt;
                continue;
            }
            Rat ta = (lo[k] - o[k]) / d[k], tb = (hi[k] - o[k]) / d[k];
            if (d[k] < 0) std::swap(ta, tb);
            a = std::max(a, ta);
            if (!b1 || tb < *b1) b1 = tb;
        }
        if (!b1 || a > *b1) return std::nullopt;
        return std::make_pair(a, *b1);
    };
    auto emit_segment = [&](const Point& o, const Point& d, const Rat& a, const Rat& b1) {
        Point pa(o.size()), pb(o.size());
        for (std::size_t k = 0; k < o.size(); ++k) {
            pa[k] = o[k] + a * d[k];
            pb[k] = o[k] + b1 * d[k];
        }
        out.push_back(SegmentShape{pa, pb});
    };
    if (const auto* seg = std::get_if<SegmentShape>(&s)) {
        Point d(seg->a.size());
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = seg->b[k] - seg->a[k];
        if (auto t = clip_param(seg->a, d, Rat(0), Rat(1))) emit_segment(seg->a, d, t->first, t->second);
        return out;
    }
    if (const auto* ray = std::get_if<RayShape>(&s)) {
        if (auto t = clip_param(ray->origin, ray->dir, ray->t_lo, ray->t_hi))
            emit_segment(ray->origin, ray->dir, t->first, t->second);
        return out;
    }
    if (const auto* pl = std::get_if<PolylineShape>(&s)) {
        for (std::size_t i = 0; i + 1 < pl->pts.size(); ++i) {
            Point d(pl->pts[i].size());
            for (std::size_t k = 0; k < d.size(); ++k) d[k] = pl->pts[i + 1][k] - pl->pts[i][k];
            if (auto t = clip_param(pl->pts[i], d, Rat(0), Rat(1)))
                emit_segment(pl->pts[i], d, t->first, t->second);
        }
        return out;
    }
    // circle / arc: all-or-nothing
    auto [slo, shi] = shape_bounds(s);
    bool inside = true;
    for (std::size_t k = 0; k < slo.size(); ++k)
        if (!(slo[k] >= lo[k] && shi[k] <= hi[k])) inside = false;
    if (inside) {
        out.push_back(s);
        return out;
    }
    throw std::invalid_argument("clip_shape: circle shapes only clip in the all-or-nothing cases");
}

}  // namespace ctop
