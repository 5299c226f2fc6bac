#include "ctop/metric.hpp"

#include <limits>
#include <mutex>
#include <stdexcept>

namespace ctop {

namespace {

// 0, 1, -1, 2, -2, ... (numerator enumeration)
Code zigzag(const Code& u) {
    if (u % 2 == 0) return -(u / 2);
    return (u + 1) / 2;
}

Code zigzag_inv(const Code& z) {
    if (z <= 0) return -z * 2;
    return z * 2 - 1;
}

Rat coord_decode(const Code& c) {
    auto [u, v] = unpair_code(c);
    return Rat(zigzag(u), v + 1);
}

Code coord_encode(const Rat& q) {
    return pair_code(zigzag_inv(rat_num(q)), rat_den(q) - 1);
}

// Floor of sqrt(x) for rational x scaled to precision 2^-prec.
Rat sqrt_lower(const Rat& x, int prec) {
    if (x <= 0) return Rat(0);
    Code scale = Code(1) << prec;
    Code num = rat_num(x) * scale * scale;
    Code den = rat_den(x);
    // floor(sqrt(num/den)) = floor(sqrt(num*den))/den
    Code root = boost::multiprecision::sqrt(Code(num * den));
    return Rat(root, den * scale);
}

}  // namespace

struct MetricSpace::Cache {
    std::mutex mu;
    std::unordered_map<std::uint64_t, Ball> balls;
};

MetricSpace::MetricSpace(int dim, MetricKind kind)
    : dim_(dim), kind_(kind), cache_(std::make_shared<Cache>()) {
    if (dim < 1) throw std::invalid_argument("MetricSpace: dim must be >= 1");
}

Point MetricSpace::dense_point(const Code& i) const {
    Point p;
    p.reserve(dim_);
    Code rest = i;
    for (int k = 0; k + 1 < dim_; ++k) {
        auto [head, tail] = unpair_code(rest);
        p.push_back(coord_decode(head));
        rest = tail;
    }
    p.push_back(coord_decode(rest));
    return p;
}

Code MetricSpace::dense_index(const Point& p) const {
    if (static_cast<int>(p.size()) != dim_) throw std::invalid_argument("dense_index: wrong dimension");
    Code rest = coord_encode(p.back());
    for (int k = dim_ - 2; k >= 0; --k) rest = pair_code(coord_encode(p[k]), rest);
    return rest;
}

Rat MetricSpace::dist_linf(const Point& a, const Point& b) const {
    Rat m(0);
    for (int k = 0; k < dim_; ++k) {
        Rat d = a[k] - b[k];
        if (d < 0) d = -d;
        if (d > m) m = d;
    }
    return m;
}

Rat MetricSpace::dist_sq(const Point& a, const Point& b) const {
    Rat s(0);
    for (int k = 0; k < dim_; ++k) {
        Rat d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

Rat MetricSpace::dist_approx(const Code& i, const Code& j, int precision_exp) const {
    Point a = dense_point(i), b = dense_point(j);
    if (kind_ == MetricKind::linf_exact) return dist_linf(a, b);
    return sqrt_lower(dist_sq(a, b), precision_exp + 1);
}

Ball MetricSpace::ball(const Code& i) const {
    if (i <= Code(std::numeric_limits<std::uint64_t>::max())) {
        std::uint64_t key = static_cast<std::uint64_t>(i);
        std::scoped_lock lock(cache_->mu);
        auto it = cache_->balls.find(key);
        if (it != cache_->balls.end()) return it->second;
        auto [u, v] = unpair_code(i);
        Ball b{dense_point(u), rat_enum(v)};
        cache_->balls.emplace(key, b);
        return b;
    }
    auto [u, v] = unpair_code(i);
    return Ball{dense_point(u), rat_enum(v)};
}

Code MetricSpace::ball_index(const Point& center, const Rat& radius) const {
    return pair_code(dense_index(center), rat_index(radius));
}

bool MetricSpace::point_in_ball(const Point& x, const Code& i) const {
    Ball b = ball(i);
    if (kind_ == MetricKind::linf_exact) return dist_linf(x, b.center) < b.radius;
    return dist_sq(x, b.center) < b.radius * b.radius;
}

bool MetricSpace::point_in_closed_ball(const Point& x, const Code& i) const {
    Ball b = ball(i);
    if (kind_ == MetricKind::linf_exact) return dist_linf(x, b.center) <= b.radius;
    return dist_sq(x, b.center) <= b.radius * b.radius;
}

bool MetricSpace::formally_disjoint_true(const Code& i, const Code& j) const {
    Ball a = ball(i), b = ball(j);
    Rat s = a.radius + b.radius;
    if (kind_ == MetricKind::linf_exact) return dist_linf(a.center, b.center) > s;
    return dist_sq(a.center, b.center) > s * s;
}

bool MetricSpace::formally_contained_true(const Code& i, const Code& j) const {
    Ball a = ball(i), b = ball(j);
    Rat gap = b.radius - a.radius;
    if (gap <= 0) return false;
    if (kind_ == MetricKind::linf_exact) return dist_linf(a.center, b.center) < gap;
    return dist_sq(a.center, b.center) < gap * gap;
}

SemiDecision formally_disjoint(const MetricSpace& space, const Code& i, const Code& j, Fuel fuel) {
    if (fuel == 0) return SemiDecision::no();
    // Strict rational inequalities decide exactly at fuel 1 (squared form for l2).
    return space.formally_disjoint_true(i, j) ? SemiDecision::yes() : SemiDecision::no();
}

SemiDecision formally_contained(const MetricSpace& space, const Code& i, const Code& j, Fuel fuel) {
    if (fuel == 0) return SemiDecision::no();
    return space.formally_contained_true(i, j) ? SemiDecision::yes() : SemiDecision::no();
}

ComputablePoint exact_point(const MetricSpace& space, Point x) {
    return ComputablePoint{[space, x = std::move(x)](std::uint64_t s) -> std::optional<Code> {
        Code i(s);
        if (space.point_in_ball(x, i)) return i;
        return std::nullopt;
    }};
}

std::optional<std::pair<Code, Code>> try_separate_points(const MetricSpace& space,
                                                         const ComputablePoint& x,
                                                         const ComputablePoint& y, Fuel fuel) {
    // Claim (3) recipe: equal radii q_k with the certified slack d > 4 q_k, so
    // the returned radii are below d(x,y)/4. Balls are paired up within a
    // radius tier in arrival order, which keeps the first hit stable in fuel.
    std::unordered_map<std::uint64_t, std::pair<std::vector<Code>, std::vector<Code>>> tiers;
    auto check = [&](const Code& i, const Code& j, const Rat& qk) {
        Ball bi = space.ball(i), bj = space.ball(j);
        bool slack;
        if (space.kind() == MetricKind::linf_exact)
            slack = space.dist_linf(bi.center, bj.center) > 4 * qk;
        else
            slack = space.dist_sq(bi.center, bj.center) > 16 * qk * qk;
        return slack && space.formally_disjoint_true(i, j);
    };
    for (std::uint64_t s = 0; s < fuel; ++s) {
        std::optional<Code> cx = x.balls(s), cy = y.balls(s);
        if (cx) {
            Code ti = unpair_code(*cx).second;
            if (ti <= Code(fuel)) {
                auto& tier = tiers[static_cast<std::uint64_t>(ti)];
                Rat qk = rat_enum(ti);
                for (const Code& j : tier.second)
                    if (check(*cx, j, qk)) return std::make_pair(*cx, j);
                tier.first.push_back(*cx);
            }
        }
        if (cy) {
            Code tj = unpair_code(*cy).second;
            if (tj <= Code(fuel)) {
                auto& tier = tiers[static_cast<std::uint64_t>(tj)];
                Rat qk = rat_enum(tj);
                for (const Code& i : tier.first)
                    if (check(i, *cy, qk)) return std::make_pair(i, *cy);
                tier.second.push_back(*cy);
            }
        }
    }
    return std::nullopt;
}

std::pair<Code, Code> separate_points(const MetricSpace& space, const ComputablePoint& x,
                                      const ComputablePoint& y) {
    for (Fuel fuel = 64;; fuel *= 2)
        if (auto r = try_separate_points(space, x, y, fuel)) return *r;
}

std::optional<Code> try_refine_common(const MetricSpace& space, const Code& i, const Code& j,
                                      const ComputablePoint& x, Fuel fuel) {
    for (std::uint64_t s = 0; s < fuel; ++s) {
        auto k = x.balls(s);
        if (!k) continue;
        if (space.formally_contained_true(*k, i) && space.formally_contained_true(*k, j)) return *k;
    }
    return std::nullopt;
}

Code refine_common(const MetricSpace& space, const Code& i, const Code& j,
                   const ComputablePoint& x) {
    for (Fuel fuel = 64;; fuel *= 2)
        if (auto r = try_refine_common(space, i, j, x, fuel)) return *r;
}

std::optional<Code> try_escape_closed_ball(const MetricSpace& space, const ComputablePoint& x,
                                           const Code& i, Fuel fuel) {
    Ball bi = space.ball(i);
    for (std::uint64_t step = 0; step < fuel; ++step) {
        auto k = x.balls(step);
        if (!k) continue;
        Ball bk = space.ball(*k);
        // Recipe inequality rho_i + 2 rho_j < d, strictly stronger than the
        // formal disjointness it certifies.
        Rat s = bi.radius + 2 * bk.radius;
        bool ok;
        if (space.kind() == MetricKind::linf_exact)
            ok = space.dist_linf(bi.center, bk.center) > s;
        else
            ok = space.dist_sq(bi.center, bk.center) > s * s;
        if (ok && space.formally_disjoint_true(*k, i)) return *k;
    }
    return std::nullopt;
}

Code escape_closed_ball(const MetricSpace& space, const ComputablePoint& x, const Code& i) {
    for (Fuel fuel = 64;; fuel *= 2)
        if (auto r = try_escape_closed_ball(space, x, i, fuel)) return *r;
}

std::optional<Code> try_join_balls(const MetricSpace& space, const Code& i, const Code& j,
                                   Fuel fuel) {
    // Center at alpha_0, scan radius indices; a large enough radius always
    // exists, so fixing the center keeps the output canonical.
    for (Fuel v = 0; v < fuel; ++v) {
        Code k = pair_code(Code(0), Code(v));
        if (space.formally_contained_true(i, k) && space.formally_contained_true(j, k)) return k;
    }
    return std::nullopt;
}

Code join_balls(const MetricSpace& space, const Code& i, const Code& j) {
    for (Fuel fuel = 64;; fuel *= 2)
        if (auto r = try_join_balls(space, i, j, fuel)) return *r;
}

Code far_ball(const MetricSpace& space, const Code& i) {
    if (!space.unbounded()) throw std::invalid_argument("far_ball: space must be unbounded");
    Ball b = space.ball(i);
    Point shifted = b.center;
    shifted[0] += 3 * b.radius;
    Code j = space.ball_index(shifted, b.radius);
    if (!space.formally_disjoint_true(i, j)) throw std::logic_error("far_ball: certificate failed");
    return j;
}

}  // namespace ctop
