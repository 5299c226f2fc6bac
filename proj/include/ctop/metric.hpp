#pragma once

#include "ctop/coding.hpp"
#include "ctop/semidecide.hpp"

#include <memory>
#include <optional>
#include <unordered_map>

namespace ctop {

enum class MetricKind { linf_exact, l2_interval };

struct Ball {
    Point center;
    Rat radius;
};

// A computable metric space over Q^n. The dense sequence runs through all
// rational tuples: each coordinate code decodes to zigzag(u)/(v+1) with
// (u, v) = unpair(code), and a dim-n point peels its coordinate codes the same
// way sequences do.
class MetricSpace {
  public:
    MetricSpace(int dim, MetricKind kind);

    int dim() const { return dim_; }
    MetricKind kind() const { return kind_; }
    bool unbounded() const { return true; }  // Q^n instances only

    Point dense_point(const Code& i) const;
    Code dense_index(const Point& p) const;  // right inverse of dense_point

    // Exact distance for linf; for l2 the exact squared distance is available
    // and dist_approx refines the root monotonically.
    Rat dist_linf(const Point& a, const Point& b) const;
    Rat dist_sq(const Point& a, const Point& b) const;
    Rat dist_approx(const Code& i, const Code& j, int precision_exp) const;

    Ball ball(const Code& i) const;  // center alpha_{tau1(i)}, radius q_{tau2(i)}
    Code ball_index(const Point& center, const Rat& radius) const;

    bool point_in_ball(const Point& x, const Code& i) const;          // open
    bool point_in_closed_ball(const Point& x, const Code& i) const;

    // d(center_i, center_j) > rho_i + rho_j, certified exactly.
    bool formally_disjoint_true(const Code& i, const Code& j) const;
    // d(center_i, center_j) + rho_i < rho_j.
    bool formally_contained_true(const Code& i, const Code& j) const;

  private:
    int dim_;
    MetricKind kind_;
    struct Cache;
    std::shared_ptr<Cache> cache_;
};

SemiDecision formally_disjoint(const MetricSpace& space, const Code& i, const Code& j, Fuel fuel);
SemiDecision formally_contained(const MetricSpace& space, const Code& i, const Code& j, Fuel fuel);

// A point given the way the effective theory represents it: an enumerator of
// the codes of all balls containing it.
struct ComputablePoint {
    Emitter<Code> balls;
};

// The canonical enumerator for an exact rational point.
ComputablePoint exact_point(const MetricSpace& space, Point x);

// Search results carry the codes plus the certificates already re-checked.
std::optional<std::pair<Code, Code>> try_separate_points(const MetricSpace& space,
                                                         const ComputablePoint& x,
                                                         const ComputablePoint& y, Fuel fuel);
std::pair<Code, Code> separate_points(const MetricSpace& space, const ComputablePoint& x,
                                      const ComputablePoint& y);

std::optional<Code> try_refine_common(const MetricSpace& space, const Code& i, const Code& j,
                                      const ComputablePoint& x, Fuel fuel);
Code refine_common(const MetricSpace& space, const Code& i, const Code& j,
                   const ComputablePoint& x);

std::optional<Code> try_escape_closed_ball(const MetricSpace& space, const ComputablePoint& x,
                                           const Code& i, Fuel fuel);
Code escape_closed_ball(const MetricSpace& space, const ComputablePoint& x, const Code& i);

std::optional<Code> try_join_balls(const MetricSpace& space, const Code& i, const Code& j,
                                   Fuel fuel);
Code join_balls(const MetricSpace& space, const Code& i, const Code& j);

// A ball formally disjoint from ball i (the unbounded-space translation map).
Code far_ball(const MetricSpace& space, const Code& i);

}  // namespace ctop
