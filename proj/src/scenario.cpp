#include "ctop/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <map>
#include <stdexcept>

namespace ctop {

namespace {

Code rat_floor(const Rat& q) {
    Code n = rat_num(q), d = rat_den(q);
    if (n >= 0) return n / d;
    return -((-n + d - 1) / d);
}

struct GridSpec {
    int tier;  // cells of size 2^-tier
    std::optional<std::pair<Point, Point>> window;
    std::optional<std::pair<Point, Point>> exclude;  // skip cells inside this box
};

// Cell centers of the tier grid meeting any of the parts (exact).
std::vector<Point> grid_cells(int dim, const std::vector<Shape>& parts, const GridSpec& spec,
                              std::size_t scan_cap = 60000) {
    Rat h = pow2(-spec.tier);
    Point lo(dim), hi(dim);
    bool first = true;
    if (spec.window) {
        lo = spec.window->first;
        hi = spec.window->second;
        first = false;
    } else {
        for (const Shape& s : parts) {
            auto [slo, shi] = shape_bounds(s);
            for (int k = 0; k < dim; ++k) {
                if (first || slo[k] < lo[k]) lo[k] = slo[k];
                if (first || shi[k] > hi[k]) hi[k] = shi[k];
            }
            first = false;
        }
        if (first) return {};
    }
    std::vector<Code> ilo(dim), ihi(dim);
    std::size_t count = 1;
    for (int k = 0; k < dim; ++k) {
        ilo[k] = rat_floor(lo[k] / h) - 1;
        ihi[k] = rat_floor(hi[k] / h) + 1;
        Code width = ihi[k] - ilo[k] + 1;
        if (width > Code(scan_cap)) return {};
        count *= static_cast<std::size_t>(width);
        if (count > scan_cap) return {};
    }
    std::vector<Point> out;
    std::vector<Code> idx = ilo;
    while (true) {
        Point clo(dim), chi(dim), center(dim);
        for (int k = 0; k < dim; ++k) {
            clo[k] = Rat(idx[k]) * h;
            chi[k] = Rat(idx[k] + 1) * h;
            center[k] = Rat(2 * idx[k] + 1) * h / 2;
        }
        bool skip = false;
        if (spec.exclude) {
            skip = true;
            for (int k = 0; k < dim; ++k)
                if (!(clo[k] >= spec.exclude->first[k] && chi[k] <= spec.exclude->second[k]))
                    skip = false;
        }
        if (!skip) {
            if (spec.window) {
                bool inter = true;
                for (int k = 0; k < dim; ++k)
                    if (chi[k] < spec.window->first[k] || clo[k] > spec.window->second[k])
                        inter = false;
                if (!inter) skip = true;
            }
        }
        if (!skip) {
            for (const Shape& s : parts)
                if (shape_meets_box(s, clo, chi, false)) {
                    out.push_back(center);
                    break;
                }
        }
        int k = 0;
        while (k < dim) {
            if (idx[k] < ihi[k]) {
                ++idx[k];
                break;
            }
            idx[k] = ilo[k];
            ++k;
        }
        if (k == dim) break;
    }
    return out;
}

std::vector<Code> cells_to_balls(const MetricSpace& space, const std::vector<Point>& centers,
                                 int tier) {
    Rat h = pow2(-tier);
    std::vector<Code> out;
    out.reserve(centers.size());
    for (const Point& c : centers) out.push_back(space.ball_index(c, h));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::pair<Point, Point> box_around(const Point& c, const Rat& half) {
    Point lo(c.size()), hi(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        lo[k] = c[k] - half;
        hi[k] = c[k] + half;
    }
    return {lo, hi};
}

// The canonical element-list cover kernel shared by base and slice streams.
class CoverKernel {
  public:
    CoverKernel(MetricSpace space, std::vector<Shape> parts, StreamOptions opts)
        : space_(std::move(space)), parts_(std::move(parts)), opts_(opts) {}

    // Configuration classes interleave fairly: param p advances within each.
    //   class 0: whole-ball (p = 0) and uniform tiers (p >= 1)
    //   class k in 1..window_levels: telescoping windows of depth k
    std::optional<std::vector<Code>> config(std::uint64_t a) const {
        int classes = 1 + opts_.window_levels;
        int cls = static_cast<int>(a % classes);
        std::uint64_t p = a / classes;
        if (cls == 0) {
            if (p == 0) return whole_cover();
            if (p <= static_cast<std::uint64_t>(opts_.plain_tiers))
                return uniform(opts_.coarsest_tier + static_cast<int>(p) - 1);
            return std::nullopt;
        }
        return window_cover(cls, p);
    }

    bool certify(const Code& j, int depth) const {
        FiniteSet elems = finset_decode(j);
        std::vector<Code> balls(elems.begin(), elems.end());
        // cheap rejection: a handful of shape sample points must be covered
        for (const Point& p : sample_points()) {
            bool inside = false;
            for (const Code& b : balls)
                if (space_.point_in_ball(p, b)) {
                    inside = true;
                    break;
                }
            if (!inside) return false;
        }
        for (const Shape& s : parts_)
            if (!covers_shape(space_, s, balls, depth)) return false;
        return true;
    }

    const MetricSpace& space() const { return space_; }

  private:
    std::optional<std::vector<Code>> whole_cover() const {
        Point lo(space_.dim()), hi(space_.dim());
        bool first = true;
        for (const Shape& s : parts_) {
            auto [slo, shi] = shape_bounds(s);
            for (int k = 0; k < space_.dim(); ++k) {
                if (first || slo[k] < lo[k]) lo[k] = slo[k];
                if (first || shi[k] > hi[k]) hi[k] = shi[k];
            }
            first = false;
        }
        if (first) return std::nullopt;
        Point center(space_.dim());
        Rat r(1);
        for (int k = 0; k < space_.dim(); ++k) {
            center[k] = Rat(rat_floor((lo[k] + hi[k]) / 2));
            Rat reach = std::max(Rat(center[k] - lo[k]), Rat(hi[k] - center[k])) + 1;
            if (reach > r) r = reach;
        }
        return std::vector<Code>{space_.ball_index(center, r)};
    }

    std::optional<std::vector<Code>> uniform(int tier) const {
        auto cells = grid_cells(space_.dim(), parts_, GridSpec{tier, std::nullopt, std::nullopt});
        if (cells.empty()) return std::nullopt;
        return cells_to_balls(space_, cells, tier);
    }

    const std::vector<Point>& tier_cells(int tier) const {
        std::scoped_lock lock(mu_);
        auto it = centers_.find(tier);
        if (it != centers_.end()) return it->second;
        auto cells =
            grid_cells(space_.dim(), parts_, GridSpec{tier, std::nullopt, std::nullopt});
        return centers_.emplace(tier, std::move(cells)).first->second;
    }

    const std::vector<Point>& level_centers(int level) const {
        return tier_cells(opts_.coarsest_tier + 2 * level);
    }

    std::optional<std::vector<Code>> window_cover(int level, std::uint64_t rank) const {
        const auto& centers = level_centers(level);
        if (rank >= centers.size()) return std::nullopt;
        const Point& w = centers[rank];
        std::vector<Code> out;
        for (int k = 0; k <= level; ++k) {
            int tier = opts_.coarsest_tier + 2 * k;
            Rat hk = pow2(-tier);
            std::optional<std::pair<Point, Point>> exclude;
            if (k < level) {
                Rat hn = pow2(-(tier + 2));
                exclude = box_around(w, 4 * hn - hn);
            }
            std::vector<Point> cells;
            if (k == 0) {
                for (const Point& c : tier_cells(tier)) {
                    bool inside = exclude.has_value();
                    if (exclude)
                        for (std::size_t kk = 0; kk < c.size(); ++kk)
                            if (!(c[kk] - hk / 2 >= exclude->first[kk] &&
                                  c[kk] + hk / 2 <= exclude->second[kk]))
                                inside = false;
                    if (!inside) cells.push_back(c);
                }
            } else {
                GridSpec spec{tier, box_around(w, 4 * hk), exclude};
                cells = grid_cells(space_.dim(), parts_, spec);
            }
            auto balls = cells_to_balls(space_, cells, tier);
            out.insert(out.end(), balls.begin(), balls.end());
        }
        if (out.empty()) return std::nullopt;
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    const std::vector<Point>& sample_points() const {
        std::scoped_lock lock(sample_mu_);
        if (samples_.empty()) {
            for (const Shape& sh : parts_) {
                samples_.push_back(shape_sample_point(sh));
                if (const auto* seg = std::get_if<SegmentShape>(&sh)) {
                    samples_.push_back(seg->a);
                    samples_.push_back(seg->b);
                } else if (const auto* box = std::get_if<BoxShape>(&sh)) {
                    samples_.push_back(box->lo);
                    samples_.push_back(box->hi);
                } else if (const auto* c = std::get_if<CircleShape>(&sh)) {
                    for (int q = 0; q < 4; ++q) {
                        Point p = c->center;
                        p[q % 2] += (q < 2 ? c->radius : -c->radius);
                        samples_.push_back(p);
                    }
                } else if (const auto* a = std::get_if<ArcShape>(&sh)) {
                    for (const Rat& u : {a->u_lo, a->u_hi, Rat((a->u_lo + a->u_hi) / 2)}) {
                        Rat x = (1 - u * u) / (1 + u * u), yv = 2 * u / (1 + u * u);
                        if (a->mirror) x = -x;
                        samples_.push_back(
                            Point{a->center[0] + a->radius * x, a->center[1] + a->radius * yv});
                    }
                } else if (const auto* pl = std::get_if<PolylineShape>(&sh)) {
                    for (const Point& p : pl->pts) samples_.push_back(p);
                }
            }
        }
        return samples_;
    }

    MetricSpace space_;
    std::vector<Shape> parts_;
    StreamOptions opts_;
    mutable std::vector<Point> samples_;
    mutable std::mutex sample_mu_;
    mutable std::map<int, std::vector<Point>> centers_;
    mutable std::mutex mu_;
};

}  // namespace

Emitter<std::vector<Code>> element_cover_stream(const MetricSpace& space, const ShapeSet& set,
                                                StreamOptions opts) {
    for (const Shape& s : set.parts)
        if (!shape_is_compact(s))
            throw std::invalid_argument("element_cover_stream: compact shapes only");
    auto kernel = std::make_shared<CoverKernel>(space, set.parts, opts);
    return memoized<std::vector<Code>>([kernel](std::uint64_t step)
                                           -> std::optional<std::vector<Code>> {
        if (step % 32 == 31) {
            // sweep lane: arbitrary codes certified by subdivision
            auto [j64, depth] = unpair64(step / 32);
            Code j(j64);
            if (kernel->certify(j, 4 + static_cast<int>(depth % 9))) {
                FiniteSet e = finset_decode(j);
                return std::vector<Code>(e.begin(), e.end());
            }
            return std::nullopt;
        }
        std::uint64_t a = (step / 32) * 31 + (step % 32);
        return kernel->config(a);
    });
}

Emitter<Code> cover_stream(const MetricSpace& space, const ShapeSet& set, StreamOptions opts) {
    auto kernel = std::make_shared<CoverKernel>(space, set.parts, opts);
    int cap = opts.max_code_elements;
    return memoized<Code>([kernel, cap](std::uint64_t step) -> std::optional<Code> {
        if (step % 32 == 31) {
            auto [j64, depth] = unpair64(step / 32);
            Code j(j64);
            if (kernel->certify(j, 4 + static_cast<int>(depth % 9))) return j;
            return std::nullopt;
        }
        std::uint64_t a = (step / 32) * 31 + (step % 32);
        auto elems = kernel->config(a);
        if (!elems || elems->size() > static_cast<std::size_t>(cap)) return std::nullopt;
        return fold_elements(*elems);
    });
}

Emitter<Code> touch_stream(const MetricSpace& space, const ShapeSet& set) {
    auto parts = set.parts;
    return [space, parts](std::uint64_t step) -> std::optional<Code> {
        Code i(step);
        for (const Shape& s : parts)
            if (shape_meets_ball(space, s, i)) return i;
        return std::nullopt;
    };
}

SemicompactSet semicompact_of(const MetricSpace& space, const ShapeSet& set, StreamOptions opts) {
    return SemicompactSet{cover_stream(space, set, opts), element_cover_stream(space, set, opts)};
}

LocatedCompact located_of(const MetricSpace& space, const ShapeSet& set, StreamOptions opts) {
    return LocatedCompact{cover_stream(space, set, opts), touch_stream(space, set),
                          element_cover_stream(space, set, opts)};
}

ComputableSet computable_of(const MetricSpace& space, const ShapeSet& set, StreamOptions opts) {
    return ComputableSet{cover_stream(space, set, opts), touch_stream(space, set),
                         element_cover_stream(space, set, opts)};
}

SemiClosedSet semiclosed_of(const MetricSpace& space, const ShapeSet& set, StreamOptions opts) {
    auto parts = std::make_shared<std::vector<Shape>>(set.parts);
    auto kernels = std::make_shared<std::map<std::uint64_t, std::shared_ptr<CoverKernel>>>();
    auto mu = std::make_shared<std::mutex>();
    MetricSpace sp = space;
    StreamOptions o = opts;

    auto slice_kernel = [parts, kernels, mu, sp, o](std::uint64_t i64)
        -> std::shared_ptr<CoverKernel> {
        {
            std::scoped_lock lock(*mu);
            if (auto it = kernels->find(i64); it != kernels->end()) return it->second;
        }
        Code i(i64);
        Ball b = sp.ball(i);
        auto [lo, hi] = box_around(b.center, b.radius);
        std::vector<Shape> sliced;
        for (const Shape& s : *parts)
            for (Shape& piece : clip_shape(s, lo, hi)) sliced.push_back(std::move(piece));
        StreamOptions so = o;
        auto k = std::make_shared<CoverKernel>(sp, std::move(sliced), so);
        std::scoped_lock lock(*mu);
        return kernels->emplace(i64, std::move(k)).first->second;
    };

    // step -> (slice ball i, inner step): the inner step advances nearly
    // linearly while slice indices cycle, with a full diagonal every fourth
    // step for completeness over all pairs
    auto split_step = [](std::uint64_t step) {
        std::uint64_t r = step % 4;
        if (r < 3) {
            std::uint64_t lin = (step / 4) * 3 + r;
            return std::make_pair(lin % 64, lin / 64);
        }
        return unpair64(step / 4);
    };

    MetricSpace space2 = space;
    Emitter<std::pair<Code, std::vector<Code>>> elem_pairs =
        memoized<std::pair<Code, std::vector<Code>>>(
            [slice_kernel, split_step, space2](std::uint64_t step)
                -> std::optional<std::pair<Code, std::vector<Code>>> {
                auto [i64, inner] = split_step(step);
                auto kernel = slice_kernel(i64);
                // empty slice: any union works; certify the far-ball one
                auto elems = kernel->config(inner);
                if (!elems) {
                    if (inner == 0) {
                        Code far = far_ball(space2, Code(i64));
                        return std::make_pair(Code(i64), std::vector<Code>{far});
                    }
                    return std::nullopt;
                }
                return std::make_pair(Code(i64), *elems);
            });

    int cap = opts.max_code_elements;
    Emitter<std::pair<Code, Code>> pairs = [elem_pairs, cap](std::uint64_t step)
        -> std::optional<std::pair<Code, Code>> {
        auto v = elem_pairs(step);
        if (!v || v->second.size() > static_cast<std::size_t>(cap)) return std::nullopt;
        return std::make_pair(v->first, fold_elements(v->second));
    };
    return SemiClosedSet{pairs, elem_pairs};
}

// ---------------------------------------------------------------------------
// Pseudocompactification streams.

Emitter<std::vector<Code>> yelement_cover_stream(const PseudoSpace& y, const YShapeSet& set,
                                                 StreamOptions opts) {
    MetricSpace space = y.base;
    bool all_compact = true;
    for (const Shape& s : set.parts)
        if (!shape_is_compact(s)) all_compact = false;
    bool needs_cut = set.with_infinity || !all_compact;

    auto parts = std::make_shared<std::vector<Shape>>(set.parts);
    StreamOptions o = opts;
    auto kernels = std::make_shared<std::map<int, std::shared_ptr<CoverKernel>>>();
    auto plain = std::make_shared<std::shared_ptr<CoverKernel>>();
    auto mu = std::make_shared<std::mutex>();

    auto cut_kernel = [parts, kernels, mu, space, o](int ridx) -> std::shared_ptr<CoverKernel> {
        {
            std::scoped_lock lock(*mu);
            if (auto it = kernels->find(ridx); it != kernels->end()) return it->second;
        }
        Rat radius = pow2(ridx + 1);
        Point origin(space.dim(), Rat(0));
        auto [lo, hi] = box_around(origin, radius);
        std::vector<Shape> clipped;
        for (const Shape& s : *parts)
            for (Shape& piece : clip_shape(s, lo, hi)) clipped.push_back(std::move(piece));
        auto k = std::make_shared<CoverKernel>(space, std::move(clipped), o);
        std::scoped_lock lock(*mu);
        return kernels->emplace(ridx, std::move(k)).first->second;
    };

    return memoized<std::vector<Code>>([=](std::uint64_t step)
                                           -> std::optional<std::vector<Code>> {
        if (!needs_cut) {
            // compact, no ∞: even images of base covers; odd padding added on
            // alternating steps (supersets of covers stay covers)
            std::shared_ptr<CoverKernel> k;
            {
                std::scoped_lock lock(*mu);
                if (!*plain) *plain = std::make_shared<CoverKernel>(space, *parts, o);
                k = *plain;
            }
            auto elems = k->config(step / 2);
            if (!elems) return std::nullopt;
            std::vector<Code> out;
            for (const Code& p : *elems) out.push_back(2 * p);
            if (step % 2 == 1) {
                Point origin(space.dim(), Rat(0));
                Code m = space.ball_index(origin, pow2(static_cast<int>(step / 2 % 12) + 1));
                out.push_back(2 * m + 1);
            }
            return out;
        }
        std::uint64_t r4 = step % 4;
        std::uint64_t ridx64, inner;
        if (r4 < 3) {
            std::uint64_t lin = (step / 4) * 3 + r4;
            ridx64 = lin % 8;
            inner = lin / 8;
        } else {
            auto [a, b] = unpair64(step / 4);
            ridx64 = a;
            inner = b;
        }
        int ridx = static_cast<int>(ridx64 % 16);
        auto kernel = cut_kernel(ridx);
        auto elems = kernel->config(inner);
        Point origin(space.dim(), Rat(0));
        Code m = space.ball_index(origin, pow2(ridx + 1));
        std::vector<Code> out;
        if (elems)
            for (const Code& p : *elems) out.push_back(2 * p);
        else if (inner != 0)
            return std::nullopt;
        out.push_back(2 * m + 1);
        return out;
    });
}

Emitter<Code> ycover_stream(const PseudoSpace& y, const YShapeSet& set, StreamOptions opts) {
    auto elems = yelement_cover_stream(y, set, opts);
    int cap = opts.max_code_elements;
    return [elems, cap](std::uint64_t step) -> std::optional<Code> {
        auto v = elems(step);
        if (!v || v->size() > static_cast<std::size_t>(cap)) return std::nullopt;
        return fold_elements(*v);
    };
}

Emitter<Code> ytouch_stream(const PseudoSpace& y, const YShapeSet& set) {
    MetricSpace space = y.base;
    auto parts = set.parts;
    bool with_inf = set.with_infinity;
    return [space, parts, with_inf](std::uint64_t step) -> std::optional<Code> {
        Code i(step);
        if (i % 2 == 0) {
            Code b = i / 2;
            for (const Shape& s : parts)
                if (shape_meets_ball(space, s, b)) return i;
            return std::nullopt;
        }
        if (with_inf) return i;
        Code m = (i - 1) / 2;
        for (const Shape& s : parts)
            if (!closed_ball_contains_shape(space, s, m)) return i;
        return std::nullopt;
    };
}

SemicompactSet ysemicompact_of(const PseudoSpace& y, const YShapeSet& set, StreamOptions opts) {
    return SemicompactSet{ycover_stream(y, set, opts), yelement_cover_stream(y, set, opts)};
}

LocatedCompact ylocated_of(const PseudoSpace& y, const YShapeSet& set, StreamOptions opts) {
    return LocatedCompact{ycover_stream(y, set, opts), ytouch_stream(y, set),
                          yelement_cover_stream(y, set, opts)};
}

// ---------------------------------------------------------------------------
// Chart assembly.

ChartPieces pieces_of(const MetricSpace& space, const ChartShapes& cs, StreamOptions opts) {
    ChartPieces p;
    p.dimension = cs.dimension;
    p.exterior = semicompact_of(space, cs.exterior, opts);
    p.big = located_of(space, cs.big, opts);
    for (const auto& s : cs.side_c) p.side_c.push_back(located_of(space, s, opts));
    for (const auto& s : cs.side_b) p.side_b.push_back(located_of(space, s, opts));
    for (const auto& s : cs.side_d) p.side_d.push_back(located_of(space, s, opts));
    for (const auto& s : cs.side_a) p.side_a.push_back(located_of(space, s, opts));
    return p;
}

PipelineChart ypieces_of(const PseudoSpace& y, const YChartShapes& cs, StreamOptions opts) {
    PipelineChart pc;
    pc.kind = cs.kind;
    pc.pieces.dimension = cs.dimension;
    pc.pieces.exterior = ysemicompact_of(y, cs.exterior, opts);
    pc.pieces.big = ylocated_of(y, cs.big, opts);
    for (const auto& s : cs.side_c) pc.pieces.side_c.push_back(ylocated_of(y, s, opts));
    for (const auto& s : cs.side_b) pc.pieces.side_b.push_back(ylocated_of(y, s, opts));
    for (const auto& s : cs.side_d) pc.pieces.side_d.push_back(ylocated_of(y, s, opts));
    for (const auto& s : cs.side_a) pc.pieces.side_a.push_back(ylocated_of(y, s, opts));
    return pc;
}

// ---------------------------------------------------------------------------
// Built-in scenarios.

namespace {

Rat weier_px(const Rat& u) { return (1 - u * u) / (1 + u * u); }
Rat weier_py(const Rat& u) { return 2 * u / (1 + u * u); }

Shape warc(const Rat& ulo, const Rat& uhi) {
    return ArcShape{{Rat(0), Rat(0)}, Rat(1), false, ulo, uhi};
}
Shape marc(const Rat& vlo, const Rat& vhi) {
    return ArcShape{{Rat(0), Rat(0)}, Rat(1), true, vlo, vhi};
}
Shape wpoint(const Rat& u) {
    Point p{weier_px(u), weier_py(u)};
    return BoxShape{p, p};
}
Shape mpoint(const Rat& v) {
    Point p{-weier_px(v), weier_py(v)};
    return BoxShape{p, p};
}

Shape seg1(const Rat& a, const Rat& b) { return SegmentShape{{a}, {b}}; }
Shape pt1(const Rat& a) { return SegmentShape{{a}, {a}}; }
Shape seg2x(const Rat& a, const Rat& b) { return SegmentShape{{a, Rat(0)}, {b, Rat(0)}}; }
Shape pt2(const Rat& x, const Rat& y) { return BoxShape{{x, y}, {x, y}}; }

ChartShapes circle_chart_w(bool mirror) {
    // the half-circle chart through (1,0) (or (-1,0) in the mirror
    // parametrization): cube images are parameter intervals
    auto arc = [mirror](const Rat& a, const Rat& b) { return mirror ? marc(a, b) : warc(a, b); };
    auto pnt = [mirror](const Rat& u) { return mirror ? mpoint(u) : wpoint(u); };
    ChartShapes cs;
    cs.kind = ChartKind::interior;
    cs.dimension = 1;
    cs.core = ShapeSet{{arc(Rat(-1, 2), Rat(1, 2))}};
    cs.big = ShapeSet{{arc(-1, 1)}};
    cs.exterior = ShapeSet{{mirror ? warc(Rat(-1, 2), Rat(1, 2)) : marc(Rat(-1, 2), Rat(1, 2))}};
    cs.side_c = {ShapeSet{{arc(-2, Rat(1, 2))}}};
    cs.side_b = {ShapeSet{{pnt(1)}}};
    cs.side_d = {ShapeSet{{arc(Rat(-1, 2), 2)}}};
    cs.side_a = {ShapeSet{{pnt(-1)}}};
    return cs;
}

ChartShapes circle_chart_pole(bool bottom) {
    // chart around (0,1) (or (0,-1)): parameter-interval images chosen so the
    // core spans past both neighboring half-circle cores
    auto arc = [bottom](Rat a, Rat b) { return bottom ? warc(-b, -a) : warc(a, b); };
    auto pnt = [bottom](Rat u) { return bottom ? wpoint(-u) : wpoint(u); };
    ChartShapes cs;
    cs.kind = ChartKind::interior;
    cs.dimension = 1;
    cs.core = ShapeSet{{arc(Rat(1, 3), Rat(3))}};
    cs.big = ShapeSet{{arc(Rat(1, 4), Rat(4))}};
    cs.side_c = {ShapeSet{{arc(Rat(1, 5), Rat(3))}}};
    cs.side_b = {ShapeSet{{pnt(Rat(4))}}};
    cs.side_d = {ShapeSet{{arc(Rat(1, 3), Rat(5))}}};
    cs.side_a = {ShapeSet{{pnt(Rat(1, 4))}}};
    if (!bottom)
        cs.exterior = ShapeSet{{warc(Rat(-1), Rat(1, 5)), marc(Rat(-1), Rat(1, 5))}};
    else
        cs.exterior = ShapeSet{{warc(Rat(-1, 5), Rat(1)), marc(Rat(-1, 5), Rat(1))}};
    return cs;
}

}  // namespace

Scenario circle_scenario() {
    Scenario sc;
    sc.name = "circle";
    sc.space = MetricSpace(2, MetricKind::linf_exact);
    sc.set = ShapeSet{{Shape{CircleShape{{Rat(0), Rat(0)}, Rat(1)}}}};
    sc.compact = true;
    sc.charts = {circle_chart_w(false), circle_chart_w(true), circle_chart_pole(false),
                 circle_chart_pole(true)};
    sc.stream_opts.coarsest_tier = 0;
    sc.stream_opts.plain_tiers = 4;
    sc.stream_opts.window_levels = 3;
    sc.budgets.omega_fuel = 1u << 14;
    sc.budgets.approx_fuel = 1u << 19;
    return sc;
}

Scenario segment_scenario() {
    Scenario sc;
    sc.name = "segment";
    sc.space = MetricSpace(1, MetricKind::linf_exact);
    sc.set = ShapeSet{{seg1(0, 1)}};
    sc.compact = true;
    sc.boundary = ShapeSet{{pt1(0), pt1(1)}};

    ChartShapes mid;
    mid.kind = ChartKind::interior;
    mid.dimension = 1;
    mid.exterior = ShapeSet{{seg1(0, Rat(1, 4)), seg1(Rat(3, 4), 1)}};
    mid.big = ShapeSet{{seg1(Rat(3, 8), Rat(5, 8))}};
    mid.core = ShapeSet{{seg1(Rat(7, 16), Rat(9, 16))}};
    mid.side_c = {ShapeSet{{seg1(Rat(1, 4), Rat(9, 16))}}};
    mid.side_b = {ShapeSet{{pt1(Rat(5, 8))}}};
    mid.side_d = {ShapeSet{{seg1(Rat(7, 16), Rat(3, 4))}}};
    mid.side_a = {ShapeSet{{pt1(Rat(3, 8))}}};

    ChartShapes left;
    left.kind = ChartKind::boundary;
    left.dimension = 1;
    left.exterior = ShapeSet{{seg1(Rat(5, 16), 1)}};
    left.big = ShapeSet{{seg1(0, Rat(1, 4))}};
    left.core = ShapeSet{{seg1(0, Rat(3, 16))}};
    left.side_c = {ShapeSet{{seg1(0, Rat(3, 16))}}};
    left.side_b = {ShapeSet{{pt1(Rat(1, 4))}}};
    // boundary charts in dimension 1 have no D/A sides

    ChartShapes right;
    right.kind = ChartKind::boundary;
    right.dimension = 1;
    right.exterior = ShapeSet{{seg1(0, Rat(11, 16))}};
    right.big = ShapeSet{{seg1(Rat(3, 4), 1)}};
    right.core = ShapeSet{{seg1(Rat(13, 16), 1)}};
    right.side_c = {ShapeSet{{seg1(Rat(13, 16), 1)}}};
    right.side_b = {ShapeSet{{pt1(Rat(3, 4))}}};

    sc.charts = {mid, left, right};
    sc.stream_opts.coarsest_tier = 1;
    sc.stream_opts.plain_tiers = 5;
    sc.stream_opts.window_levels = 3;
    sc.budgets.approx_fuel = 1u << 19;
    return sc;
}

Scenario square_scenario() {
    Scenario sc;
    sc.name = "square";
    sc.space = MetricSpace(2, MetricKind::linf_exact);
    sc.set = ShapeSet{{Shape{BoxShape{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}}}};
    sc.compact = true;
    sc.boundary = ShapeSet{{Shape{PolylineShape{{{Rat(0), Rat(0)},
                                                 {Rat(1), Rat(0)},
                                                 {Rat(1), Rat(1)},
                                                 {Rat(0), Rat(1)},
                                                 {Rat(0), Rat(0)}}}}}};

    // boundary chart (n = 2) at the bottom edge midpoint, affine images
    ChartShapes edge;
    edge.kind = ChartKind::boundary;
    edge.dimension = 2;
    auto bx = [](Rat x0, Rat y0, Rat x1, Rat y1) {
        return Shape{BoxShape{{x0, y0}, {x1, y1}}};
    };
    edge.exterior = ShapeSet{{bx(0, 0, Rat(1, 4), 1), bx(Rat(3, 4), 0, 1, 1),
                              bx(Rat(1, 4), Rat(1, 4), Rat(3, 4), 1)}};
    edge.big = ShapeSet{{bx(Rat(3, 8), 0, Rat(5, 8), Rat(1, 8))}};
    edge.core = ShapeSet{{bx(Rat(7, 16), 0, Rat(9, 16), Rat(1, 16))}};
    // C_1, B_1 along x; C_2 (= C_n), B_2 along y
    edge.side_c = {ShapeSet{{bx(Rat(1, 4), 0, Rat(9, 16), Rat(1, 4))}},
                   ShapeSet{{bx(Rat(1, 4), 0, Rat(3, 4), Rat(1, 16))}}};
    edge.side_b = {ShapeSet{{Shape{SegmentShape{{Rat(5, 8), Rat(0)}, {Rat(5, 8), Rat(1, 8)}}}}},
                   ShapeSet{{Shape{SegmentShape{{Rat(3, 8), Rat(1, 8)}, {Rat(5, 8), Rat(1, 8)}}}}}};
    edge.side_d = {ShapeSet{{bx(Rat(7, 16), 0, Rat(3, 4), Rat(1, 4))}}};
    edge.side_a = {ShapeSet{{Shape{SegmentShape{{Rat(3, 8), Rat(0)}, {Rat(3, 8), Rat(1, 8)}}}}}};
    sc.charts = {edge};
    sc.stream_opts.coarsest_tier = 2;
    sc.stream_opts.plain_tiers = 3;
    sc.stream_opts.window_levels = 2;
    return sc;
}

Scenario ray_scenario() {
    Scenario sc;
    sc.name = "ray";
    sc.space = MetricSpace(2, MetricKind::linf_exact);
    sc.set = ShapeSet{{Shape{RayShape{{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, Rat(0), std::nullopt}}}};
    sc.compact = false;
    sc.boundary = ShapeSet{{pt2(0, 0)}};
    sc.tail_is_halfspace = true;

    auto yseg = [](Rat a, Rat b) { return YShapeSet{{seg2x(a, b)}, false}; };
    auto ypt = [](Rat x) { return YShapeSet{{pt2(x, 0)}, false}; };
    auto ytail = [](Rat from) {
        return YShapeSet{{Shape{RayShape{{from, Rat(0)}, {Rat(1), Rat(0)}, Rat(0), std::nullopt}}},
                         true};
    };

    // boundary chart at the base endpoint (0,0)
    YChartShapes origin;
    origin.kind = ChartKind::boundary;
    origin.dimension = 1;
    origin.exterior = ytail(Rat(5, 2));
    origin.big = yseg(0, 2);
    origin.core = yseg(0, 1);
    origin.side_c = {yseg(0, 1)};
    origin.side_b = {ypt(2)};

    // boundary chart at infinity
    YChartShapes inf;
    inf.kind = ChartKind::boundary;
    inf.dimension = 1;
    inf.exterior = YShapeSet{{seg2x(0, 4)}, false};
    inf.big = ytail(8);
    inf.core = ytail(16);
    inf.side_c = {ytail(16)};
    inf.side_b = {ypt(8)};

    // interior chart covering the middle
    YChartShapes middle;
    middle.kind = ChartKind::interior;
    middle.dimension = 1;
    middle.exterior = YShapeSet{{seg2x(0, Rat(1, 4)),
                                 Shape{RayShape{{Rat(24), Rat(0)}, {Rat(1), Rat(0)}, Rat(0),
                                                std::nullopt}}},
                                true};
    middle.big = yseg(Rat(1, 2), 20);
    middle.core = yseg(Rat(3, 4), 18);
    middle.side_c = {yseg(Rat(1, 4), 18)};
    middle.side_b = {ypt(20)};
    middle.side_d = {yseg(Rat(3, 4), 24)};
    middle.side_a = {ypt(Rat(1, 2))};

    sc.ycharts = {origin, inf, middle};
    sc.stream_opts.coarsest_tier = -2;
    sc.stream_opts.plain_tiers = 5;
    sc.stream_opts.window_levels = 3;
    sc.budgets.pipeline_fuel = 1u << 15;
    return sc;
}

Scenario box_scenario() {
    Scenario sc;
    sc.name = "box";
    sc.space = MetricSpace(2, MetricKind::linf_exact);
    sc.set = ShapeSet{{Shape{BoxShape{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}}}};
    sc.compact = true;
    sc.stream_opts.coarsest_tier = 0;
    sc.stream_opts.plain_tiers = 3;
    sc.stream_opts.window_levels = 2;
    return sc;
}

Scenario strip_scenario() {
    Scenario sc;
    sc.name = "strip";
    sc.space = MetricSpace(2, MetricKind::linf_exact);
    sc.set = ShapeSet{{Shape{HalfStripShape{{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, 1}}}};
    sc.compact = false;
    sc.boundary = ShapeSet{{Shape{SegmentShape{{Rat(0), Rat(0)}, {Rat(1), Rat(0)}}},
                            Shape{RayShape{{Rat(0), Rat(0)}, {Rat(0), Rat(1)}, Rat(0), std::nullopt}},
                            Shape{RayShape{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, Rat(0), std::nullopt}}}};
    sc.tail_is_halfspace = true;
    // stretch demo; the pipeline runs with the noncompact boundary lifted
    // through its slice representation
    sc.stream_opts.coarsest_tier = -1;
    sc.stream_opts.plain_tiers = 4;
    sc.stream_opts.window_levels = 2;
    return sc;
}

// ---------------------------------------------------------------------------
// Scenario files.

namespace {

Rat yaml_rat(const YAML::Node& n, const std::string& path) {
    if (!n || !n.IsScalar())
        throw std::invalid_argument(path + ": expected a rational scalar (\"p/q\")");
    try {
        return rat_from_string(n.as<std::string>());
    } catch (const std::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(path);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("scenario: cannot parse ") + path + ": " +
                                    e.what());
    }
    if (!root["family"]) throw std::invalid_argument("scenario.family: missing");
    std::string family = root["family"].as<std::string>();
    Scenario sc;
    if (family == "circle")
        sc = circle_scenario();
    else if (family == "segment")
        sc = segment_scenario();
    else if (family == "square")
        sc = square_scenario();
    else if (family == "ray")
        sc = ray_scenario();
    else if (family == "box")
        sc = box_scenario();
    else if (family == "strip")
        sc = strip_scenario();
    else
        throw std::invalid_argument("scenario.family: unknown family '" + family + "'");

    if (auto sp = root["space"]) {
        if (auto d = sp["dim"]) {
            if (d.as<int>() != sc.space.dim())
                throw std::invalid_argument("scenario.space.dim: family fixes dim " +
                                            std::to_string(sc.space.dim()));
        }
        if (auto m = sp["metric"]) {
            std::string v = m.as<std::string>();
            if (v != "linf_exact" && v != "l2_interval")
                throw std::invalid_argument("scenario.space.metric: unknown metric '" + v + "'");
            if ((v == "linf_exact") != (sc.space.kind() == MetricKind::linf_exact))
                throw std::invalid_argument("scenario.space.metric: family fixes the metric");
        }
    }
    if (auto set = root["set"]) {
        // the family fixes the shape; accept matching redeclarations only
        if (auto sh = set["shape"]) {
            std::string kind = sh["kind"] ? sh["kind"].as<std::string>() : "";
            if (kind == "circle" && family == "circle") {
                Rat r = yaml_rat(sh["radius"], "scenario.set.shape.radius");
                if (r != Rat(1))
                    throw std::invalid_argument(
                        "scenario.set.shape.radius: the circle family is the unit circle");
            }
        }
    }
    if (auto b = root["budgets"]) {
        auto get = [&](const char* key, Fuel& out) {
            if (auto n = b[key]) {
                long long v = n.as<long long>();
                if (v <= 0) throw std::invalid_argument(std::string("scenario.budgets.") + key +
                                                        ": must be positive");
                out = static_cast<Fuel>(v);
            }
        };
        get("witness_fuel", sc.budgets.witness_fuel);
        get("omega_fuel", sc.budgets.omega_fuel);
        get("stream_fuel", sc.budgets.stream_fuel);
        get("approx_fuel", sc.budgets.approx_fuel);
        get("pipeline_fuel", sc.budgets.pipeline_fuel);
    }
    if (auto s = root["seed"]) sc.seed = s.as<std::uint64_t>();
    if (auto so = root["stream"]) {
        if (auto n = so["coarsest_tier"]) sc.stream_opts.coarsest_tier = n.as<int>();
        if (auto n = so["plain_tiers"]) sc.stream_opts.plain_tiers = n.as<int>();
        if (auto n = so["window_levels"]) sc.stream_opts.window_levels = n.as<int>();
        if (auto n = so["max_code_elements"]) sc.stream_opts.max_code_elements = n.as<int>();
    }
    return sc;
}

}  // namespace ctop
