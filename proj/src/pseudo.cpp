#include "ctop/pseudo.hpp"

#include <stdexcept>

namespace ctop {

namespace {

bool even(const Code& c) { return c % 2 == 0; }
Code half(const Code& c) { return c / 2; }
Code odd_part(const Code& c) { return (c - 1) / 2; }

std::vector<Code> evens_of(const FiniteSet& js) {
    std::vector<Code> out;
    for (const Code& i : js)
        if (even(i)) out.push_back(half(i));
    return out;
}

std::vector<Code> odds_of(const FiniteSet& js) {
    std::vector<Code> out;
    for (const Code& i : js)
        if (!even(i)) out.push_back(odd_part(i));
    return out;
}

}  // namespace

static SemiDecision gamma_relation_raw(const MetricSpace& base, const Code& i, const Code& j,
                                GammaKind which, Fuel fuel) {
    if (fuel == 0) return SemiDecision::no();
    bool ie = even(i), je = even(j);
    if (which == GammaKind::disjoint) {
        if (ie && je) return formally_disjoint(base, half(i), half(j), fuel);
        if (ie && !je) return formally_contained(base, half(i), odd_part(j), fuel);
        if (!ie && je) return formally_contained(base, half(j), odd_part(i), fuel);
        return SemiDecision::no();  // both contain ∞
    }
    if (ie && je) return formally_contained(base, half(i), half(j), fuel);
    if (ie && !je) return formally_disjoint(base, half(i), odd_part(j), fuel);
    if (!ie && !je) return formally_contained(base, odd_part(j), odd_part(i), fuel);
    return SemiDecision::no();  // odd basis sets never sit inside a ball
}

PseudoSpace make_pseudospace(const MetricSpace& base) {
    CTopSpace raw;
    raw.basis_tag = "pseudo-q" + std::to_string(base.dim());
    raw.C = [base](const Code& i, const Code& j, Fuel fuel) {
        return gamma_relation_raw(base, i, j, GammaKind::contains, fuel);
    };
    raw.D = [base](const Code& i, const Code& j, Fuel fuel) {
        return gamma_relation_raw(base, i, j, GammaKind::disjoint, fuel);
    };
    // Closure traits follow from §2.3-style claims applied parity-by-parity;
    // exercised by the audit suite.
    raw.c_transitive = true;
    raw.d_symmetric = true;
    raw.compat7 = true;
    return PseudoSpace{base, properize(raw)};
}

BasisSet basis_map(const PseudoSpace& y, const Code& i) {
    (void)y;
    if (even(i)) return BasisSet{true, half(i)};
    return BasisSet{false, odd_part(i)};
}

SemiDecision gamma_relation(const PseudoSpace& y, const Code& i, const Code& j, GammaKind which,
                            Fuel fuel) {
    if (which == GammaKind::contains) return y.top.C(i, j, fuel);
    return y.top.D(i, j, fuel);
}

SemiDecision ball_slice_disjoint(const MetricSpace& space, const Code& i, const Code& l,
                                 Fuel fuel) {
    for (const Code& j : finset_decode(l))
        if (formally_disjoint(space, i, j, fuel).confirmed) return SemiDecision::yes({j});
    return SemiDecision::no();
}

SemiDecision union_slice_disjoint(const MetricSpace& space, const Code& u, const Code& l,
                                  Fuel fuel) {
    for (const Code& i : finset_decode(u))
        if (!ball_slice_disjoint(space, i, l, fuel).confirmed) return SemiDecision::no();
    return SemiDecision::yes();
}

std::optional<Code> try_escape_slice(const MetricSpace& space, const ComputablePoint& x,
                                     const Code& l, Fuel fuel) {
    for (std::uint64_t s = 0; s < fuel; ++s) {
        auto b = x.balls(s);
        if (b && ball_slice_disjoint(space, *b, l, fuel).confirmed) return *b;
    }
    return std::nullopt;
}

Code escape_slice(const MetricSpace& space, const ComputablePoint& x, const Code& l) {
    for (Fuel fuel = 64;; fuel *= 2)
        if (auto r = try_escape_slice(space, x, l, fuel)) return *r;
}

std::optional<Code> try_cover_avoiding_slice(const MetricSpace& space, const LocatedCompact& k,
                                             const Code& l, Fuel fuel) {
    for (std::uint64_t s = 0; s < fuel; ++s) {
        auto u = k.covers(s);
        if (u && union_slice_disjoint(space, *u, l, fuel).confirmed) return *u;
    }
    return std::nullopt;
}

Code cover_avoiding_slice(const MetricSpace& space, const LocatedCompact& k, const Code& l) {
    for (Fuel fuel = 64;; fuel *= 2)
        if (auto r = try_cover_avoiding_slice(space, k, l, fuel)) return *r;
}

namespace {

// shared split kernel: every enumerated cover element is either confirmed
// inside J_j or confirmed away from L_l
SemiDecision split_test(const CTopSpace& base_top, const MetricSpace& space,
                        const Emitter<std::vector<Code>>& elems_stream,
                        const std::function<bool(std::uint64_t, const Code&)>& admit,
                        const Code& l, const Code& j, Fuel fuel) {
    for (std::uint64_t s = 0; s < fuel; ++s) {
        auto e = elems_stream(s);
        if (!e) continue;
        bool ok = true;
        std::vector<Code> avoid;
        for (const Code& p : *e) {
            if (ball_slice_disjoint(space, p, l, fuel).confirmed) {
                avoid.push_back(p);
                continue;
            }
            if (c_contains(base_top, p, j, fuel).confirmed) continue;
            ok = false;
            break;
        }
        if (ok && admit(s, j)) {
            std::vector<Code> witness{l, j};
            if (!avoid.empty()) witness.push_back(fold_elements(avoid));
            return SemiDecision::yes(witness);
        }
    }
    return SemiDecision::no();
}

}  // namespace

SemiDecision slice_cover_test(const CTopSpace& base_top, const MetricSpace& space,
                              const SemiClosedSet& s, const Code& l, const Code& j, Fuel fuel) {
    Code l0 = seq_item(l, 0);
    auto pairs = slice_element_view(s);
    Emitter<std::vector<Code>> filtered = [pairs, l0](std::uint64_t step)
        -> std::optional<std::vector<Code>> {
        auto v = pairs(step);
        if (!v || v->first != l0) return std::nullopt;
        return v->second;
    };
    return split_test(base_top, space, filtered, [](std::uint64_t, const Code&) { return true; },
                      l, j, fuel);
}

SemiDecision compact_slice_test(const CTopSpace& base_top, const MetricSpace& space,
                                const SemicompactSet& k, const Code& l, const Code& j, Fuel fuel) {
    return split_test(base_top, space, element_cover_view(k),
                      [](std::uint64_t, const Code&) { return true; }, l, j, fuel);
}

Emitter<std::pair<Code, Code>> slice_cover_enum(const CTopSpace& base_top,
                                                const MetricSpace& space, const SemiClosedSet& s) {
    auto pairs = s.slice_covers;
    SemiClosedSet scopy = s;
    return [base_top, space, pairs, scopy](std::uint64_t step)
               -> std::optional<std::pair<Code, Code>> {
        if (step % 2 == 0) {
            // singleton lane: [l] = {i} reduces to the native slice pairs
            auto v = pairs(step / 2);
            if (!v) return std::nullopt;
            return std::make_pair(finset_singleton(v->first), v->second);
        }
        auto [r, f] = unpair64(step / 2);
        auto [l64, j64] = unpair64(r);
        Code l(l64), j(j64);
        if (seq_length(l) >= 1 &&
            slice_cover_test(base_top, space, scopy, l, j, f + 1).confirmed)
            return std::make_pair(l, j);
        return std::nullopt;
    };
}

namespace {

// certified enclosing closed ball index for a compact set given by covers
Code enclosing_closed_ball(const MetricSpace& space, const SemicompactSet& k) {
    auto elems_view = element_cover_view(k);
    for (std::uint64_t s = 0;; ++s) {
        auto e = elems_view(s);
        if (!e || e->empty()) continue;
        Point c0 = space.ball((*e)[0]).center;
        // generous rational radius bound, then exact verification
        Rat r(1);
        for (const Code& p : *e) {
            Ball b = space.ball(p);
            Rat d = space.dist_linf(c0, b.center);
            Rat cand = (d + b.radius) * 2 + 1;
            if (cand > r) r = cand;
        }
        Code i0 = space.ball_index(c0, r);
        bool ok = true;
        for (const Code& p : *e) {
            Ball b = space.ball(p);
            if (space.kind() == MetricKind::linf_exact) {
                if (!(space.dist_linf(c0, b.center) + b.radius <= r)) ok = false;
            } else {
                Rat gap = r - b.radius;
                if (gap < 0 || !(space.dist_sq(c0, b.center) <= gap * gap)) ok = false;
            }
            if (!ok) break;
        }
        if (ok) return i0;
    }
}

struct LiftMaps {
    FiniteSet js;
    std::vector<Code> evens, odds;
    Code g, f;
    bool psi_nonempty = false;
    bool ok = true;
};

LiftMaps lift_maps(const MetricSpace& space, const Code& j, const std::optional<Code>& i0) {
    LiftMaps m;
    m.js = finset_decode(j);
    m.evens = evens_of(m.js);
    m.odds = odds_of(m.js);
    m.psi_nonempty = !m.odds.empty();
    if (!m.odds.empty()) {
        m.g = finset_encode(FiniteSet(m.odds.begin(), m.odds.end()));
    } else if (i0) {
        m.g = finset_singleton(*i0);
    } else {
        m.ok = false;
        return m;
    }
    if (!m.evens.empty()) {
        m.f = finset_encode(FiniteSet(m.evens.begin(), m.evens.end()));
    } else {
        Code g0 = seq_item(m.g, 0);
        m.f = finset_singleton(far_ball(space, g0));
    }
    return m;
}

}  // namespace

SemicompactSet lift_compact(const PseudoSpace& y, const CTopSpace& base_top,
                            const SemicompactSet& k) {
    if (!y.base.unbounded()) throw std::invalid_argument("lift: base space must be unbounded");
    MetricSpace space = y.base;
    auto elems_view = std::make_shared<CachedStream<std::vector<Code>>>(element_cover_view(k));
    auto i0 = std::make_shared<Code>(enclosing_closed_ball(space, k));
    SemicompactSet kcopy = k;

    Emitter<std::vector<Code>> elements = [elems_view, i0](std::uint64_t step)
        -> std::optional<std::vector<Code>> {
        // even-coded images of the base covers, odd padding on odd steps
        auto e = elems_view->emission(step / 2, step + 1);
        if (!e) return std::nullopt;
        std::vector<Code> out;
        out.reserve(e->size() + 1);
        for (const Code& p : *e) out.push_back(2 * p);
        if (step % 2 == 1) out.push_back(2 * (*i0) + 1);  // odd padding keeps the union a cover
        return out;
    };
    Emitter<Code> covers = [elements, base_top, space, kcopy, i0](std::uint64_t step)
        -> std::optional<Code> {
        if (step % 2 == 0) {
            auto e = elements(step / 2);
            if (!e || e->size() > 18) return std::nullopt;
            return fold_elements(*e);
        }
        auto [j64, f] = unpair64(step / 2);
        Code j(j64);
        LiftMaps m = lift_maps(space, j, *i0);
        if (!m.ok) return std::nullopt;
        if (compact_slice_test(base_top, space, kcopy, m.g, m.f, f + 1).confirmed) return j;
        return std::nullopt;
    };
    return SemicompactSet{covers, elements};
}

SemicompactSet lift_noncompact(const PseudoSpace& y, const CTopSpace& base_top,
                               const SemiClosedSet& k) {
    if (!y.base.unbounded()) throw std::invalid_argument("lift: base space must be unbounded");
    MetricSpace space = y.base;
    auto pairs = std::make_shared<CachedStream<std::pair<Code, std::vector<Code>>>>(
        slice_element_view(k));
    SemiClosedSet kcopy = k;

    Emitter<std::vector<Code>> elements = [pairs](std::uint64_t step)
        -> std::optional<std::vector<Code>> {
        auto v = pairs->emission(step, step + 1);
        if (!v) return std::nullopt;
        std::vector<Code> out;
        out.reserve(v->second.size() + 1);
        for (const Code& p : v->second) out.push_back(2 * p);
        out.push_back(2 * v->first + 1);
        return out;
    };
    Emitter<Code> covers = [elements, base_top, space, kcopy](std::uint64_t step)
        -> std::optional<Code> {
        if (step % 2 == 0) {
            auto e = elements(step / 2);
            if (!e || e->size() > 18) return std::nullopt;
            return fold_elements(*e);
        }
        auto [j64, f] = unpair64(step / 2);
        Code j(j64);
        LiftMaps m = lift_maps(space, j, std::nullopt);
        if (!m.ok || !m.psi_nonempty) return std::nullopt;
        if (slice_cover_test(base_top, space, kcopy, m.g, m.f, f + 1).confirmed) return j;
        return std::nullopt;
    };
    return SemicompactSet{covers, elements};
}

CeClosedSet project_ce(const PseudoSpace& y, const CeClosedSet& kinf) {
    (void)y;
    Emitter<Code> src = kinf.touches;
    return CeClosedSet{[src](std::uint64_t step) -> std::optional<Code> {
        auto v = src(step);
        if (!v || *v % 2 != 0) return std::nullopt;
        return *v / 2;
    }};
}

std::optional<std::pair<Code, Code>> y_separate_points(const PseudoSpace& y,
                                                       const std::optional<ComputablePoint>& x,
                                                       const std::optional<ComputablePoint>& yy,
                                                       Fuel fuel) {
    if (x && yy) {
        auto r = try_separate_points(y.base, *x, *yy, fuel);
        if (!r) return std::nullopt;
        return std::make_pair(2 * r->first, 2 * r->second);
    }
    const std::optional<ComputablePoint>& fin = x ? x : yy;
    if (!fin) return std::nullopt;  // two copies of ∞ are not distinct points
    // Case 2 of the axiom-(3) proof: x ∈ I_i formally inside I_j gives
    // x ∈ B_{2i}, ∞ ∈ B_{2j+1}, and (2i, 2j+1) confirmed disjoint.
    std::vector<Code> seen;
    for (std::uint64_t s = 0; s < fuel; ++s) {
        auto b = fin->balls(s);
        if (!b) continue;
        for (const Code& other : seen) {
            if (y.base.formally_contained_true(*b, other)) {
                Code bi = 2 * (*b), bj = 2 * other + 1;
                if (x) return std::make_pair(bi, bj);
                return std::make_pair(bj, bi);
            }
            if (y.base.formally_contained_true(other, *b)) {
                Code bi = 2 * other, bj = 2 * (*b) + 1;
                if (x) return std::make_pair(bi, bj);
                return std::make_pair(bj, bi);
            }
        }
        seen.push_back(*b);
    }
    return std::nullopt;
}

std::optional<Code> y_refine_common(const PseudoSpace& y, const Code& i, const Code& j,
                                    const std::optional<ComputablePoint>& x, Fuel fuel) {
    const MetricSpace& base = y.base;
    if (!x) {
        // x = ∞: both codes must be odd; join the underlying closed balls
        if (even(i) || even(j)) return std::nullopt;
        auto k = try_join_balls(base, odd_part(i), odd_part(j), fuel);
        if (!k) return std::nullopt;
        return 2 * (*k) + 1;
    }
    // finite point: escape the odd parts, refine within the even parts
    std::vector<Code> constraints;
    for (const Code& c : {i, j}) {
        if (even(c)) {
            constraints.push_back(half(c));
        } else {
            auto esc = try_escape_closed_ball(base, *x, odd_part(c), fuel);
            if (!esc) return std::nullopt;
            constraints.push_back(*esc);
        }
    }
    for (std::uint64_t s = 0; s < fuel; ++s) {
        auto b = x->balls(s);
        if (!b) continue;
        bool ok = true;
        for (const Code& c : constraints)
            if (!base.formally_contained_true(*b, c)) {
                ok = false;
                break;
            }
        if (ok) return 2 * (*b);
    }
    return std::nullopt;
}

PipelineResult noncompact_pipeline(const PipelineInput& in) {
    PseudoSpace y = make_pseudospace(in.space);
    SemicompactSet kinf = lift_noncompact(y, in.base_top, in.k);

    // Boundary on Y: the lifted base boundary, with ∞ adjoined when the tail
    // is a half-space. A noncompact boundary lifts through its slice
    // representation, which lands on ∂K ∪ {∞} directly.
    SemicompactSet t_y;
    if (in.boundary_noncompact) {
        t_y = lift_noncompact(y, in.base_top, *in.boundary_noncompact);
    } else if (!in.boundary_compact) {
        throw std::invalid_argument("noncompact_pipeline: boundary data required");
    } else {
        t_y = lift_compact(y, in.base_top, *in.boundary_compact);
    }
    if (in.tail_is_halfspace && !in.boundary_noncompact) {
        auto elem_base = std::make_shared<CachedStream<std::vector<Code>>>(
            element_cover_view(t_y));
        MetricSpace space = in.space;
        Emitter<std::vector<Code>> elements = [elem_base, space](std::uint64_t step)
            -> std::optional<std::vector<Code>> {
            auto [pos, tier] = unpair64(step);
            auto e = elem_base->emission(pos, step + 1);
            if (!e) return std::nullopt;
            std::vector<Code> out = *e;
            // adjoin an odd element so ∞ is covered: complement of the closed
            // ball at the origin with a tier-sized radius
            Point origin(space.dim(), Rat(0));
            Code m = space.ball_index(origin, Rat(Code(1) << (tier % 16), 1));
            out.push_back(2 * m + 1);
            return out;
        };
        Emitter<Code> covers = [elements](std::uint64_t step) -> std::optional<Code> {
            auto e = elements(step);
            if (!e || e->size() > 18) return std::nullopt;
            return fold_elements(*e);
        };
        t_y = SemicompactSet{covers, elements};
    }

    std::vector<BuiltChart> charts;
    charts.reserve(in.charts.size());
    for (const PipelineChart& pc : in.charts)
        charts.push_back(build_chart(y.top, kinf, pc.kind, pc.pieces, t_y));

    CeClosedSet y_touches = upgrade_to_ce(y.top, kinf, charts);
    CeClosedSet touches = project_ce(y, y_touches);
    return PipelineResult{y, kinf, t_y, charts, y_touches, touches};
}

}  // namespace ctop
