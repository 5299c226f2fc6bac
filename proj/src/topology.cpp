#include "ctop/topology.hpp"

#include <stdexcept>

namespace ctop {

CTopSpace from_metric(const MetricSpace& space) {
    CTopSpace s;
    s.basis_tag = "metric-q" + std::to_string(space.dim()) +
                  (space.kind() == MetricKind::linf_exact ? "-linf" : "-l2");
    s.C = [space](const Code& i, const Code& j, Fuel fuel) {
        return formally_contained(space, i, j, fuel);
    };
    s.D = [space](const Code& i, const Code& j, Fuel fuel) {
        return formally_disjoint(space, i, j, fuel);
    };
    // §2.3 claims (5)-(7): formal containment is transitive, formal
    // disjointness symmetric, and containment shrinks disjointness.
    s.c_transitive = true;
    s.d_symmetric = true;
    s.compat7 = true;
    return s;
}

CTopSpace properize(const CTopSpace& space) {
    CTopSpace out = space;
    out.proper = true;
    out.basis_tag = space.basis_tag + "+proper";

    if (space.c_transitive && space.d_symmetric && space.compat7) {
        // The chain closure of a transitive C is C plus the diagonal, and the
        // D-saturation collapses back onto D.
        Relation c0 = space.C;
        out.C = [c0](const Code& i, const Code& j, Fuel fuel) {
            if (fuel == 0) return SemiDecision::no();
            if (i == j) return SemiDecision::yes();
            return c0(i, j, fuel);
        };
        return out;
    }

    Relation c0 = space.C;
    Relation d0 = space.D;

    // D' = D ∪ Dᵀ
    Relation d1 = [d0](const Code& i, const Code& j, Fuel fuel) {
        if (auto r = d0(i, j, fuel); r.confirmed) return r;
        return d0(j, i, fuel);
    };

    // C' = chain closure: dovetail over sequence codes a with (a)_0 = i,
    // (a)_last = j and consecutive links in C.
    Relation c1 = [c0](const Code& i, const Code& j, Fuel fuel) -> SemiDecision {
        if (fuel == 0) return SemiDecision::no();
        if (i == j) return SemiDecision::yes();
        if (auto r = c0(i, j, fuel); r.confirmed) return r;
        for (std::uint64_t s = 0; s < fuel; ++s) {
            // peek at the length and head before decoding the whole chain
            auto [m, rest] = unpair_code(Code(s));
            if (m == 0) continue;
            if (unpair_code(rest).first != i) continue;
            Seq chain = seq_decode(Code(s));
            if (chain.back() != j) continue;
            bool ok = true;
            for (std::size_t l = 0; ok && l + 1 < chain.size(); ++l)
                ok = c0(chain[l], chain[l + 1], fuel).confirmed;
            if (ok) return SemiDecision::yes({Code(s)});
        }
        return SemiDecision::no();
    };

    // D'' = {(i,j) | exists k,l with (i,k) in C', (j,l) in C', (k,l) in D'}.
    Relation d2 = [c1, d1](const Code& i, const Code& j, Fuel fuel) -> SemiDecision {
        if (auto r = d1(i, j, fuel); r.confirmed) return r;
        for (std::uint64_t s = 0; s < fuel; ++s) {
            auto [ku, lu] = unpair64(s);
            Code k(ku), l(lu);
            if (c1(i, k, fuel).confirmed && c1(j, l, fuel).confirmed &&
                d1(k, l, fuel).confirmed)
                return SemiDecision::yes({k, l});
        }
        return SemiDecision::no();
    };

    out.C = c1;
    out.D = d2;
    return out;
}

Emitter<std::vector<Code>> located_element_view(const LocatedCompact& k) {
    if (k.element_covers) return *k.element_covers;
    Emitter<Code> covers = k.covers;
    return [covers](std::uint64_t step) -> std::optional<std::vector<Code>> {
        auto v = covers(step);
        if (!v) return std::nullopt;
        FiniteSet e = finset_decode(*v);
        return std::vector<Code>(e.begin(), e.end());
    };
}

SemiDecision cc_elems(const CTopSpace& s, const std::vector<Code>& a, const std::vector<Code>& b,
                      Fuel fuel) {
    for (const Code& i : a) {
        bool ok = false;
        for (const Code& j : b)
            if (s.C(i, j, fuel).confirmed) {
                ok = true;
                break;
            }
        if (!ok) return SemiDecision::no();
    }
    return SemiDecision::yes();
}

SemiDecision dd_elems(const CTopSpace& s, const std::vector<Code>& a, const std::vector<Code>& b,
                      Fuel fuel) {
    for (const Code& i : a)
        for (const Code& j : b)
            if (!s.D(i, j, fuel).confirmed) return SemiDecision::no();
    return SemiDecision::yes();
}

SemiDecision c_contains(const CTopSpace& s, const Code& i, const Code& a, Fuel fuel) {
    for (const Code& j : finset_decode(a))
        if (s.C(i, j, fuel).confirmed) return SemiDecision::yes({j});
    return SemiDecision::no();
}

SemiDecision cc_union(const CTopSpace& s, const Code& a, const Code& b, Fuel fuel) {
    for (const Code& i : finset_decode(a))
        if (!c_contains(s, i, b, fuel).confirmed) return SemiDecision::no();
    return SemiDecision::yes();
}

SemiDecision dd_ball_union(const CTopSpace& s, const Code& i, const Code& a, Fuel fuel) {
    for (const Code& j : finset_decode(a))
        if (!s.D(i, j, fuel).confirmed) return SemiDecision::no();
    return SemiDecision::yes();
}

SemiDecision dd_union_union(const CTopSpace& s, const Code& a, const Code& b, Fuel fuel) {
    for (const Code& i : finset_decode(a))
        if (!dd_ball_union(s, i, b, fuel).confirmed) return SemiDecision::no();
    return SemiDecision::yes();
}

std::optional<std::pair<Code, Code>> try_separate_point_compact(const CTopSpace& s,
                                                                const ComputablePoint& x,
                                                                const LocatedCompact& k, Fuel fuel) {
    auto kelems = located_element_view(k);
    std::vector<Code> balls;
    std::vector<std::vector<Code>> covers;
    auto ball_avoids = [&](const Code& i, const std::vector<Code>& cov) {
        for (const Code& j : cov)
            if (!s.D(i, j, fuel).confirmed) return false;
        return true;
    };
    for (std::uint64_t step = 0; step < fuel; ++step) {
        std::optional<Code> bi = x.balls(step);
        auto cov = kelems(step);
        if (bi) {
            for (const auto& c : covers)
                if (ball_avoids(*bi, c)) return std::make_pair(*bi, fold_elements(c));
            balls.push_back(*bi);
        }
        if (cov) {
            for (const Code& i : balls)
                if (ball_avoids(i, *cov)) return std::make_pair(i, fold_elements(*cov));
            covers.push_back(std::move(*cov));
        }
    }
    return std::nullopt;
}

std::optional<std::pair<Code, Code>> try_separate_compacts(const CTopSpace& s,
                                                           const LocatedCompact& k,
                                                           const LocatedCompact& l, Fuel fuel) {
    auto ka_view = located_element_view(k), lb_view = located_element_view(l);
    std::vector<std::vector<Code>> ka, lb;
    for (std::uint64_t step = 0; step < fuel; ++step) {
        auto ca = ka_view(step);
        auto cb = lb_view(step);
        if (ca) {
            for (const auto& b : lb)
                if (dd_elems(s, *ca, b, fuel).confirmed)
                    return std::make_pair(fold_elements(*ca), fold_elements(b));
            ka.push_back(std::move(*ca));
        }
        if (cb) {
            for (const auto& a : ka)
                if (dd_elems(s, a, *cb, fuel).confirmed)
                    return std::make_pair(fold_elements(a), fold_elements(*cb));
            lb.push_back(std::move(*cb));
        }
    }
    return std::nullopt;
}

std::pair<Code, Code> separate_compacts(const CTopSpace& s, const LocatedCompact& k,
                                        const LocatedCompact& l) {
    for (Fuel fuel = 64;; fuel *= 2)
        if (auto r = try_separate_compacts(s, k, l, fuel)) return *r;
}

std::optional<Code> try_shrink_cover(const CTopSpace& s, const LocatedCompact& k,
                                     const std::vector<Code>& unions, Fuel fuel) {
    auto view = located_element_view(k);
    std::vector<std::vector<Code>> targets;
    targets.reserve(unions.size());
    for (const Code& a : unions) {
        FiniteSet e = finset_decode(a);
        targets.emplace_back(e.begin(), e.end());
    }
    for (std::uint64_t step = 0; step < fuel; ++step) {
        auto c = view(step);
        if (!c) continue;
        bool ok = true;
        for (const auto& t : targets)
            if (!cc_elems(s, *c, t, fuel).confirmed) {
                ok = false;
                break;
            }
        if (ok) return fold_elements(*c);
    }
    return std::nullopt;
}

Code shrink_cover(const CTopSpace& s, const LocatedCompact& k, const std::vector<Code>& unions) {
    for (Fuel fuel = 64;; fuel *= 2)
        if (auto r = try_shrink_cover(s, k, unions, fuel)) return *r;
}

std::vector<Code> separate_family(const CTopSpace& s, const std::vector<LocatedCompact>& family,
                                  const FamilyConstraints& constraints) {
    if (!s.proper) throw std::invalid_argument("separate_family: space must be proper");
    std::size_t n = family.size();
    // Pairwise separations for the asserted disjoint pairs.
    std::vector<std::vector<Code>> wanted(n);
    for (auto [p, q] : constraints.disjoint_pairs) {
        auto [u, v] = separate_compacts(s, family[p], family[q]);
        wanted[p].push_back(u);
        wanted[q].push_back(v);
    }
    for (const auto& [a, members] : constraints.covering_unions)
        for (std::size_t m : members) wanted[m].push_back(a);
    std::vector<Code> out;
    out.reserve(n);
    for (std::size_t m = 0; m < n; ++m) out.push_back(shrink_cover(s, family[m], wanted[m]));
    return out;
}

}  // namespace ctop
