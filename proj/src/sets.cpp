#include "ctop/sets.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace ctop {

SemiDecision covered_by(const SemicompactSet& s, const Code& j, Fuel fuel) {
    for (std::uint64_t step = 0; step < fuel; ++step)
        if (auto v = s.covers(step); v && *v == j) return SemiDecision::yes({j});
    return SemiDecision::no();
}

Emitter<std::vector<Code>> element_cover_view(const SemicompactSet& s) {
    if (s.element_covers) return *s.element_covers;
    Emitter<Code> covers = s.covers;
    return [covers](std::uint64_t step) -> std::optional<std::vector<Code>> {
        auto v = covers(step);
        if (!v) return std::nullopt;
        FiniteSet e = finset_decode(*v);
        return std::vector<Code>(e.begin(), e.end());
    };
}

Emitter<std::pair<Code, std::vector<Code>>> slice_element_view(const SemiClosedSet& s) {
    if (s.slice_element_covers) return *s.slice_element_covers;
    auto pairs = s.slice_covers;
    return [pairs](std::uint64_t step) -> std::optional<std::pair<Code, std::vector<Code>>> {
        auto v = pairs(step);
        if (!v) return std::nullopt;
        FiniteSet e = finset_decode(v->second);
        return std::make_pair(v->first, std::vector<Code>(e.begin(), e.end()));
    };
}

SemicompactSet subtract_union(const CTopSpace& top, const SemicompactSet& s, const Code& m) {
    auto base = std::make_shared<CachedStream<Code>>(s.covers);
    FiniteSet m_set = finset_decode(m);
    Code m_reenc = finset_encode(m_set);
    auto memo = std::make_shared<std::map<std::uint64_t, std::optional<Code>>>();
    auto mu = std::make_shared<std::mutex>();
    Emitter<Code> covers = [top, base, m, m_set, m_reenc, memo, mu](std::uint64_t step) -> std::optional<Code> {
        {
            std::scoped_lock lock(*mu);
            if (auto it = memo->find(step); it != memo->end()) return it->second;
        }
        std::optional<Code> out;
        if (step % 2 == 0) {
            // strip lane: drop the elements of an enumerated cover that are
            // already confirmed inside J_m
            auto [pos, f] = unpair64(step / 2);
            if (auto u = base->emission(pos, step + 1)) {
                FiniteSet kept;
                for (const Code& p : finset_decode(*u)) {
                    bool dropped = false;
                    for (const Code& q : m_set)
                        if (top.C(p, q, f + 1).confirmed) {
                            dropped = true;
                            break;
                        }
                    if (!dropped) kept.push_back(p);
                }
                out = kept.empty() ? m_reenc : finset_encode(kept);
            }
        } else {
            // identity lane: S\J_m ⊆ J_j iff S ⊆ J_{j ∪ m}
            auto [j64, f] = unpair64(step / 2);
            Code j(j64);
            if (base->contains(union_code(j, m), f + 1)) out = j;
        }
        std::scoped_lock lock(*mu);
        (*memo)[step] = out;
        return out;
    };

    auto elem_base = std::make_shared<CachedStream<std::vector<Code>>>(element_cover_view(s));
    FiniteSet m_elems = m_set;
    Emitter<std::vector<Code>> elements =
        [top, elem_base, m_elems](std::uint64_t step) -> std::optional<std::vector<Code>> {
        std::uint64_t pos;
        Fuel f;
        std::uint64_t r16 = step % 16;
        if (r16 < 15) {
            pos = (step / 16) * 15 + r16;
            f = 1 + step / 1024;
        } else {
            auto [p, f64] = unpair64(step / 16);
            pos = p;
            f = f64 + 1;
        }
        auto u = elem_base->emission(pos, step + 1);
        if (!u) return std::nullopt;
        std::vector<Code> kept;
        for (const Code& p : *u) {
            bool dropped = false;
            for (const Code& q : m_elems)
                if (top.C(p, q, f).confirmed) {
                    dropped = true;
                    break;
                }
            if (!dropped) kept.push_back(p);
        }
        if (kept.empty()) kept.assign(m_elems.begin(), m_elems.end());
        return kept;
    };
    return SemicompactSet{covers, elements};
}

Emitter<std::vector<Code>> tuple_covers(const SemicompactSet& s, int k) {
    auto base = std::make_shared<CachedStream<Code>>(s.covers);
    return [base, k](std::uint64_t step) -> std::optional<std::vector<Code>> {
        if (step % 2 == 0) {
            // chunk lane: split an enumerated cover's elements into k runs
            auto pos = step / 2;
            auto u = base->emission(pos, step + 1);
            if (!u) return std::nullopt;
            FiniteSet elems = finset_decode(*u);
            if (elems.size() < static_cast<std::size_t>(k)) return std::nullopt;
            std::vector<Code> tuple;
            std::size_t n = elems.size();
            for (int c = 0; c < k; ++c) {
                std::size_t lo = n * c / k, hi = n * (c + 1) / k;
                tuple.push_back(finset_encode(FiniteSet(elems.begin() + lo, elems.begin() + hi)));
            }
            return tuple;
        }
        // sweep lane: decode a tuple code and check the folded union
        auto [t64, f] = unpair64(step / 2);
        Seq tup = seq_decode(Code(t64));
        if (tup.size() != static_cast<std::size_t>(k)) return std::nullopt;
        Code fold = tup[0];
        for (std::size_t i = 1; i < tup.size(); ++i) fold = union_code(fold, tup[i]);
        if (base->contains(fold, f + 1)) return std::vector<Code>(tup.begin(), tup.end());
        return std::nullopt;
    };
}

UpToEnumerator union_up_to(std::vector<UpToEnumerator> parts) {
    std::vector<Emitter<Code>> ems;
    ems.reserve(parts.size());
    for (auto& p : parts) ems.push_back(std::move(p.omega));
    return UpToEnumerator{merge_emitters(std::move(ems))};
}

std::optional<std::vector<Code>> approximate_elements(const MetricSpace& space,
                                                      const Emitter<std::vector<Code>>& covers,
                                                      const Emitter<Code>& touches, int k,
                                                      Fuel fuel) {
    CachedStream<Code> touch_stream(touches);
    Rat eps = pow2(-k);
    std::vector<std::vector<Code>> seen;
    for (std::uint64_t step = 0; step < fuel; ++step) {
        auto u = covers(step);
        if (!u) continue;
        bool fine = true;
        for (const Code& p : *u)
            if (!(space.ball(p).radius < eps)) {
                fine = false;
                break;
            }
        if (fine) {
            bool all_touch = true;
            for (const Code& p : *u)
                if (!touch_stream.contains(p, fuel)) {
                    all_touch = false;
                    break;
                }
            if (all_touch) {
                // d_H < 2^-k both ways: every point of S is inside some
                // enumerated ball of radius < 2^-k centered at an emitted
                // center, and every center's ball meets S.
                FiniteSet centers;
                for (const Code& p : *u) centers.push_back(unpair_code(p).first);
                std::sort(centers.begin(), centers.end());
                centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
                return std::vector<Code>(centers.begin(), centers.end());
            }
        }
        // emptiness certificate: two enumerated covers with pairwise formally
        // disjoint elements squeeze S into the empty set
        for (const auto& v : seen) {
            bool disj = true;
            for (const Code& p : *u) {
                for (const Code& q : v)
                    if (!space.formally_disjoint_true(p, q)) {
                        disj = false;
                        break;
                    }
                if (!disj) break;
            }
            if (disj) return std::vector<Code>{};
        }
        seen.push_back(*u);
    }
    return std::nullopt;
}

std::optional<std::vector<Code>> approximate(const MetricSpace& space, const ComputableSet& s,
                                             int k, Fuel fuel) {
    if (s.element_covers) return approximate_elements(space, *s.element_covers, s.touches, k, fuel);
    Emitter<Code> covers = s.covers;
    Emitter<std::vector<Code>> elems = [covers](std::uint64_t step) -> std::optional<std::vector<Code>> {
        auto v = covers(step);
        if (!v) return std::nullopt;
        FiniteSet e = finset_decode(*v);
        return std::vector<Code>(e.begin(), e.end());
    };
    return approximate_elements(space, elems, s.touches, k, fuel);
}

}  // namespace ctop
