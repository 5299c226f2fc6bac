#pragma once

#include "ctop/numbers.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace ctop {

// Cantor pairing in diagonal order: pair(a,b) = (a+b)(a+b+1)/2 + b.
Code pair_code(const Code& a, const Code& b);
std::pair<Code, Code> unpair_code(const Code& n);

// Small fixed-width variant for step bookkeeping inside searches.
std::uint64_t pair64(std::uint64_t a, std::uint64_t b);
std::pair<std::uint64_t, std::uint64_t> unpair64(std::uint64_t n);

// Nonempty finite sequences. Convention: unpair(j) = (m, r) gives length m+1;
// items are peeled from r by repeated unpair, the last remainder is the final
// item.
using Seq = std::vector<Code>;

Seq seq_decode(const Code& j);
Code seq_encode(const Seq& items);
Code seq_length(const Code& j);       // number of items (= eta(j) + 1)
Code seq_item(const Code& j, std::uint64_t i);

// Nonempty finite sets coded through sequences; encode picks the least code,
// which under this pairing is the descending-order sequence of the elements.
using FiniteSet = std::vector<Code>;  // kept sorted ascending, no duplicates

FiniteSet finset_decode(const Code& j);
Code finset_encode(const FiniteSet& elements);
Code finset_singleton(const Code& x);

// Code of the decoded union of two coded sets: [result] = [a] ∪ [b].
Code union_code(const Code& a, const Code& b);

// Least code of the set of the given elements.
Code fold_elements(const std::vector<Code>& elems);

// Surjection onto the positive rationals: q_n = (a+1)/(b+1), (a,b) = unpair(n).
Rat rat_enum(const Code& n);
// An index mapping back to the given positive rational (the reduced-form one).
Code rat_index(const Rat& positive);

// Computably finite valued functions N -> P(N); `bound` dominates every member
// of the value set.
struct CfvFn {
    std::function<bool(const Code&, const Code&)> membership;  // (x, y) -> y in Phi(x)
    std::function<Code(const Code&)> bound;

    std::vector<Code> values(const Code& x) const;
};

CfvFn cfv_union(const CfvFn& phi, const CfvFn& psi);
// Values of the product are pair-coded: pair(y, z) with y in Phi(x), z in Psi(x).
CfvFn cfv_product(const CfvFn& phi, const CfvFn& psi);
// Lambda(x) = union of Psi(z) over z in Phi(x).
CfvFn cfv_compose(const CfvFn& phi, const CfvFn& psi);

// Fuel-monotone semi-decider for {x | Phi(x) ⊆ T}, T given as a fuel-monotone
// membership semi-decider.
using CeMembership = std::function<bool(const Code&, Fuel)>;
bool cfv_subset_ce(const CfvFn& phi, const CeMembership& in_t, const Code& x, Fuel fuel);

}  // namespace ctop
