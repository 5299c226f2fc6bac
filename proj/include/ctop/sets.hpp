#pragma once

#include "ctop/topology.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace ctop {

// Compact set represented by the enumerator of its full-cover codes
// {a | S ⊆ J_a}. The optional element lane carries covers as lists of ball
// codes; codes of sets past a couple dozen elements are astronomically large
// under the nested pairing, so wide covers only exist in tuple form (the
// k-tuple cover sets are c.e. in their own right).
struct SemicompactSet {
    Emitter<Code> covers;
    std::optional<Emitter<std::vector<Code>>> element_covers;
};

// Element-list view: the native lane when present, else decoded covers.
Emitter<std::vector<Code>> element_cover_view(const SemicompactSet& s);

// Closed set represented by the enumerator of touching ball indices
// {i | I_i ∩ S ≠ ∅}.
struct CeClosedSet {
    Emitter<Code> touches;
};

struct ComputableSet {
    Emitter<Code> covers;
    Emitter<Code> touches;
    std::optional<Emitter<std::vector<Code>>> element_covers;
};

// Noncompact closed set with compact closed-ball slices, represented by the
// enumerator of pairs (i, j) with Î_i ∩ S ⊆ J_j.
struct SemiClosedSet {
    Emitter<std::pair<Code, Code>> slice_covers;
    std::optional<Emitter<std::pair<Code, std::vector<Code>>>> slice_element_covers;
};

Emitter<std::pair<Code, std::vector<Code>>> slice_element_view(const SemiClosedSet& s);

// Enumerator sandwiched between a subset A and its ambient S: every ball
// touching A is eventually emitted, every emitted ball touches S.
struct UpToEnumerator {
    Emitter<Code> omega;
};

// Stream-membership view of the cover enumerator: Confirmed iff j shows up
// within the first `fuel` steps.
SemiDecision covered_by(const SemicompactSet& s, const Code& j, Fuel fuel);

// S \ J_m as a semicomputable set. Uses the identity
// S\J_m ⊆ J_j  ⟺  S ⊆ J_{j ∪ m}, plus a lane that strips the covered
// elements out of S's own covers.
SemicompactSet subtract_union(const CTopSpace& top, const SemicompactSet& s, const Code& m);

// Enumerator of k-tuples whose folded union covers S.
Emitter<std::vector<Code>> tuple_covers(const SemicompactSet& s, int k);

UpToEnumerator union_up_to(std::vector<UpToEnumerator> parts);

// Hausdorff-certified finite approximation: dense-point indices whose point
// set is within 2^-k of S, certified through a fine all-touching cover.
// Returns nullopt when the fuel runs out; an empty list is the (certified)
// empty-set answer.
std::optional<std::vector<Code>> approximate(const MetricSpace& space, const ComputableSet& s,
                                             int k, Fuel fuel);

// Variant taking the element-list lane for the cover side (needed whenever a
// fine cover is wider than single codes allow).
std::optional<std::vector<Code>> approximate_elements(const MetricSpace& space,
                                                      const Emitter<std::vector<Code>>& covers,
                                                      const Emitter<Code>& touches, int k,
                                                      Fuel fuel);


}  // namespace ctop
