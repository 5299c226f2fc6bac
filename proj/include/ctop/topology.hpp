#pragma once

#include "ctop/metric.hpp"
#include "ctop/semidecide.hpp"

#include <optional>
#include <vector>

namespace ctop {

// A basis enumeration together with c.e. characteristic relations: C confirms
// basic-set inclusion, D confirms disjointness. `proper` additionally promises
// symmetry of D, preorder laws for C and the C/D compatibility law on the
// confirmed sets.
struct CTopSpace {
    std::string basis_tag;
    Relation C;
    Relation D;
    bool proper = false;

    // Declared closure traits of the underlying relations; properize collapses
    // to a diagonal extension when they hold.
    bool c_transitive = false;
    bool d_symmetric = false;
    bool compat7 = false;
};

// The space associated to a computable metric space: C is formal containment,
// D formal disjointness.
CTopSpace from_metric(const MetricSpace& space);

CTopSpace properize(const CTopSpace& space);

// Coded finite unions J_a; the lifted relations.
SemiDecision c_contains(const CTopSpace& s, const Code& i, const Code& a, Fuel fuel);
SemiDecision cc_union(const CTopSpace& s, const Code& a, const Code& b, Fuel fuel);
SemiDecision dd_ball_union(const CTopSpace& s, const Code& i, const Code& a, Fuel fuel);
SemiDecision dd_union_union(const CTopSpace& s, const Code& a, const Code& b, Fuel fuel);

// A compact set located by its cover enumerator (all union codes a with
// K ⊆ J_a), optionally with a touch enumerator. The element lane carries the
// covers as ball-code lists so searches avoid re-decoding wide union codes.
struct LocatedCompact {
    Emitter<Code> covers;
    std::optional<Emitter<Code>> touches;
    std::optional<Emitter<std::vector<Code>>> element_covers;
};

Emitter<std::vector<Code>> located_element_view(const LocatedCompact& k);

// Element-list forms of the lifted relations.
SemiDecision cc_elems(const CTopSpace& s, const std::vector<Code>& a, const std::vector<Code>& b,
                      Fuel fuel);
SemiDecision dd_elems(const CTopSpace& s, const std::vector<Code>& a, const std::vector<Code>& b,
                      Fuel fuel);

std::optional<std::pair<Code, Code>> try_separate_point_compact(const CTopSpace& s,
                                                                const ComputablePoint& x,
                                                                const LocatedCompact& k, Fuel fuel);

std::optional<std::pair<Code, Code>> try_separate_compacts(const CTopSpace& s,
                                                           const LocatedCompact& k,
                                                           const LocatedCompact& l, Fuel fuel);
std::pair<Code, Code> separate_compacts(const CTopSpace& s, const LocatedCompact& k,
                                        const LocatedCompact& l);

// Finds c with K ⊆ J_c and J_c C-contained in every listed union.
std::optional<Code> try_shrink_cover(const CTopSpace& s, const LocatedCompact& k,
                                     const std::vector<Code>& unions, Fuel fuel);
Code shrink_cover(const CTopSpace& s, const LocatedCompact& k, const std::vector<Code>& unions);

// The finite-family separation: per-member covers that are pairwise
// D-disjoint for the asserted disjoint pairs and C-refine the asserted
// covering unions. Both hypothesis lists are explicit inputs.
struct FamilyConstraints {
    std::vector<std::pair<std::size_t, std::size_t>> disjoint_pairs;
    std::vector<std::pair<Code, std::vector<std::size_t>>> covering_unions;
};
std::vector<Code> separate_family(const CTopSpace& s, const std::vector<LocatedCompact>& family,
                                  const FamilyConstraints& constraints);

}  // namespace ctop
