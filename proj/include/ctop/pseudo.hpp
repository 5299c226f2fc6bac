#pragma once

#include "ctop/charts.hpp"
#include "ctop/sets.hpp"

#include <optional>
#include <vector>

namespace ctop {

// The space X ∪ {∞} whose basis alternates open balls (even codes) and
// closed-ball complements joined with ∞ (odd codes), with the parity-split
// characteristic relations over the base formal relations.
struct PseudoSpace {
    MetricSpace base;
    CTopSpace top;  // properized
};

PseudoSpace make_pseudospace(const MetricSpace& base);

struct BasisSet {
    bool is_ball = true;  // even code; otherwise {∞} ∪ (X \ closed ball)
    Code ball;            // the underlying base ball index
};
BasisSet basis_map(const PseudoSpace& y, const Code& i);

enum class GammaKind { contains, disjoint };
SemiDecision gamma_relation(const PseudoSpace& y, const Code& i, const Code& j, GammaKind which,
                            Fuel fuel);

// Formal avoidance of the closed-ball intersection L_l = ∩_{i∈[l]} Î_i.
SemiDecision ball_slice_disjoint(const MetricSpace& space, const Code& i, const Code& l, Fuel fuel);
SemiDecision union_slice_disjoint(const MetricSpace& space, const Code& u, const Code& l, Fuel fuel);

std::optional<Code> try_escape_slice(const MetricSpace& space, const ComputablePoint& x,
                                     const Code& l, Fuel fuel);
Code escape_slice(const MetricSpace& space, const ComputablePoint& x, const Code& l);
std::optional<Code> try_cover_avoiding_slice(const MetricSpace& space, const LocatedCompact& k,
                                             const Code& l, Fuel fuel);
Code cover_avoiding_slice(const MetricSpace& space, const LocatedCompact& k, const Code& l);

// Semi-decider for S ∩ L_l ⊆ J_j via the split of an enumerated slice cover
// into a J_j-contained part and an L_l-avoiding part.
SemiDecision slice_cover_test(const CTopSpace& base_top, const MetricSpace& space,
                              const SemiClosedSet& s, const Code& l, const Code& j, Fuel fuel);
SemiDecision compact_slice_test(const CTopSpace& base_top, const MetricSpace& space,
                                const SemicompactSet& k, const Code& l, const Code& j, Fuel fuel);

Emitter<std::pair<Code, Code>> slice_cover_enum(const CTopSpace& base_top,
                                                const MetricSpace& space, const SemiClosedSet& s);

// Semicomputability transfer into the pseudocompactification: K itself for
// compact K, K ∪ {∞} for noncompact K.
SemicompactSet lift_compact(const PseudoSpace& y, const CTopSpace& base_top,
                            const SemicompactSet& k);
SemicompactSet lift_noncompact(const PseudoSpace& y, const CTopSpace& base_top,
                               const SemiClosedSet& k);

// Even-code projection: touches of K in the base from touches of K ∪ {∞}.
CeClosedSet project_ce(const PseudoSpace& y, const CeClosedSet& kinf);

// Axiom-witness searches on the pseudospace (audit surface): separate two
// points of Y (nullopt = ∞), and refine a pair of basis sets at a point.
std::optional<std::pair<Code, Code>> y_separate_points(const PseudoSpace& y,
                                                       const std::optional<ComputablePoint>& x,
                                                       const std::optional<ComputablePoint>& yy,
                                                       Fuel fuel);
std::optional<Code> y_refine_common(const PseudoSpace& y, const Code& i, const Code& j,
                                    const std::optional<ComputablePoint>& x, Fuel fuel);

struct PipelineChart {
    ChartKind kind = ChartKind::boundary;
    ChartPieces pieces;  // streams over the Y basis coding
};

struct PipelineInput {
    MetricSpace space{2, MetricKind::linf_exact};
    CTopSpace base_top;              // properized base space
    SemiClosedSet k;
    std::optional<SemicompactSet> boundary_compact;    // compact ∂K
    std::optional<SemiClosedSet> boundary_noncompact;  // noncompact ∂K
    bool tail_is_halfspace = false;  // K \ U ≅ H^n: ∞ joins the boundary
    std::vector<PipelineChart> charts;
};

struct PipelineResult {
    PseudoSpace y;
    SemicompactSet kinf;     // K ∪ {∞} in Y
    SemicompactSet t_y;      // the boundary set used on Y
    std::vector<BuiltChart> charts;
    CeClosedSet y_touches;   // touches of K ∪ {∞} in Y
    CeClosedSet touches;     // projected touches of K in the base space
};

PipelineResult noncompact_pipeline(const PipelineInput& in);

}  // namespace ctop
