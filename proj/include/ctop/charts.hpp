#pragma once

#include "ctop/sets.hpp"
#include "ctop/topology.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace ctop {

enum class ChartKind { interior, boundary };

// The finitely many compact images a chart contributes. For an interior chart
// in dimension n all four side families have n members; a boundary chart has
// n C/B sides but only n-1 D/A sides (the bottom face is handled through the
// boundary set).
struct ChartPieces {
    int dimension = 1;
    SemicompactSet exterior;  // contains S minus the open chart image, misses `big`
    LocatedCompact big;       // the middle cube image
    std::vector<LocatedCompact> side_c, side_b;
    std::vector<LocatedCompact> side_d, side_a;
};

struct InteriorChartWitness {
    Code m0;
    Code m0_big;  // the paired separation witness for the big side
    std::vector<Code> c, d;
};

struct BoundaryChartWitness {
    Code m0;
    Code m0_big;
    std::vector<Code> c;  // size n
    std::vector<Code> d;  // size n-1
    SemicompactSet boundary_rest;  // T' = T \ J_{m0}
};

InteriorChartWitness build_interior_witness(const CTopSpace& top, const SemicompactSet& s,
                                            const ChartPieces& pieces);
BoundaryChartWitness build_boundary_witness(const CTopSpace& top, const SemicompactSet& s,
                                            const SemicompactSet& t, const ChartPieces& pieces);

// Progress counters exposed to the driver.
struct OmegaStats {
    std::uint64_t covers_tried = 0;
    std::uint64_t assignments_tried = 0;
    std::uint64_t confirmed = 0;
};

// The per-chart witness search: a fuel-monotone semi-decider in (l, fuel)
// whose confirmations certify I_l ∩ S ≠ ∅. Internally resumable and
// memoized per l; safe to share across threads.
class OmegaSearch {
  public:
    OmegaSearch(CTopSpace top, SemicompactSet s_prime, InteriorChartWitness w);
    OmegaSearch(CTopSpace top, SemicompactSet s_prime, BoundaryChartWitness w);

    SemiDecision operator()(const Code& l, Fuel fuel) const;
    OmegaStats stats() const;

    ChartKind kind() const;

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

SemiDecision omega_interior(const CTopSpace& top, const SemicompactSet& s_prime,
                            const InteriorChartWitness& w, const Code& l, Fuel fuel);
SemiDecision omega_boundary(const CTopSpace& top, const SemicompactSet& s_prime,
                            const BoundaryChartWitness& w, const Code& l, Fuel fuel);

struct BuiltChart {
    ChartKind kind = ChartKind::interior;
    OmegaSearch omega;
    SemicompactSet s_prime;
};

BuiltChart build_chart(const CTopSpace& top, const SemicompactSet& s, ChartKind kind,
                       const ChartPieces& pieces,
                       const std::optional<SemicompactSet>& boundary);

// Touch enumerator assembled from the charts' omega searches: the fair merge
// of the per-chart confirmation streams, with a priority lane that feeds the
// elements of enumerated covers of S through the searches first.
CeClosedSet upgrade_to_ce(const CTopSpace& top, const SemicompactSet& s,
                          const std::vector<BuiltChart>& charts);

ComputableSet make_computable(const CTopSpace& top, const SemicompactSet& s,
                              const std::optional<SemicompactSet>& boundary,
                              const std::vector<BuiltChart>& charts);

}  // namespace ctop
