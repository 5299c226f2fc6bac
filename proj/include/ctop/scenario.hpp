#pragma once

#include "ctop/charts.hpp"
#include "ctop/pseudo.hpp"
#include "ctop/sets.hpp"
#include "ctop/shapes.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ctop {

// A finite union of shapes; the sets the scenario streams describe.
struct ShapeSet {
    std::vector<Shape> parts;
};

struct StreamOptions {
    int coarsest_tier = 0;  // base cells of size 2^-tier; negative allowed
    int plain_tiers = 4;    // uniform-grid tiers emitted as element lists
    int window_levels = 3;  // telescoping refinement levels
    int max_code_elements = 18;  // single-code covers above this are skipped
};

// Canonical element-list covers: uniform grids plus telescoping windows
// (rings two tiers apart closing in on a center), all sound by construction,
// interleaved with a sweep lane certified by subdivision.
Emitter<std::vector<Code>> element_cover_stream(const MetricSpace& space, const ShapeSet& set,
                                                StreamOptions opts);
Emitter<Code> cover_stream(const MetricSpace& space, const ShapeSet& set, StreamOptions opts);
Emitter<Code> touch_stream(const MetricSpace& space, const ShapeSet& set);

SemicompactSet semicompact_of(const MetricSpace& space, const ShapeSet& set, StreamOptions opts);
LocatedCompact located_of(const MetricSpace& space, const ShapeSet& set, StreamOptions opts);
ComputableSet computable_of(const MetricSpace& space, const ShapeSet& set, StreamOptions opts);
SemiClosedSet semiclosed_of(const MetricSpace& space, const ShapeSet& set, StreamOptions opts);

// Subsets of the pseudocompactification: finite-or-unbounded parts plus
// optionally the point at infinity.
struct YShapeSet {
    std::vector<Shape> parts;
    bool with_infinity = false;
};

Emitter<std::vector<Code>> yelement_cover_stream(const PseudoSpace& y, const YShapeSet& set,
                                                 StreamOptions opts);
Emitter<Code> ycover_stream(const PseudoSpace& y, const YShapeSet& set, StreamOptions opts);
Emitter<Code> ytouch_stream(const PseudoSpace& y, const YShapeSet& set);
SemicompactSet ysemicompact_of(const PseudoSpace& y, const YShapeSet& set, StreamOptions opts);
LocatedCompact ylocated_of(const PseudoSpace& y, const YShapeSet& set, StreamOptions opts);

// ---------------------------------------------------------------------------
// Scenario descriptors (shape-level; streams are built on demand).

struct ChartShapes {
    ChartKind kind = ChartKind::interior;
    int dimension = 1;
    ShapeSet exterior, big, core;
    std::vector<ShapeSet> side_c, side_b, side_d, side_a;
};

struct YChartShapes {
    ChartKind kind = ChartKind::boundary;
    int dimension = 1;
    YShapeSet exterior, big, core;
    std::vector<YShapeSet> side_c, side_b, side_d, side_a;
};

struct Budgets {
    Fuel witness_fuel = 1u << 18;
    Fuel omega_fuel = 1u << 14;
    Fuel stream_fuel = 1u << 16;
    Fuel approx_fuel = 1u << 18;
    Fuel pipeline_fuel = 1u << 15;
};

struct Scenario {
    std::string name;
    MetricSpace space{1, MetricKind::linf_exact};
    ShapeSet set;
    bool compact = true;
    std::vector<ChartShapes> charts;
    std::optional<ShapeSet> boundary;
    bool tail_is_halfspace = false;  // noncompact: K \ U ≅ H^n
    std::vector<YChartShapes> ycharts;
    Budgets budgets;
    std::uint64_t seed = 1;
    StreamOptions stream_opts;
};

ChartPieces pieces_of(const MetricSpace& space, const ChartShapes& cs, StreamOptions opts);
PipelineChart ypieces_of(const PseudoSpace& y, const YChartShapes& cs, StreamOptions opts);

// Built-in families (also reachable through scenario files).
Scenario circle_scenario();
Scenario segment_scenario();
Scenario square_scenario();  // square-as-disk: boundary charts in dimension 2
Scenario ray_scenario();
Scenario box_scenario();     // compact box in Q^2 (lift tests)
Scenario strip_scenario();   // half-infinite strip (stretch demo)

// Scenario file loading; throws std::invalid_argument with a path-annotated
// message on schema violations.
Scenario load_scenario(const std::string& path);

}  // namespace ctop
