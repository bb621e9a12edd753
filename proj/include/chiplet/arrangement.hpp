#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chiplet/graph.hpp"

namespace chiplet {

// Honeycomb has no kind of its own: its graph is the Brickwall graph.
enum class ArrangementKind { Grid, Brickwall, HexaMesh };

enum class Regularity { Regular, SemiRegular, Irregular };

std::string_view to_string(ArrangementKind kind) noexcept;
std::string_view to_string(Regularity regularity) noexcept;

/// Accepts "grid"/"g", "brickwall"/"bw", "honeycomb"/"hc" (mapped to
/// Brickwall) and "hexamesh"/"hm", case-insensitive.
ArrangementKind parse_kind(std::string_view text);
Regularity parse_regularity(std::string_view text);

/// One chiplet: lower-left corner and size in mm. `lattice` is (row, col)
/// for Grid and Brickwall and axial (q, r) for HexaMesh.
struct ChipletPlacement {
    int id = 0;
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
    std::pair<int, int> lattice{0, 0};

    friend bool operator==(const ChipletPlacement&, const ChipletPlacement&) = default;
};

struct Arrangement {
    ArrangementKind kind = ArrangementKind::Grid;
    int n = 0;
    Regularity regularity = Regularity::Regular;
    std::vector<ChipletPlacement> placements;
    AdjacencyGraph graph;
};

/// Rows x columns used by Grid and Brickwall for a given chiplet count.
/// The last row may be partial (`last_row` < `cols`) for irregular counts.
struct RowLayout {
    int rows = 0;
    int cols = 0;
    int last_row = 0;
    Regularity regularity = Regularity::Regular;
};

RowLayout row_layout(int n);

/// Ring count r of the largest regular HexaMesh core with 1 + 3r(r+1) <= n.
int hexamesh_core_rings(int n);
constexpr int hexamesh_count(int rings) { return 1 + 3 * rings * (rings + 1); }

Regularity regularity_of(ArrangementKind kind, int n);

// Geometric tolerance (mm) for shared-edge and overlap tests.
inline constexpr double kAdjacencyEpsilon = 1e-6;

/// Edge (a, b) iff the rectangles share a boundary segment longer than
/// kAdjacencyEpsilon. Throws OverlappingPlacements on interior overlap.
AdjacencyGraph adjacency_from_placements(const std::vector<ChipletPlacement>& placements);

Arrangement build_grid(int n, double chiplet_w, double chiplet_h);
Arrangement build_brickwall(int n, double chiplet_w, double chiplet_h);
Arrangement build_hexamesh(int n, double chiplet_w, double chiplet_h);
Arrangement build_arrangement(ArrangementKind kind, int n, double chiplet_w, double chiplet_h);

}  // namespace chiplet
