#include "chiplet/arrangement.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "chiplet/errors.hpp"

namespace chiplet {

namespace {

int isqrt(int n) {
    int s = static_cast<int>(std::sqrt(static_cast<double>(n)));
    while (s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
}

void check_inputs(int n, double w, double h) {
    require(n >= 1, "chiplet count must be >= 1");
    require(w > 0.0 && h > 0.0 && std::isfinite(w) && std::isfinite(h),
            "chiplet width and height must be positive");
}

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Rows of chiplets; odd rows shifted right by `odd_row_shift` widths.
Arrangement build_rows(ArrangementKind kind, int n, double w, double h, double odd_row_shift) {
    check_inputs(n, w, h);
    const RowLayout layout = row_layout(n);
    Arrangement arr;
    arr.kind = kind;
    arr.n = n;
    arr.regularity = layout.regularity;
    arr.placements.reserve(static_cast<std::size_t>(n));
    for (int row = 0; row < layout.rows; ++row) {
        const int width = (row == layout.rows - 1) ? layout.last_row : layout.cols;
        const double shift = (row % 2 == 1) ? odd_row_shift * w : 0.0;
        for (int col = 0; col < width; ++col) {
            ChipletPlacement p;
            p.id = static_cast<int>(arr.placements.size());
            p.x = col * w + shift;
            p.y = row * h;
            p.w = w;
            p.h = h;
            p.lattice = {row, col};
            arr.placements.push_back(p);
        }
    }
    arr.graph = adjacency_from_placements(arr.placements);
    return arr;
}

// Axial steps walking a hexagonal ring clockwise (y up) from its east corner.
constexpr std::array<std::pair<int, int>, 6> kClockwiseSteps{{
    {0, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 0}, {1, -1},
}};

std::vector<std::pair<int, int>> hex_ring(int radius) {
    if (radius == 0) return {{0, 0}};
    std::vector<std::pair<int, int>> cells;
    cells.reserve(static_cast<std::size_t>(6 * radius));
    int q = radius;
    int r = 0;
    for (const auto& [dq, dr] : kClockwiseSteps) {
        for (int step = 0; step < radius; ++step) {
            cells.emplace_back(q, r);
            q += dq;
            r += dr;
        }
    }
    return cells;
}

}  // namespace

std::string_view to_string(ArrangementKind kind) noexcept {
    switch (kind) {
        case ArrangementKind::Grid: return "grid";
        case ArrangementKind::Brickwall: return "brickwall";
        case ArrangementKind::HexaMesh: return "hexamesh";
    }
    return "unknown";
}

std::string_view to_string(Regularity regularity) noexcept {
    switch (regularity) {
        case Regularity::Regular: return "regular";
        case Regularity::SemiRegular: return "semi-regular";
        case Regularity::Irregular: return "irregular";
    }
    return "unknown";
}

ArrangementKind parse_kind(std::string_view text) {
    const std::string s = lower(text);
    if (s == "grid" || s == "g") return ArrangementKind::Grid;
    if (s == "brickwall" || s == "bw" || s == "honeycomb" || s == "hc") return ArrangementKind::Brickwall;
    if (s == "hexamesh" || s == "hm") return ArrangementKind::HexaMesh;
    fail(ErrorCode::InvalidArgument, "unknown arrangement kind '" + std::string(text) + "'");
}

Regularity parse_regularity(std::string_view text) {
    const std::string s = lower(text);
    if (s == "regular") return Regularity::Regular;
    if (s == "semi-regular" || s == "semiregular") return Regularity::SemiRegular;
    if (s == "irregular") return Regularity::Irregular;
    fail(ErrorCode::InvalidArgument, "unknown regularity '" + std::string(text) + "'");
}

RowLayout row_layout(int n) {
    require(n >= 1, "chiplet count must be >= 1");
    const int root = isqrt(n);
    if (root * root == n) return {root, root, root, Regularity::Regular};

    // The divisor closest to sqrt(n) gives the most balanced R x C.
    for (int rows = root; rows >= 2; --rows) {
        if (n % rows != 0) continue;
        const int cols = n / rows;
        if (cols - rows <= 2) return {rows, cols, cols, Regularity::SemiRegular};
        break;
    }

    const int cols = root + 1;  // ceil(sqrt(n)) for non-squares
    const int full_rows = n / cols;
    const int rest = n % cols;
    return {full_rows + (rest > 0 ? 1 : 0), cols, rest > 0 ? rest : cols, Regularity::Irregular};
}

int hexamesh_core_rings(int n) {
    require(n >= 1, "chiplet count must be >= 1");
    int rings = 0;
    while (hexamesh_count(rings + 1) <= n) ++rings;
    return rings;
}

Regularity regularity_of(ArrangementKind kind, int n) {
    require(n >= 1, "chiplet count must be >= 1");
    if (kind == ArrangementKind::HexaMesh) {
        return hexamesh_count(hexamesh_core_rings(n)) == n ? Regularity::Regular : Regularity::Irregular;
    }
    return row_layout(n).regularity;
}

AdjacencyGraph adjacency_from_placements(const std::vector<ChipletPlacement>& placements) {
    const double eps = kAdjacencyEpsilon;
    const int n = static_cast<int>(placements.size());
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        const auto& a = placements[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) {
            const auto& b = placements[static_cast<std::size_t>(j)];
            const double overlap_x = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
            const double overlap_y = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
            if (overlap_x > eps && overlap_y > eps) {
                fail(ErrorCode::OverlappingPlacements,
                     "chiplets " + std::to_string(a.id) + " and " + std::to_string(b.id) + " overlap");
            }
            // Touching along x (vertical shared edge) or along y (horizontal).
            const bool vertical_contact = std::abs(overlap_x) <= eps && overlap_y > eps;
            const bool horizontal_contact = std::abs(overlap_y) <= eps && overlap_x > eps;
            if (vertical_contact || horizontal_contact) edges.emplace_back(a.id, b.id);
        }
    }
    return AdjacencyGraph(n, std::move(edges));
}

Arrangement build_grid(int n, double chiplet_w, double chiplet_h) {
    return build_rows(ArrangementKind::Grid, n, chiplet_w, chiplet_h, 0.0);
}

Arrangement build_brickwall(int n, double chiplet_w, double chiplet_h) {
    return build_rows(ArrangementKind::Brickwall, n, chiplet_w, chiplet_h, 0.5);
}

Arrangement build_hexamesh(int n, double chiplet_w, double chiplet_h) {
    check_inputs(n, chiplet_w, chiplet_h);
    const int core = hexamesh_core_rings(n);

    std::vector<std::pair<int, int>> cells;
    cells.reserve(static_cast<std::size_t>(n));
    for (int radius = 0; static_cast<int>(cells.size()) < n; ++radius) {
        for (const auto& cell : hex_ring(radius)) {
            if (static_cast<int>(cells.size()) == n) break;
            cells.push_back(cell);
        }
    }

    // Ids run row by row (bottom to top, west to east) as for Grid and
    // Brickwall; ring order only decides which cells are occupied.
    std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });

    // Cell (q, r) is centered at x = (q + r/2) w, y = r h. Work in half
    // widths so the lattice arithmetic stays integral.
    int min_half = 0;
    int min_row = 0;
    for (const auto& [q, r] : cells) {
        min_half = std::min(min_half, 2 * q + r - 1);
        min_row = std::min(min_row, r);
    }

    Arrangement arr;
    arr.kind = ArrangementKind::HexaMesh;
    arr.n = n;
    arr.regularity = hexamesh_count(core) == n ? Regularity::Regular : Regularity::Irregular;
    arr.placements.reserve(cells.size());
    for (const auto& [q, r] : cells) {
        ChipletPlacement p;
        p.id = static_cast<int>(arr.placements.size());
        p.x = (2 * q + r - 1 - min_half) * (chiplet_w / 2.0);
        p.y = (r - min_row) * chiplet_h;
        p.w = chiplet_w;
        p.h = chiplet_h;
        p.lattice = {q, r};
        arr.placements.push_back(p);
    }
    arr.graph = adjacency_from_placements(arr.placements);
    return arr;
}

Arrangement build_arrangement(ArrangementKind kind, int n, double chiplet_w, double chiplet_h) {
    switch (kind) {
        case ArrangementKind::Grid: return build_grid(n, chiplet_w, chiplet_h);
        case ArrangementKind::Brickwall: return build_brickwall(n, chiplet_w, chiplet_h);
        case ArrangementKind::HexaMesh: return build_hexamesh(n, chiplet_w, chiplet_h);
    }
    fail(ErrorCode::InvalidArgument, "unknown arrangement kind");
}

}  // namespace chiplet
