#include "chiplet/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "chiplet/errors.hpp"

namespace chiplet {

namespace {

void check_shape_inputs(double area, double p_p) {
    require(area > 0.0 && std::isfinite(area), "chiplet area must be positive");
    require(p_p >= 0.0, "power fraction must be >= 0");
    if (p_p >= 1.0) fail(ErrorCode::NoLinkArea, "power fraction >= 1 leaves no area for link bumps");
}

double rel(double lhs, double rhs) {
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return std::abs(lhs - rhs) / scale;
}

}  // namespace

ShapeSolution solve_shape_grid(double chiplet_area_mm2, double power_fraction) {
    check_shape_inputs(chiplet_area_mm2, power_fraction);
    ShapeSolution s;
    s.links_per_chiplet = 4;
    s.chiplet_area_mm2 = chiplet_area_mm2;
    s.power_fraction = power_fraction;
    s.chiplet_w_mm = std::sqrt(chiplet_area_mm2);
    s.chiplet_h_mm = s.chiplet_w_mm;
    s.power_w_mm = std::sqrt(power_fraction * chiplet_area_mm2);
    s.power_h_mm = s.power_w_mm;
    s.link_area_mm2 = 0.25 * (1.0 - power_fraction) * chiplet_area_mm2;
    s.bump_edge_dist_mm = (s.chiplet_w_mm - s.power_w_mm) / 2.0;
    return s;
}

ShapeSolution solve_shape_brick(double chiplet_area_mm2, double power_fraction) {
    check_shape_inputs(chiplet_area_mm2, power_fraction);
    const double a = chiplet_area_mm2;
    const double p = power_fraction;
    ShapeSolution s;
    s.links_per_chiplet = 6;
    s.chiplet_area_mm2 = a;
    s.power_fraction = p;
    s.chiplet_w_mm = std::sqrt(a * (2.0 + 4.0 * p) / 3.0);
    s.chiplet_h_mm = a / s.chiplet_w_mm;
    s.bump_edge_dist_mm = (1.0 - p) * a / std::sqrt(a * (6.0 + 12.0 * p));
    s.link_sector_len_mm = s.chiplet_w_mm / 2.0;
    s.power_w_mm = s.chiplet_w_mm - 2.0 * s.bump_edge_dist_mm;
    s.link_area_mm2 = (1.0 - p) * a / 6.0;
    return s;
}

ShapeSolution shape_for(ArrangementKind kind, double chiplet_area_mm2, double power_fraction) {
    if (kind == ArrangementKind::Grid) return solve_shape_grid(chiplet_area_mm2, power_fraction);
    return solve_shape_brick(chiplet_area_mm2, power_fraction);
}

double chiplet_area(double total_area_mm2, int n) {
    require(total_area_mm2 > 0.0, "total area must be positive");
    require(n >= 1, "chiplet count must be >= 1");
    return total_area_mm2 / n;
}

double BrickResiduals::max() const {
    return std::max({height, width, power_width, area, power_area});
}

BrickResiduals brick_residuals(const ShapeSolution& s) {
    const double len = s.link_sector_len_mm.value_or(0.0);
    return {
        rel(s.chiplet_h_mm, 2.0 * s.bump_edge_dist_mm + len),
        rel(s.chiplet_w_mm, 2.0 * len),
        rel(s.power_w_mm, s.chiplet_w_mm - 2.0 * s.bump_edge_dist_mm),
        rel(s.chiplet_h_mm * s.chiplet_w_mm, s.chiplet_area_mm2),
        rel(s.power_w_mm * len, s.chiplet_area_mm2 * s.power_fraction),
    };
}

}  // namespace chiplet
