#pragma once

#include <optional>

#include "chiplet/arrangement.hpp"

namespace chiplet {

/// Chiplet outline and bump-sector layout. All lengths in mm, areas in mm².
///
/// Grid chiplets are square with a square power sector in the middle
/// (power_w_mm == power_h_mm) and four link sectors. Brickwall and HexaMesh
/// chiplets have six link sectors; their power sector is described by
/// power_w_mm and link_sector_len_mm (L_B, half the chiplet width) and has no
/// separate height.
struct ShapeSolution {
    int links_per_chiplet = 0;
    double chiplet_w_mm = 0.0;
    double chiplet_h_mm = 0.0;
    double power_w_mm = 0.0;
    std::optional<double> power_h_mm;
    std::optional<double> link_sector_len_mm;
    double bump_edge_dist_mm = 0.0;
    double link_area_mm2 = 0.0;
    double chiplet_area_mm2 = 0.0;
    double power_fraction = 0.0;
};

ShapeSolution solve_shape_grid(double chiplet_area_mm2, double power_fraction);

/// Closed-form solution of the five-equation brick layout system
///   H_C = 2 D_B + L_B,  W_C = 2 L_B,  W_P = W_C - 2 D_B,
///   H_C W_C = A_C,      W_P L_B = p_p A_C.
/// Shared by Brickwall and HexaMesh.
ShapeSolution solve_shape_brick(double chiplet_area_mm2, double power_fraction);

ShapeSolution shape_for(ArrangementKind kind, double chiplet_area_mm2, double power_fraction);

double chiplet_area(double total_area_mm2, int n);

/// Relative residuals of the five brick-layout equations, in the order above.
struct BrickResiduals {
    double height = 0.0;
    double width = 0.0;
    double power_width = 0.0;
    double area = 0.0;
    double power_area = 0.0;

    double max() const;
};

BrickResiduals brick_residuals(const ShapeSolution& s);

}  // namespace chiplet
