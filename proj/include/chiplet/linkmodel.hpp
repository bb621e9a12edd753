#pragma once

#include <optional>
#include <string>

namespace chiplet {

struct LinkParams {
    double bump_area_mm2 = 0.0;   // A_B, per link
    double bump_pitch_mm = 0.15;  // P_B
    int non_data_wires = 12;      // N_ndw
    double freq_ghz = 16.0;       // f
};

struct LinkBudget {
    int wires = 0;       // N_w
    int data_wires = 0;  // N_dw
    double bandwidth_gbps = 0.0;
};

/// Wires that fit a bump area on a regular (non-staggered) bump grid,
/// rounded down. Throws LinkInfeasible when no data wire remains.
LinkBudget link_bandwidth(const LinkParams& p);

/// Aggregate injection bandwidth of all endpoints, in Gb/s.
double full_global_bandwidth(int n, int endpoints_per_chiplet, double link_gbps);

inline constexpr double kDefaultLinkGapMm = 0.1;
inline constexpr double kLinkLengthWarnMm = 2.0;

/// Informational only: set when the worst-case link length 2 D_B + gap
/// exceeds 2 mm. The link frequency is never derived from it.
std::optional<std::string> link_length_warning(double bump_edge_dist_mm, double gap_mm = kDefaultLinkGapMm);

}  // namespace chiplet
