#include "chiplet/linkmodel.hpp"

#include <cmath>
#include <sstream>

#include "chiplet/errors.hpp"

namespace chiplet {

LinkBudget link_bandwidth(const LinkParams& p) {
    require(p.bump_area_mm2 > 0.0, "bump area must be positive");
    require(p.bump_pitch_mm > 0.0, "bump pitch must be positive");
    require(p.non_data_wires >= 0, "non-data wire count must be >= 0");
    require(p.freq_ghz > 0.0, "link frequency must be positive");

    // Absorb rounding in A_B / P_B^2 when the quotient is an exact integer.
    const double exact = p.bump_area_mm2 / (p.bump_pitch_mm * p.bump_pitch_mm);
    LinkBudget budget;
    budget.wires = static_cast<int>(std::floor(exact * (1.0 + 1e-12)));
    budget.data_wires = budget.wires - p.non_data_wires;
    if (budget.data_wires <= 0) {
        fail(ErrorCode::LinkInfeasible, "only " + std::to_string(budget.wires) + " wires fit, " +
                                            std::to_string(p.non_data_wires) + " needed for control");
    }
    budget.bandwidth_gbps = budget.data_wires * p.freq_ghz;
    return budget;
}

double full_global_bandwidth(int n, int endpoints_per_chiplet, double link_gbps) {
    require(n >= 1 && endpoints_per_chiplet >= 1 && link_gbps > 0.0, "inputs must be positive");
    return static_cast<double>(n) * endpoints_per_chiplet * link_gbps;
}

std::optional<std::string> link_length_warning(double bump_edge_dist_mm, double gap_mm) {
    const double length = 2.0 * bump_edge_dist_mm + gap_mm;
    if (length <= kLinkLengthWarnMm) return std::nullopt;
    std::ostringstream msg;
    msg << "link length bound " << length << " mm exceeds " << kLinkLengthWarnMm << " mm";
    return msg.str();
}

}  // namespace chiplet
