#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "chiplet/arrangement.hpp"
#include "chiplet/simnet.hpp"

namespace chiplet {

/// One experiment over chiplet counts [n_min, n_max] for each kind. Defaults
/// are the reference evaluation parameters.
struct SweepSpec {
    std::vector<ArrangementKind> kinds{ArrangementKind::Grid, ArrangementKind::Brickwall, ArrangementKind::HexaMesh};
    int n_min = 2;
    int n_max = 100;
    double total_area_mm2 = 800.0;
    double power_fraction = 0.4;
    double bump_pitch_mm = 0.15;
    int non_data_wires = 12;
    double freq_ghz = 16.0;
    SimConfig sim;
    bool simulate = true;
    int seeds = 1;
    double zero_load_rate = 0.005;
    int restarts = 32;
    std::uint64_t seed = 1;
    int jobs = 0;  // 0: one worker per hardware thread
    std::string output;

    void validate() const;
};

void from_json(const nlohmann::json& j, SweepSpec& spec);
void to_json(nlohmann::json& j, const SweepSpec& spec);

struct SweepRow {
    ArrangementKind kind = ArrangementKind::Grid;
    int n = 0;
    Regularity regularity = Regularity::Regular;
    std::optional<int> diameter_bfs;
    std::optional<double> diameter_formula;
    std::optional<double> bisection_formula;
    std::optional<int> bisection_heuristic;
    std::optional<int> min_deg;
    std::optional<double> avg_deg;
    std::optional<double> chiplet_area_mm2;
    std::optional<double> chiplet_w_mm;
    std::optional<double> chiplet_h_mm;
    std::optional<double> bump_edge_dist_mm;
    std::optional<double> link_area_mm2;
    std::optional<int> wires;
    std::optional<int> data_wires;
    std::optional<double> link_bw_gbps;
    std::optional<double> zero_load_latency_cycles;
    std::optional<double> sat_fraction;
    std::optional<double> sat_throughput_tbps;
    std::string note;
};

/// Evaluates one (kind, n) point. Model errors (e.g. LinkInfeasible) are
/// recorded in `note`; the fields computed before the failure are kept.
SweepRow evaluate_point(ArrangementKind kind, int n, const SweepSpec& spec);

/// Evaluates every missing (kind, n) point on a worker pool and returns rows
/// ordered by (kind as listed in spec.kinds, n). Rows in `existing` whose
/// (kind, n) fall in the sweep are reused instead of recomputed. `on_row`, if
/// set, sees each row once, in output order, as soon as it and all rows
/// before it are done.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const std::vector<SweepRow>& existing = {},
                                const std::function<void(const SweepRow&)>& on_row = {});

// CSV with a fixed column order; reals printed with 6 significant digits,
// absent optionals as empty cells.
const std::vector<std::string>& sweep_columns();
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);
std::string format_real(double value);

struct CompareRow {
    int n = 0;
    ArrangementKind kind = ArrangementKind::Grid;
    std::optional<double> latency_ratio;
    std::optional<double> throughput_ratio;
};

/// Latency and throughput of every row relative to the Grid row with the
/// same n. Throws MissingBaseline when a count has no Grid row.
std::vector<CompareRow> compare_to_grid(const std::vector<SweepRow>& rows);
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);

/// Four line charts (latency, throughput, and both relative to Grid) over n.
std::string render_sweep_svg(const std::vector<SweepRow>& rows);

}  // namespace chiplet
