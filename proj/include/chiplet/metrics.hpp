#pragma once

#include <cstdint>
#include <optional>

#include "chiplet/arrangement.hpp"
#include "chiplet/graph.hpp"

namespace chiplet {

struct DegreeStats {
    int min = 0;
    int max = 0;
    double avg = 0.0;
};

/// Limits of the Brickwall and HexaMesh closed forms relative to Grid as N
/// grows without bound.
struct AsymptoticRatios {
    double diam_bw_over_g = 0.0;
    double diam_hm_over_g = 0.0;
    double bis_bw_over_g = 0.0;
    double bis_hm_over_g = 0.0;
};

struct MetricsReport {
    int diameter_bfs = 0;
    std::optional<double> diameter_formula;
    std::optional<double> bisection_formula;
    std::optional<int> bisection_exact;
    int bisection_heuristic = 0;
    int min_deg = 0;
    int max_deg = 0;
    double avg_deg = 0.0;
};

inline constexpr int kExactBisectionLimit = 20;

/// Largest shortest-path hop count over all vertex pairs.
/// Throws Disconnected when some pair is unreachable.
int bfs_diameter(const AdjacencyGraph& g);

// Closed forms for regular arrangements. The unchecked variants evaluate the
// expression at any N (used for asymptotics); the checked ones throw
// NotRegular when `n` is not a regular count for `kind`.
double closed_form_diameter(ArrangementKind kind, double n);
double closed_form_bisection(ArrangementKind kind, double n);
double formula_diameter(ArrangementKind kind, int n);
double formula_bisection(ArrangementKind kind, int n);

AsymptoticRatios asymptotic_ratios() noexcept;

/// Minimum edge cut over all partitions with part sizes differing by at most
/// one, by enumeration. Throws TooLargeForExact above kExactBisectionLimit.
int exhaustive_bisection(const AdjacencyGraph& g);

/// Best balanced cut found by Kernighan-Lin refinement from `restarts`
/// random balanced starts. Restart i always draws from the same stream for a
/// given seed, so more restarts never give a worse result.
int heuristic_bisection(const AdjacencyGraph& g, int restarts, std::uint64_t seed);

/// Edge count crossing the partition `side` (0/1 per vertex).
int cut_size(const AdjacencyGraph& g, const std::vector<int>& side);

DegreeStats degree_stats(const AdjacencyGraph& g);

struct MetricsOptions {
    int restarts = 32;
    std::uint64_t seed = 1;
    int exact_limit = kExactBisectionLimit;
};

MetricsReport compute_metrics(const Arrangement& arr, const MetricsOptions& opts = {});

}  // namespace chiplet
