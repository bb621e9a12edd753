#include "chiplet/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "chiplet/errors.hpp"

namespace chiplet {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void require_connected(const AdjacencyGraph& g) {
    if (!g.connected()) fail(ErrorCode::Disconnected, "graph is not connected");
}

void require_regular(ArrangementKind kind, int n) {
    if (n < 1 || regularity_of(kind, n) != Regularity::Regular) {
        fail(ErrorCode::NotRegular, std::string(to_string(kind)) + " with N=" + std::to_string(n) +
                                        " is not a regular arrangement");
    }
}

// One Kernighan-Lin refinement run to a local optimum. `side` is updated in
// place and stays balanced since every move is a pair swap.
void kernighan_lin(const AdjacencyGraph& g, const std::vector<char>& adjacent, std::vector<int>& side) {
    const int n = g.n_vertices();
    const auto w = [&](int a, int b) {
        return static_cast<int>(adjacent[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) +
                                         static_cast<std::size_t>(b)]);
    };
    std::vector<int> gain_d(static_cast<std::size_t>(n));
    std::vector<char> locked(static_cast<std::size_t>(n));
    std::vector<std::pair<int, int>> swaps;
    std::vector<int> step_gain;

    while (true) {
        for (int v = 0; v < n; ++v) {
            int external = 0;
            int internal = 0;
            for (int u : g.neighbors(v)) (side[static_cast<std::size_t>(u)] == side[static_cast<std::size_t>(v)] ? internal : external)++;
            gain_d[static_cast<std::size_t>(v)] = external - internal;
        }
        std::fill(locked.begin(), locked.end(), 0);
        swaps.clear();
        step_gain.clear();

        const int count_a = static_cast<int>(std::count(side.begin(), side.end(), 0));
        const int steps = std::min(count_a, n - count_a);
        for (int step = 0; step < steps; ++step) {
            int best = std::numeric_limits<int>::min();
            int best_a = -1;
            int best_b = -1;
            for (int a = 0; a < n; ++a) {
                if (locked[static_cast<std::size_t>(a)] || side[static_cast<std::size_t>(a)] != 0) continue;
                for (int b = 0; b < n; ++b) {
                    if (locked[static_cast<std::size_t>(b)] || side[static_cast<std::size_t>(b)] != 1) continue;
                    const int gain = gain_d[static_cast<std::size_t>(a)] + gain_d[static_cast<std::size_t>(b)] - 2 * w(a, b);
                    if (gain > best) {
                        best = gain;
                        best_a = a;
                        best_b = b;
                    }
                }
            }
            locked[static_cast<std::size_t>(best_a)] = 1;
            locked[static_cast<std::size_t>(best_b)] = 1;
            swaps.emplace_back(best_a, best_b);
            step_gain.push_back(best);
            for (int v = 0; v < n; ++v) {
                if (locked[static_cast<std::size_t>(v)]) continue;
                if (side[static_cast<std::size_t>(v)] == 0) {
                    gain_d[static_cast<std::size_t>(v)] += 2 * w(v, best_a) - 2 * w(v, best_b);
                } else {
                    gain_d[static_cast<std::size_t>(v)] += 2 * w(v, best_b) - 2 * w(v, best_a);
                }
            }
        }

        int best_prefix = 0;
        int best_k = 0;
        int running = 0;
        for (std::size_t k = 0; k < step_gain.size(); ++k) {
            running += step_gain[k];
            if (running > best_prefix) {
                best_prefix = running;
                best_k = static_cast<int>(k) + 1;
            }
        }
        if (best_prefix <= 0) return;
        for (int k = 0; k < best_k; ++k) {
            const auto [a, b] = swaps[static_cast<std::size_t>(k)];
            side[static_cast<std::size_t>(a)] = 1;
            side[static_cast<std::size_t>(b)] = 0;
        }
    }
}

}  // namespace

int bfs_diameter(const AdjacencyGraph& g) {
    require(g.n_vertices() >= 1, "graph has no vertices");
    int diameter = 0;
    for (int v = 0; v < g.n_vertices(); ++v) {
        for (int d : g.bfs_distances(v)) {
            if (d < 0) fail(ErrorCode::Disconnected, "graph is not connected");
            diameter = std::max(diameter, d);
        }
    }
    return diameter;
}

double closed_form_diameter(ArrangementKind kind, double n) {
    const double root = std::sqrt(n);
    switch (kind) {
        case ArrangementKind::Grid: return 2.0 * root - 2.0;
        case ArrangementKind::Brickwall: return 2.0 * root - 2.0 - std::floor((root - 1.0) / 2.0);
        case ArrangementKind::HexaMesh: return std::sqrt(12.0 * n - 3.0) / 3.0 - 0.5;
    }
    return 0.0;
}

double closed_form_bisection(ArrangementKind kind, double n) {
    switch (kind) {
        case ArrangementKind::Grid: return std::sqrt(n);
        case ArrangementKind::Brickwall: return 2.0 * std::sqrt(n) - 1.0;
        case ArrangementKind::HexaMesh: return 2.0 / 3.0 * std::sqrt(12.0 * n - 3.0);
    }
    return 0.0;
}

double formula_diameter(ArrangementKind kind, int n) {
    require_regular(kind, n);
    return closed_form_diameter(kind, static_cast<double>(n));
}

double formula_bisection(ArrangementKind kind, int n) {
    require_regular(kind, n);
    return closed_form_bisection(kind, static_cast<double>(n));
}

AsymptoticRatios asymptotic_ratios() noexcept {
    const double sqrt3 = std::sqrt(3.0);
    return {0.75, 1.0 / sqrt3, 2.0, 4.0 / sqrt3};
}

int cut_size(const AdjacencyGraph& g, const std::vector<int>& side) {
    int cut = 0;
    for (const auto& [a, b] : g.edges()) {
        if (side[static_cast<std::size_t>(a)] != side[static_cast<std::size_t>(b)]) ++cut;
    }
    return cut;
}

int exhaustive_bisection(const AdjacencyGraph& g) {
    const int n = g.n_vertices();
    require(n >= 1, "graph has no vertices");
    if (n > kExactBisectionLimit) {
        fail(ErrorCode::TooLargeForExact,
             "n=" + std::to_string(n) + " exceeds " + std::to_string(kExactBisectionLimit));
    }
    require_connected(g);

    std::vector<std::uint32_t> adj_mask(static_cast<std::size_t>(n), 0);
    for (const auto& [a, b] : g.edges()) {
        adj_mask[static_cast<std::size_t>(a)] |= 1u << b;
        adj_mask[static_cast<std::size_t>(b)] |= 1u << a;
    }

    const int k = n / 2;
    const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
    if (k == 0) return 0;

    int best = std::numeric_limits<int>::max();
    // Gosper's hack walks every k-subset of the n vertices in order.
    std::uint32_t subset = (1u << k) - 1u;
    while (subset <= full) {
        int cut = 0;
        for (std::uint32_t rest = subset; rest != 0; rest &= rest - 1) {
            const int v = std::countr_zero(rest);
            cut += std::popcount(adj_mask[static_cast<std::size_t>(v)] & ~subset & full);
        }
        best = std::min(best, cut);
        const std::uint32_t low = subset & (~subset + 1u);
        const std::uint32_t ripple = subset + low;
        if (ripple == 0 || ripple > full) break;
        subset = (((ripple ^ subset) >> 2) / low) | ripple;
    }
    return best;
}

int heuristic_bisection(const AdjacencyGraph& g, int restarts, std::uint64_t seed) {
    const int n = g.n_vertices();
    require(n >= 1, "graph has no vertices");
    require(restarts >= 1, "restarts must be >= 1");
    require_connected(g);
    if (n == 1) return 0;

    std::vector<char> adjacent(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for (const auto& [a, b] : g.edges()) {
        adjacent[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)] = 1;
        adjacent[static_cast<std::size_t>(b) * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)] = 1;
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::vector<int> side(static_cast<std::size_t>(n));
    int best = std::numeric_limits<int>::max();
    for (int restart = 0; restart < restarts; ++restart) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(restart))));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (int i = 0; i < n; ++i) side[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = (i < n / 2) ? 0 : 1;
        kernighan_lin(g, adjacent, side);
        best = std::min(best, cut_size(g, side));
    }
    return best;
}

DegreeStats degree_stats(const AdjacencyGraph& g) {
    const int n = g.n_vertices();
    if (n == 0) return {};
    DegreeStats stats{g.degree(0), g.degree(0), 0.0};
    for (int v = 1; v < n; ++v) {
        stats.min = std::min(stats.min, g.degree(v));
        stats.max = std::max(stats.max, g.degree(v));
    }
    stats.avg = 2.0 * static_cast<double>(g.n_edges()) / n;
    return stats;
}

MetricsReport compute_metrics(const Arrangement& arr, const MetricsOptions& opts) {
    MetricsReport report;
    report.diameter_bfs = bfs_diameter(arr.graph);
    if (arr.regularity == Regularity::Regular) {
        report.diameter_formula = formula_diameter(arr.kind, arr.n);
        report.bisection_formula = formula_bisection(arr.kind, arr.n);
    }
    if (arr.n <= std::min(opts.exact_limit, kExactBisectionLimit)) {
        report.bisection_exact = exhaustive_bisection(arr.graph);
    }
    report.bisection_heuristic = heuristic_bisection(arr.graph, opts.restarts, opts.seed);
    const DegreeStats deg = degree_stats(arr.graph);
    report.min_deg = deg.min;
    report.max_deg = deg.max;
    report.avg_deg = deg.avg;
    return report;
}

}  // namespace chiplet
