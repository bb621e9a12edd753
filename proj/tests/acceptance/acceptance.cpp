// Acceptance checks. Prints one PASS/FAIL line per criterion, with indented
// detail lines above it, and exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "chiplet/arrangement.hpp"
#include "chiplet/geometry.hpp"
#include "chiplet/linkmodel.hpp"
#include "chiplet/metrics.hpp"
#include "chiplet/simnet.hpp"
#include "chiplet/sweep.hpp"

using namespace chiplet;

namespace {

// Tolerances and budgets.
constexpr double kFormulaTol = 1e-12;
constexpr double kAsymptoticRelTol = 0.01;
constexpr double kAsymptoticN = 1e6;
constexpr double kResidualTol = 1e-9;
constexpr int kResidualPoints = 1000;
constexpr int kWireTol = 1;
constexpr double kZeroLoadRelTol = 0.10;
constexpr double kDrainFactor = 1.5;
constexpr double kHmLatencyReductionMin = 0.10;
constexpr double kHmLatencyReductionMax = 0.30;
constexpr double kHmThroughputMin = 1.15;
constexpr double kBwThroughputMin = 0.95;
constexpr int kHeuristicRestarts = 32;

constexpr ArrangementKind kKinds[] = {ArrangementKind::Grid, ArrangementKind::Brickwall, ArrangementKind::HexaMesh};

int g_failures = 0;

void detail(const char* fmt, auto... args) {
    std::printf("  ");
    std::printf(fmt, args...);
    std::printf("\n");
}

const char* name(ArrangementKind k) {
    switch (k) {
        case ArrangementKind::Grid: return "G";
        case ArrangementKind::Brickwall: return "BW";
        case ArrangementKind::HexaMesh: return "HM";
    }
    return "?";
}

void criterion(const char* title, double budget_s, const std::function<bool()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body();
    } catch (const std::exception& e) {
        detail("exception: %s", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget_s) {
        detail("runtime %.2f s exceeds budget %.0f s", secs, budget_s);
        ok = false;
    }
    if (!ok) ++g_failures;
    std::printf("%s %s (%.2f s)\n", ok ? "PASS" : "FAIL", title, secs);
    std::fflush(stdout);
}

bool near(double got, double want, double tol) { return std::abs(got - want) <= tol; }

bool formula_reproduction() {
    struct Spot {
        const char* what;
        double got, want;
    };
    const Spot spots[] = {
        {"diameter G 64", formula_diameter(ArrangementKind::Grid, 64), 14.0},
        {"diameter BW 9", formula_diameter(ArrangementKind::Brickwall, 9), 3.0},
        {"diameter HM 7", formula_diameter(ArrangementKind::HexaMesh, 7), 2.5},
        {"bisection HM 7", formula_bisection(ArrangementKind::HexaMesh, 7), 6.0},
        {"bisection G 49", formula_bisection(ArrangementKind::Grid, 49), 7.0},
        {"bisection BW 49", formula_bisection(ArrangementKind::Brickwall, 49), 13.0},
    };
    bool ok = true;
    for (const auto& s : spots) {
        const bool hit = near(s.got, s.want, kFormulaTol);
        detail("%-16s %.15g (want %g)%s", s.what, s.got, s.want, hit ? "" : "  MISMATCH");
        ok &= hit;
    }
    return ok;
}

bool graph_vs_formula() {
    bool ok = true;
    int checked = 0;
    for (auto kind : kKinds)
        for (int n = 1; n <= 100; ++n) {
            if (regularity_of(kind, n) != Regularity::Regular) continue;
            ++checked;
            const int bfs = bfs_diameter(build_arrangement(kind, n, 1.0, 1.0).graph);
            const double f = formula_diameter(kind, n);
            const double dev = bfs - f;
            const bool fine = kind == ArrangementKind::Grid ? dev == 0.0 : std::abs(dev) <= 1.0;
            if (dev != 0.0) detail("%s N=%d: bfs %d, formula %.4f (deviation %+.4f)", name(kind), n, bfs, f, dev);
            ok &= fine;
        }
    detail("%d regular instances checked", checked);
    return ok;
}

bool bisection_oracle() {
    bool ok = true;
    int graphs = 0;
    for (auto kind : kKinds)
        for (int n = 2; n <= kExactBisectionLimit; ++n) {
            const auto g = build_arrangement(kind, n, 1.0, 1.0).graph;
            if (!g.connected()) continue;
            ++graphs;
            const int exact = exhaustive_bisection(g);
            const int heur = heuristic_bisection(g, kHeuristicRestarts, 1);
            if (heur != exact) {
                detail("%s N=%d: heuristic %d != exhaustive %d", name(kind), n, heur, exact);
                ok = false;
            }
            if (regularity_of(kind, n) == Regularity::Regular) {
                const double f = formula_bisection(kind, n);
                detail("%s N=%d regular: exhaustive %d, formula %.4f -> %s", name(kind), n, exact, f,
                       near(exact, f, kFormulaTol) ? "agree" : "disagree");
            }
        }
    detail("heuristic (%d restarts) compared on %d arrangements", kHeuristicRestarts, graphs);
    return ok;
}

bool asymptotics() {
    const auto lim = asymptotic_ratios();
    const auto ratio = [](double (*f)(ArrangementKind, double), ArrangementKind k) {
        return f(k, kAsymptoticN) / f(ArrangementKind::Grid, kAsymptoticN);
    };
    struct Row {
        const char* what;
        double got, limit, claimed;
    };
    const Row rows[] = {
        {"diameter BW/G", ratio(closed_form_diameter, ArrangementKind::Brickwall), lim.diam_bw_over_g, 0.75},
        {"diameter HM/G", ratio(closed_form_diameter, ArrangementKind::HexaMesh), lim.diam_hm_over_g, 1 / std::sqrt(3.0)},
        {"bisection BW/G", ratio(closed_form_bisection, ArrangementKind::Brickwall), lim.bis_bw_over_g, 2.0},
        {"bisection HM/G", ratio(closed_form_bisection, ArrangementKind::HexaMesh), lim.bis_hm_over_g, 4 / std::sqrt(3.0)},
    };
    bool ok = true;
    for (const auto& r : rows) {
        const double rel = std::abs(r.got / r.claimed - 1.0);
        detail("%-15s at N=1e6: %.6f, limit %.6f (rel. diff %.2e)", r.what, r.got, r.claimed, rel);
        ok &= rel <= kAsymptoticRelTol && near(r.limit, r.claimed, 1e-15);
    }
    return ok;
}

bool shape_solver() {
    const auto s = solve_shape_brick(16.0, 0.4);
    const auto r2 = [](double v) { return std::round(v * 100.0) / 100.0; };
    detail("A_C=16, p_p=0.4: W_C=%.4f H_C=%.4f D_B=%.4f", s.chiplet_w_mm, s.chiplet_h_mm, s.bump_edge_dist_mm);
    bool ok = r2(s.chiplet_w_mm) == 4.38 && r2(s.chiplet_h_mm) == 3.65 && r2(s.bump_edge_dist_mm) == 0.73;

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> area(1.0, 900.0), pp(0.0, 0.9);
    double worst = 0.0;
    for (int i = 0; i < kResidualPoints; ++i) {
        const auto sol = solve_shape_brick(area(rng), pp(rng));
        const double L = *sol.link_sector_len_mm;
        const auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
        worst = std::max({worst, rel(sol.chiplet_h_mm, 2 * sol.bump_edge_dist_mm + L), rel(sol.chiplet_w_mm, 2 * L),
                          rel(sol.power_w_mm, sol.chiplet_w_mm - 2 * sol.bump_edge_dist_mm),
                          rel(sol.chiplet_w_mm * sol.chiplet_h_mm, sol.chiplet_area_mm2),
                          rel(sol.power_w_mm * L, sol.power_fraction * sol.chiplet_area_mm2)});
    }
    detail("max relative residual over %d points: %.3e", kResidualPoints, worst);
    return ok && worst <= kResidualTol;
}

bool link_model() {
    const auto s = solve_shape_brick(16.0, 0.4);
    const auto b = link_bandwidth({s.link_area_mm2, 0.15, 12, 16.0});
    detail("A_B=%.4f mm^2: N_w=%d N_dw=%d B=%.0f Gb/s", s.link_area_mm2, b.wires, b.data_wires, b.bandwidth_gbps);
    return std::abs(b.wires - 71) <= kWireTol && std::abs(b.data_wires - 59) <= kWireTol &&
           std::abs(b.bandwidth_gbps - 944.0) <= kWireTol * 16.0;
}

Arrangement reference_arrangement(ArrangementKind kind, int n) {
    const auto shape = shape_for(kind, chiplet_area(800.0, n), 0.4);
    return build_arrangement(kind, n, shape.chiplet_w_mm, shape.chiplet_h_mm);
}

bool simulator_invariants() {
    bool ok = true;
    const SimConfig base;
    for (int n : {16, 37, 64})
        for (auto kind : kKinds) {
            const auto arr = reference_arrangement(kind, n);
            SimConfig cfg = base;
            cfg.injection_rate = 0.005;
            const auto a = simulate(arr, cfg);
            const auto b = simulate(arr, cfg);
            const double zl = analytic_zero_load(arr, cfg);
            const double rel = a.avg_packet_latency_cycles / zl - 1.0;
            const bool conserved = a.drained && a.packets_created == a.packets_ejected && a.flits_created == a.flits_ejected;
            const bool credits = a.max_vc_occupancy <= cfg.buffer_flits_per_vc;
            const bool same = a.avg_packet_latency_cycles == b.avg_packet_latency_cycles &&
                              a.packets_created == b.packets_created && a.cycles_run == b.cycles_run;
            detail("%-2s N=%d zero-load: measured %.2f analytic %.2f (%+.2f%%)%s%s%s", name(kind), n,
                   a.avg_packet_latency_cycles, zl, 100 * rel, conserved ? "" : " LOST-PACKETS",
                   credits ? "" : " CREDIT-OVERFLOW", same ? "" : " NONDETERMINISTIC");
            ok &= std::abs(rel) <= kZeroLoadRelTol && conserved && credits && same;
        }
    for (auto kind : kKinds) {
        const auto arr = reference_arrangement(kind, 16);
        const auto sat = find_saturation(arr, base);
        SimConfig cfg = base;
        cfg.injection_rate = std::min(1.0, kDrainFactor * sat.sat_rate);
        const auto r = simulate(arr, cfg);
        const bool fine = r.drained && r.packets_created == r.packets_ejected &&
                          r.max_vc_occupancy <= cfg.buffer_flits_per_vc;
        detail("%-2s N=16 at %.2fx saturation (rate %.4f): drained=%d in %lld cycles, %lld/%lld packets, "
               "%lld via escape",
               name(kind), kDrainFactor, cfg.injection_rate, r.drained, r.cycles_run, r.packets_ejected,
               r.packets_created, r.escape_packets);
        ok &= fine;
    }
    return ok;
}

bool arrangement_trends() {
    bool ok = true;
    const SweepSpec spec;  // reference parameters, one seed
    for (int n : {37, 64}) {
        SweepRow row[3];
        for (int k = 0; k < 3; ++k) {
            row[k] = evaluate_point(kKinds[k], n, spec);
            if (!row[k].note.empty()) {
                detail("%s N=%d failed: %s", name(kKinds[k]), n, row[k].note.c_str());
                return false;
            }
            detail("%-2s N=%d: zero-load %.2f cycles, saturation %.4f, link %.0f Gb/s, %.2f Tb/s", name(kKinds[k]), n,
                   *row[k].zero_load_latency_cycles, *row[k].sat_fraction, *row[k].link_bw_gbps,
                   *row[k].sat_throughput_tbps);
        }
        const double lg = *row[0].zero_load_latency_cycles, lb = *row[1].zero_load_latency_cycles,
                     lh = *row[2].zero_load_latency_cycles;
        const double tg = *row[0].sat_throughput_tbps, tb = *row[1].sat_throughput_tbps,
                     th = *row[2].sat_throughput_tbps;
        const double reduction = 1.0 - lh / lg;
        const bool a = lh <= lb && lb <= lg;
        const bool b = reduction >= kHmLatencyReductionMin && reduction <= kHmLatencyReductionMax;
        const bool c = th >= kHmThroughputMin * tg;
        const bool d = tb >= kBwThroughputMin * tg;
        detail("N=%d (a) latency HM<=BW<=G: %s", n, a ? "yes" : "no");
        detail("N=%d (b) HM latency reduction %.1f%% in [%.0f%%, %.0f%%]: %s", n, 100 * reduction,
               100 * kHmLatencyReductionMin, 100 * kHmLatencyReductionMax, b ? "yes" : "no");
        detail("N=%d (c) HM/G throughput %.3f >= %.2f: %s", n, th / tg, kHmThroughputMin, c ? "yes" : "no");
        detail("N=%d (d) BW/G throughput %.3f >= %.2f: %s", n, tb / tg, kBwThroughputMin, d ? "yes" : "no");
        ok &= a && b && c && d;
    }
    return ok;
}

bool degree_properties() {
    bool ok = true;
    bool grid_deg1 = false;
    for (auto kind : kKinds)
        for (int n = 1; n <= 100; ++n) {
            const auto arr = build_arrangement(kind, n, 1.0, 1.0);
            const auto s = degree_stats(arr.graph);
            if (n >= 3 && s.avg > 6.0 - 12.0 / n + 1e-12) {
                detail("%s N=%d: average degree %.4f above planar bound", name(kind), n, s.avg);
                ok = false;
            }
            if (kind == ArrangementKind::HexaMesh && n >= 7 && arr.regularity == Regularity::Regular && s.min != 3) {
                detail("HM N=%d regular with min degree %d", n, s.min);
                ok = false;
            }
            if (kind == ArrangementKind::Grid && arr.regularity == Regularity::Irregular && s.min == 1) {
                if (!grid_deg1) detail("irregular G with min degree 1 first at N=%d", n);
                grid_deg1 = true;
            }
        }
    int hm_min = 99;
    for (int n = 8; n <= 100; ++n)
        if (regularity_of(ArrangementKind::HexaMesh, n) == Regularity::Irregular)
            hm_min = std::min(hm_min, degree_stats(build_hexamesh(n, 1.0, 1.0).graph).min);
    detail("lowest min degree among irregular HM (N=8..100): %d", hm_min);
    return ok && grid_deg1;
}

}  // namespace

int main() {
    criterion("Formula reproduction", 1, formula_reproduction);
    criterion("Graph-vs-formula", 5, graph_vs_formula);
    criterion("Bisection oracle", 30, bisection_oracle);
    criterion("Asymptotics", 1, asymptotics);
    criterion("Shape solver", 1, shape_solver);
    criterion("Link model", 1, link_model);
    criterion("Simulator invariants", 600, simulator_invariants);
    criterion("Arrangement trends", 1800, arrangement_trends);
    criterion("Degree properties", 5, degree_properties);
    std::printf("%d of 9 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
