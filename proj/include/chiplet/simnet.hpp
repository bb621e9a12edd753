#pragma once

#include <cstdint>
#include <vector>

#include "chiplet/arrangement.hpp"
#include "chiplet/graph.hpp"

namespace chiplet {

/// Simulation parameters. Rates are flits per cycle per endpoint, so 1.0 is
/// the full injection bandwidth of an endpoint.
struct SimConfig {
    int link_latency_cycles = 27;  // outgoing PHY + D2D link + incoming PHY
    int router_latency_cycles = 3;
    int num_vcs = 8;               // VC 0 is the escape channel
    int buffer_flits_per_vc = 8;
    int endpoints_per_chiplet = 2;
    int packet_len_flits = 4;
    int warmup_cycles = 10'000;
    int measure_cycles = 50'000;
    int drain_cycles = 200'000;    // cap on the drain phase
    int escape_after_cycles = 64;  // blocked head moves to the escape VC
    std::uint64_t seed = 1;
    double injection_rate = 0.005;

    void validate() const;
};

/// Next-hop tables indexed [current * n + destination]. Minimal routes take
/// the smallest-id neighbor on a shortest path; escape routes follow the BFS
/// spanning tree rooted at vertex 0 (up toward the root, then down).
struct RoutingTables {
    int n = 0;
    std::vector<int> dist;
    std::vector<int> next_hop;
    std::vector<int> escape_next;
    std::vector<int> tree_parent;

    int distance(int from, int to) const { return dist[index(from, to)]; }
    int next(int from, int to) const { return next_hop[index(from, to)]; }
    int escape(int from, int to) const { return escape_next[index(from, to)]; }

private:
    std::size_t index(int from, int to) const {
        return static_cast<std::size_t>(from) * static_cast<std::size_t>(n) + static_cast<std::size_t>(to);
    }
};

RoutingTables compute_routes(const AdjacencyGraph& g);

struct SimResult {
    double avg_packet_latency_cycles = 0.0;
    double accepted_rate = 0.0;  // measured-window flits delivered in the window
    double offered_rate = 0.0;   // measured-window flits generated
    double injection_rate = 0.0; // configured Bernoulli rate
    bool saturated = false;
    long long packets_measured = 0;

    // Diagnostics used by the invariant checks.
    bool drained = false;
    long long cycles_run = 0;
    long long packets_created = 0;
    long long packets_ejected = 0;
    long long flits_created = 0;
    long long flits_ejected = 0;
    long long escape_packets = 0;
    int max_vc_occupancy = 0;
};

/// Runs warmup, measurement and drain. Never throws on saturation; see
/// `drained` and `saturated`.
SimResult simulate(const Arrangement& arr, const SimConfig& cfg);

/// As simulate(), but throws Error(Saturated) when the drain phase hits its
/// cycle cap with packets still in flight.
SimResult run(const Arrangement& arr, const SimConfig& cfg);

/// Mean hop count over ordered endpoint pairs times (link + router latency),
/// plus the final router and serialization of the remaining flits.
double analytic_zero_load(const Arrangement& arr, const SimConfig& cfg);

struct SaturationProbe {
    double rate = 0.0;
    bool passed = false;
    SimResult result;
};

struct SaturationResult {
    double sat_rate = 0.0;
    double sat_fraction = 0.0;
    std::vector<SaturationProbe> probes;
};

struct SaturationOptions {
    double start_rate = 0.02;
    int bisection_steps = 6;
    double latency_factor = 3.0;
    double acceptance_floor = 0.95;
};

/// Largest injection rate whose run stays under latency_factor x analytic
/// zero-load latency while delivering acceptance_floor of the offered load.
SaturationResult find_saturation(const Arrangement& arr, const SimConfig& cfg,
                                 const SaturationOptions& opts = {});

double throughput_tbps(double sat_fraction, int n, int endpoints_per_chiplet, double link_gbps);

}  // namespace chiplet
