#include "chiplet/serialize.hpp"

#include "chiplet/errors.hpp"

namespace chiplet {

namespace {

double no_negative_zero(double value) { return value + 0.0; }

}  // namespace

void to_json(json& j, const ChipletPlacement& p) {
    j = json{{"id", p.id},
             {"x", no_negative_zero(p.x)},
             {"y", no_negative_zero(p.y)},
             {"w", no_negative_zero(p.w)},
             {"h", no_negative_zero(p.h)},
             {"lattice", {p.lattice.first, p.lattice.second}}};
}

void to_json(json& j, const Arrangement& arr) {
    json edges = json::array();
    for (const auto& [a, b] : arr.graph.edges()) edges.push_back({a, b});
    j = json{{"kind", to_string(arr.kind)},
             {"n", arr.n},
             {"regularity", to_string(arr.regularity)},
             {"placements", arr.placements},
             {"edges", std::move(edges)}};
}

void to_json(json& j, const MetricsReport& m) {
    j = json{{"diameter_bfs", m.diameter_bfs},
             {"bisection_heuristic", m.bisection_heuristic},
             {"min_deg", m.min_deg},
             {"max_deg", m.max_deg},
             {"avg_deg", m.avg_deg}};
    if (m.diameter_formula) j["diameter_formula"] = *m.diameter_formula;
    if (m.bisection_formula) j["bisection_formula"] = *m.bisection_formula;
    if (m.bisection_exact) j["bisection_exact"] = *m.bisection_exact;
}

void to_json(json& j, const ShapeSolution& s) {
    j = json{{"links_per_chiplet", s.links_per_chiplet},
             {"chiplet_w_mm", s.chiplet_w_mm},
             {"chiplet_h_mm", s.chiplet_h_mm},
             {"power_w_mm", s.power_w_mm},
             {"bump_edge_dist_mm", s.bump_edge_dist_mm},
             {"link_area_mm2", s.link_area_mm2},
             {"chiplet_area_mm2", s.chiplet_area_mm2},
             {"power_fraction", s.power_fraction}};
    if (s.power_h_mm) j["power_h_mm"] = *s.power_h_mm;
    if (s.link_sector_len_mm) j["link_sector_len_mm"] = *s.link_sector_len_mm;
}

void to_json(json& j, const LinkParams& p) {
    j = json{{"bump_area_mm2", p.bump_area_mm2},
             {"bump_pitch_mm", p.bump_pitch_mm},
             {"non_data_wires", p.non_data_wires},
             {"freq_ghz", p.freq_ghz}};
}

void from_json(const json& j, LinkParams& p) {
    p.bump_area_mm2 = j.value("bump_area_mm2", p.bump_area_mm2);
    p.bump_pitch_mm = j.value("bump_pitch_mm", p.bump_pitch_mm);
    p.non_data_wires = j.value("non_data_wires", p.non_data_wires);
    p.freq_ghz = j.value("freq_ghz", p.freq_ghz);
}

void to_json(json& j, const LinkBudget& b) {
    j = json{{"wires", b.wires}, {"data_wires", b.data_wires}, {"bandwidth_gbps", b.bandwidth_gbps}};
}

void to_json(json& j, const SimConfig& c) {
    j = json{{"link_latency_cycles", c.link_latency_cycles},
             {"router_latency_cycles", c.router_latency_cycles},
             {"num_vcs", c.num_vcs},
             {"buffer_flits_per_vc", c.buffer_flits_per_vc},
             {"endpoints_per_chiplet", c.endpoints_per_chiplet},
             {"packet_len_flits", c.packet_len_flits},
             {"warmup_cycles", c.warmup_cycles},
             {"measure_cycles", c.measure_cycles},
             {"drain_cycles", c.drain_cycles},
             {"escape_after_cycles", c.escape_after_cycles},
             {"seed", c.seed},
             {"injection_rate", c.injection_rate}};
}

void from_json(const json& j, SimConfig& c) {
    c.link_latency_cycles = j.value("link_latency_cycles", c.link_latency_cycles);
    c.router_latency_cycles = j.value("router_latency_cycles", c.router_latency_cycles);
    c.num_vcs = j.value("num_vcs", c.num_vcs);
    c.buffer_flits_per_vc = j.value("buffer_flits_per_vc", c.buffer_flits_per_vc);
    c.endpoints_per_chiplet = j.value("endpoints_per_chiplet", c.endpoints_per_chiplet);
    c.packet_len_flits = j.value("packet_len_flits", c.packet_len_flits);
    c.warmup_cycles = j.value("warmup_cycles", c.warmup_cycles);
    c.measure_cycles = j.value("measure_cycles", c.measure_cycles);
    c.drain_cycles = j.value("drain_cycles", c.drain_cycles);
    c.escape_after_cycles = j.value("escape_after_cycles", c.escape_after_cycles);
    c.seed = j.value("seed", c.seed);
    c.injection_rate = j.value("injection_rate", c.injection_rate);
}

void to_json(json& j, const SimResult& r) {
    j = json{{"avg_packet_latency_cycles", r.avg_packet_latency_cycles},
             {"accepted_rate", r.accepted_rate},
             {"offered_rate", r.offered_rate},
             {"injection_rate", r.injection_rate},
             {"saturated", r.saturated},
             {"packets_measured", r.packets_measured},
             {"drained", r.drained},
             {"cycles_run", r.cycles_run},
             {"packets_created", r.packets_created},
             {"packets_ejected", r.packets_ejected},
             {"escape_packets", r.escape_packets},
             {"max_vc_occupancy", r.max_vc_occupancy}};
}

void to_json(json& j, const SaturationResult& s) {
    json probes = json::array();
    for (const auto& p : s.probes) {
        probes.push_back({{"rate", p.rate},
                          {"passed", p.passed},
                          {"avg_packet_latency_cycles", p.result.avg_packet_latency_cycles},
                          {"accepted_rate", p.result.accepted_rate},
                          {"offered_rate", p.result.offered_rate},
                          {"drained", p.result.drained}});
    }
    j = json{{"sat_rate", s.sat_rate}, {"sat_fraction", s.sat_fraction}, {"probes", std::move(probes)}};
}

Arrangement arrangement_from_json(const json& j) {
    try {
        Arrangement arr;
        arr.kind = parse_kind(j.at("kind").get<std::string>());
        arr.n = j.at("n").get<int>();
        arr.regularity = parse_regularity(j.at("regularity").get<std::string>());
        for (const auto& item : j.at("placements")) {
            ChipletPlacement p;
            p.id = item.at("id").get<int>();
            p.x = item.at("x").get<double>();
            p.y = item.at("y").get<double>();
            p.w = item.at("w").get<double>();
            p.h = item.at("h").get<double>();
            if (item.contains("lattice")) p.lattice = {item["lattice"].at(0).get<int>(), item["lattice"].at(1).get<int>()};
            require(p.id == static_cast<int>(arr.placements.size()), "placement ids must be 0..n-1 in order");
            arr.placements.push_back(p);
        }
        require(static_cast<int>(arr.placements.size()) == arr.n, "placement count does not match n");
        arr.graph = adjacency_from_placements(arr.placements);
        if (j.contains("edges")) {
            std::vector<Edge> edges;
            for (const auto& e : j["edges"]) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
            require(AdjacencyGraph(arr.n, std::move(edges)) == arr.graph,
                    "edge list does not match the placement geometry");
        }
        return arr;
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("malformed arrangement JSON: ") + e.what());
    }
}

}  // namespace chiplet
