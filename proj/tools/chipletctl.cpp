// chipletctl: generate, analyze and simulate chiplet arrangements, and run
// parameter sweeps over the chiplet count.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chiplet/arrangement.hpp"
#include "chiplet/errors.hpp"
#include "chiplet/geometry.hpp"
#include "chiplet/linkmodel.hpp"
#include "chiplet/metrics.hpp"
#include "chiplet/serialize.hpp"
#include "chiplet/simnet.hpp"
#include "chiplet/sweep.hpp"

namespace {

using chiplet::ArrangementKind;
using chiplet::ErrorCode;
using nlohmann::json;

constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

struct Globals {
    std::uint64_t seed = 1;
    bool json = false;
    std::string out;
    std::string config;
};

// Model parameters shared by generate/analyze/simulate. Values given on the
// command line win over the config file, which wins over the defaults.
struct ModelFlags {
    std::string kind = "grid";
    int n = 0;
    std::optional<double> area;
    std::optional<double> pp;
    std::optional<double> pitch;
    std::optional<int> ndw;
    std::optional<double> freq;
    std::optional<int> restarts;

    void add_to(CLI::App* cmd, bool needs_link) {
        cmd->add_option("-k,--kind", kind, "grid | brickwall | hexamesh (or g, bw, hm)")->required();
        cmd->add_option("-n,--n", n, "number of chiplets")->required()->check(CLI::PositiveNumber);
        cmd->add_option("--area", area, "total chiplet area A_all in mm^2");
        cmd->add_option("--pp", pp, "power/ground bump fraction p_p");
        if (needs_link) {
            cmd->add_option("--pitch", pitch, "bump pitch P_B in mm");
            cmd->add_option("--ndw", ndw, "non-data wires per link N_ndw");
            cmd->add_option("--freq", freq, "link frequency in GHz");
            cmd->add_option("--restarts", restarts, "bisection heuristic restarts");
        }
    }

    void apply(chiplet::SweepSpec& spec) const {
        if (area) spec.total_area_mm2 = *area;
        if (pp) spec.power_fraction = *pp;
        if (pitch) spec.bump_pitch_mm = *pitch;
        if (ndw) spec.non_data_wires = *ndw;
        if (freq) spec.freq_ghz = *freq;
        if (restarts) spec.restarts = *restarts;
    }
};

struct SimFlags {
    std::optional<int> warmup, measure, drain, vcs, buffers, link_latency, router_latency, packet_len, endpoints;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--warmup", warmup, "warmup cycles");
        cmd->add_option("--measure", measure, "measurement cycles");
        cmd->add_option("--drain", drain, "cap on drain cycles");
        cmd->add_option("--vcs", vcs, "virtual channels per port");
        cmd->add_option("--buffers", buffers, "flit buffers per virtual channel");
        cmd->add_option("--link-latency", link_latency, "PHY plus link latency in cycles");
        cmd->add_option("--router-latency", router_latency, "router pipeline latency in cycles");
        cmd->add_option("--packet-len", packet_len, "flits per packet");
        cmd->add_option("--endpoints", endpoints, "endpoints per chiplet");
    }

    void apply(chiplet::SimConfig& c) const {
        if (warmup) c.warmup_cycles = *warmup;
        if (measure) c.measure_cycles = *measure;
        if (drain) c.drain_cycles = *drain;
        if (vcs) c.num_vcs = *vcs;
        if (buffers) c.buffer_flits_per_vc = *buffers;
        if (link_latency) c.link_latency_cycles = *link_latency;
        if (router_latency) c.router_latency_cycles = *router_latency;
        if (packet_len) c.packet_len_flits = *packet_len;
        if (endpoints) c.endpoints_per_chiplet = *endpoints;
    }
};

chiplet::SweepSpec load_base_spec(const Globals& g, const CLI::App& app) {
    chiplet::SweepSpec spec;
    if (!g.config.empty()) {
        std::ifstream in(g.config);
        if (!in) chiplet::fail(ErrorCode::Io, "cannot read config file " + g.config);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            chiplet::fail(ErrorCode::InvalidArgument, std::string("config file is not valid JSON: ") + e.what());
        }
        from_json(j, spec);
    }
    if (app.count("--seed") > 0 || g.config.empty()) spec.seed = g.seed;
    return spec;
}

// Writes to --out when given, else stdout. The file is replaced only after
// the full text is written.
void emit(const Globals& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    const std::string tmp = g.out + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) chiplet::fail(ErrorCode::Io, "cannot write " + g.out);
        f << text;
        if (!f.flush()) chiplet::fail(ErrorCode::Io, "cannot write " + g.out);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, g.out, ec);
    if (ec) chiplet::fail(ErrorCode::Io, "cannot write " + g.out + ": " + ec.message());
}

std::vector<chiplet::SweepRow> read_rows(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) chiplet::fail(ErrorCode::Io, "cannot read " + path);
    return chiplet::read_sweep_csv(in);
}

json rows_to_json(const std::vector<chiplet::SweepRow>& rows) {
    // Keys follow the CSV column names; absent values are omitted.
    json out = json::array();
    const auto& cols = chiplet::sweep_columns();
    for (const auto& r : rows) {
        json obj;
        obj["kind"] = std::string(chiplet::to_string(r.kind));
        obj["n"] = r.n;
        obj["regularity"] = std::string(chiplet::to_string(r.regularity));
        auto put = [&](const std::string& key, const auto& v) {
            if (v) obj[key] = *v;
        };
        put(cols[3], r.diameter_bfs);
        put(cols[4], r.diameter_formula);
        put(cols[5], r.bisection_formula);
        put(cols[6], r.bisection_heuristic);
        put(cols[7], r.min_deg);
        put(cols[8], r.avg_deg);
        put(cols[9], r.chiplet_area_mm2);
        put(cols[10], r.chiplet_w_mm);
        put(cols[11], r.chiplet_h_mm);
        put(cols[12], r.bump_edge_dist_mm);
        put(cols[13], r.link_area_mm2);
        put(cols[14], r.wires);
        put(cols[15], r.data_wires);
        put(cols[16], r.link_bw_gbps);
        put(cols[17], r.zero_load_latency_cycles);
        put(cols[18], r.sat_fraction);
        put(cols[19], r.sat_throughput_tbps);
        if (!r.note.empty()) obj["note"] = r.note;
        out.push_back(std::move(obj));
    }
    return out;
}

chiplet::Arrangement build_from(const chiplet::SweepSpec& spec, ArrangementKind kind, int n,
                                chiplet::ShapeSolution* shape_out = nullptr) {
    const auto shape = chiplet::shape_for(kind, chiplet::chiplet_area(spec.total_area_mm2, n), spec.power_fraction);
    if (shape_out) *shape_out = shape;
    return chiplet::build_arrangement(kind, n, shape.chiplet_w_mm, shape.chiplet_h_mm);
}

int cmd_generate(const Globals& g, const CLI::App& app, const ModelFlags& m) {
    auto spec = load_base_spec(g, app);
    m.apply(spec);
    const auto arr = build_from(spec, chiplet::parse_kind(m.kind), m.n);
    emit(g, json(arr).dump(2) + "\n");
    return 0;
}

int cmd_analyze(const Globals& g, const CLI::App& app, const ModelFlags& m) {
    auto spec = load_base_spec(g, app);
    m.apply(spec);
    const ArrangementKind kind = chiplet::parse_kind(m.kind);
    chiplet::ShapeSolution shape;
    const auto arr = build_from(spec, kind, m.n, &shape);
    chiplet::MetricsOptions mopts;
    mopts.restarts = spec.restarts;
    mopts.seed = spec.seed;
    const auto metrics = chiplet::compute_metrics(arr, mopts);

    json j{{"kind", std::string(chiplet::to_string(kind))},
           {"n", m.n},
           {"regularity", std::string(chiplet::to_string(arr.regularity))},
           {"metrics", metrics},
           {"shape", shape}};
    const chiplet::LinkParams params{shape.link_area_mm2, spec.bump_pitch_mm, spec.non_data_wires, spec.freq_ghz};
    j["link_params"] = params;
    j["link"] = chiplet::link_bandwidth(params);
    if (auto warn = chiplet::link_length_warning(shape.bump_edge_dist_mm)) j["warning"] = *warn;

    if (g.json) {
        emit(g, j.dump(2) + "\n");
        return 0;
    }
    std::ostringstream text;
    text << "kind " << j["kind"].get<std::string>() << ", n " << m.n << " (" << j["regularity"].get<std::string>()
         << ")\n";
    for (const auto& section : {"metrics", "shape", "link"})
        for (const auto& [key, value] : j[section].items())
            text << "  " << key << " = "
                 << (value.is_number_float() ? chiplet::format_real(value.get<double>()) : value.dump()) << "\n";
    if (j.contains("warning")) text << "warning: " << j["warning"].get<std::string>() << "\n";
    emit(g, text.str());
    return 0;
}

int cmd_simulate(const Globals& g, const CLI::App& app, const ModelFlags& m, const SimFlags& s,
                 std::optional<double> rate, bool saturation) {
    auto spec = load_base_spec(g, app);
    m.apply(spec);
    chiplet::SimConfig cfg = spec.sim;
    s.apply(cfg);
    cfg.seed = spec.seed;
    if (rate) cfg.injection_rate = *rate;
    const ArrangementKind kind = chiplet::parse_kind(m.kind);
    const auto arr = build_from(spec, kind, m.n);

    json j{{"kind", std::string(chiplet::to_string(kind))},
           {"n", m.n},
           {"config", cfg},
           {"analytic_zero_load_cycles", chiplet::analytic_zero_load(arr, cfg)}};
    std::ostringstream text;
    text << "kind " << chiplet::to_string(kind) << ", n " << m.n << "\n";
    text << "  analytic zero-load latency = " << chiplet::format_real(j["analytic_zero_load_cycles"].get<double>())
         << " cycles\n";
    if (saturation) {
        const auto sat = chiplet::find_saturation(arr, cfg);
        j["saturation"] = sat;
        text << "  saturation rate = " << chiplet::format_real(sat.sat_rate) << " flits/cycle/endpoint\n";
        for (const auto& p : sat.probes)
            text << "    probe " << chiplet::format_real(p.rate) << (p.passed ? " pass" : " fail") << ", latency "
                 << chiplet::format_real(p.result.avg_packet_latency_cycles) << ", accepted "
                 << chiplet::format_real(p.result.accepted_rate) << "\n";
    } else {
        const auto r = chiplet::simulate(arr, cfg);
        j["result"] = r;
        text << "  injection rate = " << chiplet::format_real(r.injection_rate) << "\n"
             << "  avg packet latency = " << chiplet::format_real(r.avg_packet_latency_cycles) << " cycles\n"
             << "  offered = " << chiplet::format_real(r.offered_rate)
             << ", accepted = " << chiplet::format_real(r.accepted_rate) << "\n"
             << "  packets measured = " << r.packets_measured << (r.saturated ? ", saturated" : "") << "\n";
    }
    emit(g, g.json ? j.dump(2) + "\n" : text.str());
    return 0;
}

struct SweepFlags {
    std::vector<std::string> kinds;
    std::optional<int> n_min, n_max, seeds, jobs;
    std::optional<double> zero_load_rate;
    bool no_sim = false;
    bool resume = false;
};

int cmd_sweep(const Globals& g, const CLI::App& app, const ModelFlags& m, const SimFlags& s, const SweepFlags& f) {
    auto spec = load_base_spec(g, app);
    m.apply(spec);
    s.apply(spec.sim);
    if (!f.kinds.empty()) {
        spec.kinds.clear();
        for (const auto& k : f.kinds) spec.kinds.push_back(chiplet::parse_kind(k));
    }
    if (f.n_min) spec.n_min = *f.n_min;
    if (f.n_max) spec.n_max = *f.n_max;
    if (f.seeds) spec.seeds = *f.seeds;
    if (f.jobs) spec.jobs = *f.jobs;
    if (f.zero_load_rate) spec.zero_load_rate = *f.zero_load_rate;
    if (f.no_sim) spec.simulate = false;
    if (!g.out.empty()) spec.output = g.out;
    spec.validate();

    std::vector<chiplet::SweepRow> existing;
    if (f.resume) {
        if (spec.output.empty()) chiplet::fail(ErrorCode::InvalidArgument, "--resume needs an output file");
        if (std::filesystem::exists(spec.output)) existing = read_rows(spec.output);
    }

    if (g.json) {
        const auto rows = chiplet::run_sweep(spec, existing);
        Globals to{g};
        to.out = spec.output;
        emit(to, rows_to_json(rows).dump(2) + "\n");
        return 0;
    }
    if (spec.output.empty()) {
        chiplet::write_sweep_csv(std::cout, {});
        chiplet::run_sweep(spec, existing, [](const chiplet::SweepRow& r) {
            std::ostringstream one;
            chiplet::write_sweep_csv(one, {r});
            const std::string text = one.str();
            std::cout << text.substr(text.find('\n') + 1) << std::flush;
        });
        return 0;
    }
    // Rows are appended as they complete so an interrupted sweep can resume.
    std::ofstream file(spec.output, std::ios::binary | std::ios::trunc);
    if (!file) chiplet::fail(ErrorCode::Io, "cannot write " + spec.output);
    chiplet::write_sweep_csv(file, {});
    file.flush();
    chiplet::run_sweep(spec, existing, [&](const chiplet::SweepRow& r) {
        std::ostringstream one;
        chiplet::write_sweep_csv(one, {r});
        const std::string text = one.str();
        file << text.substr(text.find('\n') + 1);
        if (!file.flush()) chiplet::fail(ErrorCode::Io, "cannot write " + spec.output);
    });
    return 0;
}

int cmd_compare(const Globals& g, const std::string& input) {
    const auto ratios = chiplet::compare_to_grid(read_rows(input));
    if (!g.json) {
        std::ostringstream csv;
        chiplet::write_compare_csv(csv, ratios);
        emit(g, csv.str());
        return 0;
    }
    json out = json::array();
    for (const auto& r : ratios) {
        json obj{{"n", r.n}, {"kind", std::string(chiplet::to_string(r.kind))}};
        if (r.latency_ratio) obj["latency_ratio"] = *r.latency_ratio;
        if (r.throughput_ratio) obj["throughput_ratio"] = *r.throughput_ratio;
        out.push_back(std::move(obj));
    }
    emit(g, out.dump(2) + "\n");
    return 0;
}

int cmd_plot(const Globals& g, const std::string& input) {
    emit(g, chiplet::render_sweep_svg(read_rows(input)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate, analyze and simulate 2.5D chiplet arrangements"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "seed for simulation and the bisection heuristic");
    app.add_flag("--json", g.json, "emit JSON instead of text or CSV");
    app.add_option("--out", g.out, "output file (default: stdout)");
    app.add_option("--config", g.config, "JSON sweep configuration; flags override its values")
        ->check(CLI::ExistingFile);

    ModelFlags gen_m, ana_m, sim_m, sweep_m;
    SimFlags sim_s, sweep_s;
    SweepFlags sweep_f;
    std::optional<double> rate;
    bool saturation = false;
    std::string compare_in, plot_in;

    auto* gen = app.add_subcommand("generate", "emit an arrangement as JSON");
    gen_m.add_to(gen, false);

    auto* ana = app.add_subcommand("analyze", "proxies, chiplet shape and link budget");
    ana_m.add_to(ana, true);

    auto* sim = app.add_subcommand("simulate", "cycle-level simulation of uniform random traffic");
    sim_m.add_to(sim, false);
    sim_s.add_to(sim);
    sim->add_option("--rate", rate, "injection rate in flits/cycle/endpoint");
    sim->add_flag("--saturation", saturation, "search for the saturation rate instead");

    auto* sweep = app.add_subcommand("sweep", "evaluate every kind over a range of chiplet counts");
    sweep->add_option("--kinds", sweep_f.kinds, "arrangement kinds")->delimiter(',');
    sweep->add_option("--n-min", sweep_f.n_min, "smallest chiplet count");
    sweep->add_option("--n-max", sweep_f.n_max, "largest chiplet count");
    sweep->add_option("--area", sweep_m.area, "total chiplet area A_all in mm^2");
    sweep->add_option("--pp", sweep_m.pp, "power/ground bump fraction p_p");
    sweep->add_option("--pitch", sweep_m.pitch, "bump pitch P_B in mm");
    sweep->add_option("--ndw", sweep_m.ndw, "non-data wires per link N_ndw");
    sweep->add_option("--freq", sweep_m.freq, "link frequency in GHz");
    sweep->add_option("--restarts", sweep_m.restarts, "bisection heuristic restarts");
    sweep->add_option("--seeds", sweep_f.seeds, "simulation seeds averaged per point");
    sweep->add_option("--jobs", sweep_f.jobs, "worker threads (0: all cores)");
    sweep->add_option("--zero-load-rate", sweep_f.zero_load_rate, "injection rate of the zero-load run");
    sweep->add_flag("--no-sim", sweep_f.no_sim, "skip simulation columns");
    sweep->add_flag("--resume", sweep_f.resume, "keep rows already present in --out");
    sweep_s.add_to(sweep);

    auto* cmp = app.add_subcommand("compare", "latency and throughput relative to Grid per chiplet count");
    cmp->add_option("input", compare_in, "sweep CSV")->required()->check(CLI::ExistingFile);

    auto* plot = app.add_subcommand("plot", "SVG line charts of a sweep CSV");
    plot->add_option("input", plot_in, "sweep CSV")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*gen) return cmd_generate(g, app, gen_m);
        if (*ana) return cmd_analyze(g, app, ana_m);
        if (*sim) return cmd_simulate(g, app, sim_m, sim_s, rate, saturation);
        if (*sweep) return cmd_sweep(g, app, sweep_m, sweep_s, sweep_f);
        if (*cmp) return cmd_compare(g, compare_in);
        if (*plot) return cmd_plot(g, plot_in);
    } catch (const chiplet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: bad JSON input: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
