#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "chiplet/arrangement.hpp"
#include "chiplet/errors.hpp"
#include "chiplet/geometry.hpp"
#include "chiplet/linkmodel.hpp"
#include "chiplet/metrics.hpp"
#include "chiplet/serialize.hpp"
#include "chiplet/simnet.hpp"
#include "chiplet/sweep.hpp"

namespace py = pybind11;
using namespace chiplet;

namespace {

ArrangementKind kind_arg(const py::object& kind) {
    if (py::isinstance<py::str>(kind)) return parse_kind(kind.cast<std::string>());
    return kind.cast<ArrangementKind>();
}

py::dict row_dict(const SweepRow& r) {
    py::dict d;
    d["kind"] = std::string(to_string(r.kind));
    d["n"] = r.n;
    d["regularity"] = std::string(to_string(r.regularity));
    d["diameter_bfs"] = r.diameter_bfs;
    d["diameter_formula"] = r.diameter_formula;
    d["bisection_formula"] = r.bisection_formula;
    d["bisection_heuristic"] = r.bisection_heuristic;
    d["min_deg"] = r.min_deg;
    d["avg_deg"] = r.avg_deg;
    d["A_C"] = r.chiplet_area_mm2;
    d["W_C"] = r.chiplet_w_mm;
    d["H_C"] = r.chiplet_h_mm;
    d["D_B"] = r.bump_edge_dist_mm;
    d["A_B"] = r.link_area_mm2;
    d["N_w"] = r.wires;
    d["N_dw"] = r.data_wires;
    d["link_bw_gbps"] = r.link_bw_gbps;
    d["zero_load_latency_cycles"] = r.zero_load_latency_cycles;
    d["sat_fraction"] = r.sat_fraction;
    d["sat_throughput_tbps"] = r.sat_throughput_tbps;
    d["note"] = r.note;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Chiplet arrangement generation, analysis and interconnect simulation";

    static py::exception<Error> chiplet_error(m, "ChipletError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object err = py::reinterpret_borrow<py::object>(chiplet_error)(e.what());
            err.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(chiplet_error.ptr(), err.ptr());
        }
    });

    py::enum_<ArrangementKind>(m, "ArrangementKind")
        .value("Grid", ArrangementKind::Grid)
        .value("Brickwall", ArrangementKind::Brickwall)
        .value("HexaMesh", ArrangementKind::HexaMesh);
    py::enum_<Regularity>(m, "Regularity")
        .value("Regular", Regularity::Regular)
        .value("SemiRegular", Regularity::SemiRegular)
        .value("Irregular", Regularity::Irregular);

    py::class_<ChipletPlacement>(m, "ChipletPlacement")
        .def_readonly("id", &ChipletPlacement::id)
        .def_readonly("x", &ChipletPlacement::x)
        .def_readonly("y", &ChipletPlacement::y)
        .def_readonly("w", &ChipletPlacement::w)
        .def_readonly("h", &ChipletPlacement::h)
        .def_readonly("lattice", &ChipletPlacement::lattice);

    py::class_<Arrangement>(m, "Arrangement")
        .def_readonly("kind", &Arrangement::kind)
        .def_readonly("n", &Arrangement::n)
        .def_readonly("regularity", &Arrangement::regularity)
        .def_readonly("placements", &Arrangement::placements)
        .def_property_readonly("edges", [](const Arrangement& a) { return a.graph.edges(); })
        .def("neighbors", [](const Arrangement& a, int v) {
            require(v >= 0 && v < a.n, "vertex out of range");
            auto span = a.graph.neighbors(v);
            return std::vector<int>(span.begin(), span.end());
        })
        .def("to_json", [](const Arrangement& a) { return json(a).dump(); });

    m.def("build_arrangement",
          [](const py::object& kind, int n, double w, double h) { return build_arrangement(kind_arg(kind), n, w, h); },
          py::arg("kind"), py::arg("n"), py::arg("chiplet_w") = 1.0, py::arg("chiplet_h") = 1.0);
    m.def("arrangement_from_json", [](const std::string& text) { return arrangement_from_json(json::parse(text)); });

    py::class_<MetricsReport>(m, "MetricsReport")
        .def_readonly("diameter_bfs", &MetricsReport::diameter_bfs)
        .def_readonly("diameter_formula", &MetricsReport::diameter_formula)
        .def_readonly("bisection_formula", &MetricsReport::bisection_formula)
        .def_readonly("bisection_exact", &MetricsReport::bisection_exact)
        .def_readonly("bisection_heuristic", &MetricsReport::bisection_heuristic)
        .def_readonly("min_deg", &MetricsReport::min_deg)
        .def_readonly("max_deg", &MetricsReport::max_deg)
        .def_readonly("avg_deg", &MetricsReport::avg_deg);

    m.def(
        "compute_metrics",
        [](const Arrangement& a, int restarts, std::uint64_t seed, int exact_limit) {
            return compute_metrics(a, MetricsOptions{restarts, seed, exact_limit});
        },
        py::arg("arrangement"), py::arg("restarts") = 32, py::arg("seed") = 1,
        py::arg("exact_limit") = kExactBisectionLimit);
    m.def("formula_diameter", [](const py::object& kind, int n) { return formula_diameter(kind_arg(kind), n); });
    m.def("formula_bisection", [](const py::object& kind, int n) { return formula_bisection(kind_arg(kind), n); });
    m.def("exhaustive_bisection", [](const Arrangement& a) { return exhaustive_bisection(a.graph); });
    m.def(
        "heuristic_bisection",
        [](const Arrangement& a, int restarts, std::uint64_t seed) { return heuristic_bisection(a.graph, restarts, seed); },
        py::arg("arrangement"), py::arg("restarts") = 32, py::arg("seed") = 1);
    m.def("asymptotic_ratios", [] {
        const auto r = asymptotic_ratios();
        py::dict d;
        d["diam_bw_over_g"] = r.diam_bw_over_g;
        d["diam_hm_over_g"] = r.diam_hm_over_g;
        d["bis_bw_over_g"] = r.bis_bw_over_g;
        d["bis_hm_over_g"] = r.bis_hm_over_g;
        return d;
    });

    py::class_<ShapeSolution>(m, "ShapeSolution")
        .def_readonly("links_per_chiplet", &ShapeSolution::links_per_chiplet)
        .def_readonly("chiplet_w_mm", &ShapeSolution::chiplet_w_mm)
        .def_readonly("chiplet_h_mm", &ShapeSolution::chiplet_h_mm)
        .def_readonly("power_w_mm", &ShapeSolution::power_w_mm)
        .def_readonly("power_h_mm", &ShapeSolution::power_h_mm)
        .def_readonly("link_sector_len_mm", &ShapeSolution::link_sector_len_mm)
        .def_readonly("bump_edge_dist_mm", &ShapeSolution::bump_edge_dist_mm)
        .def_readonly("link_area_mm2", &ShapeSolution::link_area_mm2)
        .def_readonly("chiplet_area_mm2", &ShapeSolution::chiplet_area_mm2)
        .def_readonly("power_fraction", &ShapeSolution::power_fraction);
    m.def(
        "shape_for",
        [](const py::object& kind, double area, double pp) { return shape_for(kind_arg(kind), area, pp); },
        py::arg("kind"), py::arg("chiplet_area_mm2"), py::arg("power_fraction") = 0.4);
    m.def("chiplet_area", &chiplet_area, py::arg("total_area_mm2"), py::arg("n"));

    py::class_<LinkParams>(m, "LinkParams")
        .def(py::init([](double area, double pitch, int ndw, double freq) { return LinkParams{area, pitch, ndw, freq}; }),
             py::arg("bump_area_mm2"), py::arg("bump_pitch_mm") = 0.15, py::arg("non_data_wires") = 12,
             py::arg("freq_ghz") = 16.0)
        .def_readwrite("bump_area_mm2", &LinkParams::bump_area_mm2)
        .def_readwrite("bump_pitch_mm", &LinkParams::bump_pitch_mm)
        .def_readwrite("non_data_wires", &LinkParams::non_data_wires)
        .def_readwrite("freq_ghz", &LinkParams::freq_ghz);
    py::class_<LinkBudget>(m, "LinkBudget")
        .def_readonly("wires", &LinkBudget::wires)
        .def_readonly("data_wires", &LinkBudget::data_wires)
        .def_readonly("bandwidth_gbps", &LinkBudget::bandwidth_gbps);
    m.def("link_bandwidth", &link_bandwidth, py::arg("params"));

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("link_latency_cycles", &SimConfig::link_latency_cycles)
        .def_readwrite("router_latency_cycles", &SimConfig::router_latency_cycles)
        .def_readwrite("num_vcs", &SimConfig::num_vcs)
        .def_readwrite("buffer_flits_per_vc", &SimConfig::buffer_flits_per_vc)
        .def_readwrite("endpoints_per_chiplet", &SimConfig::endpoints_per_chiplet)
        .def_readwrite("packet_len_flits", &SimConfig::packet_len_flits)
        .def_readwrite("warmup_cycles", &SimConfig::warmup_cycles)
        .def_readwrite("measure_cycles", &SimConfig::measure_cycles)
        .def_readwrite("drain_cycles", &SimConfig::drain_cycles)
        .def_readwrite("escape_after_cycles", &SimConfig::escape_after_cycles)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("injection_rate", &SimConfig::injection_rate);

    py::class_<SimResult>(m, "SimResult")
        .def_readonly("avg_packet_latency_cycles", &SimResult::avg_packet_latency_cycles)
        .def_readonly("accepted_rate", &SimResult::accepted_rate)
        .def_readonly("offered_rate", &SimResult::offered_rate)
        .def_readonly("injection_rate", &SimResult::injection_rate)
        .def_readonly("saturated", &SimResult::saturated)
        .def_readonly("packets_measured", &SimResult::packets_measured)
        .def_readonly("drained", &SimResult::drained)
        .def_readonly("cycles_run", &SimResult::cycles_run)
        .def_readonly("packets_created", &SimResult::packets_created)
        .def_readonly("packets_ejected", &SimResult::packets_ejected)
        .def_readonly("flits_created", &SimResult::flits_created)
        .def_readonly("flits_ejected", &SimResult::flits_ejected)
        .def_readonly("escape_packets", &SimResult::escape_packets)
        .def_readonly("max_vc_occupancy", &SimResult::max_vc_occupancy);
    py::class_<SaturationProbe>(m, "SaturationProbe")
        .def_readonly("rate", &SaturationProbe::rate)
        .def_readonly("passed", &SaturationProbe::passed)
        .def_readonly("result", &SaturationProbe::result);
    py::class_<SaturationResult>(m, "SaturationResult")
        .def_readonly("sat_rate", &SaturationResult::sat_rate)
        .def_readonly("sat_fraction", &SaturationResult::sat_fraction)
        .def_readonly("probes", &SaturationResult::probes);

    // Simulations release the GIL so Python threads can run them in parallel.
    m.def("simulate", &simulate, py::arg("arrangement"), py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("run", &run, py::arg("arrangement"), py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("analytic_zero_load", &analytic_zero_load, py::arg("arrangement"), py::arg("config"));
    m.def(
        "find_saturation", [](const Arrangement& a, const SimConfig& c) { return find_saturation(a, c); },
        py::arg("arrangement"), py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("throughput_tbps", &throughput_tbps, py::arg("sat_fraction"), py::arg("n"),
          py::arg("endpoints_per_chiplet"), py::arg("link_gbps"));

    m.def(
        "evaluate_point",
        [](const py::object& kind, int n, bool sim, std::uint64_t seed) {
            SweepSpec spec;
            spec.simulate = sim;
            spec.seed = seed;
            spec.validate();
            const ArrangementKind k = kind_arg(kind);
            SweepRow row;
            {
                py::gil_scoped_release release;
                row = evaluate_point(k, n, spec);
            }
            return row_dict(row);
        },
        py::arg("kind"), py::arg("n"), py::arg("simulate") = false, py::arg("seed") = 1,
        "One sweep row with the reference parameters, as a dict keyed by CSV column.");
}
