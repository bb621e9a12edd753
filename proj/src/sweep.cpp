#include "chiplet/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "chiplet/errors.hpp"
#include "chiplet/geometry.hpp"
#include "chiplet/linkmodel.hpp"
#include "chiplet/metrics.hpp"
#include "chiplet/serialize.hpp"

namespace chiplet {

void SweepSpec::validate() const {
    require(!kinds.empty(), "sweep needs at least one arrangement kind");
    require(n_min >= 1 && n_min <= n_max, "sweep needs 1 <= n_min <= n_max");
    require(total_area_mm2 > 0.0, "A_all must be positive");
    require(power_fraction >= 0.0 && power_fraction < 1.0, "p_p must be in [0, 1)");
    require(bump_pitch_mm > 0.0, "P_B must be positive");
    require(non_data_wires >= 0, "N_ndw must be non-negative");
    require(freq_ghz > 0.0, "f must be positive");
    require(seeds >= 1, "seeds must be at least 1");
    require(zero_load_rate > 0.0 && zero_load_rate <= 1.0, "zero_load_rate must be in (0, 1]");
    require(restarts >= 1, "restarts must be at least 1");
    require(jobs >= 0, "jobs must be non-negative");
    std::set<ArrangementKind> seen(kinds.begin(), kinds.end());
    require(seen.size() == kinds.size(), "duplicate arrangement kind in sweep");
    sim.validate();
}

void from_json(const nlohmann::json& j, SweepSpec& spec) {
    static const std::set<std::string> known{"kinds",  "n_min", "n_max",          "A_all",    "p_p",
                                             "P_B",    "N_ndw", "f",              "sim",      "simulate",
                                             "seeds",  "zero_load_rate", "restarts", "seed", "jobs",
                                             "output"};
    require(j.is_object(), "sweep config must be a JSON object");
    for (const auto& [key, _] : j.items()) require(known.count(key) > 0, "unknown sweep config key '" + key + "'");

    if (j.contains("kinds")) {
        spec.kinds.clear();
        for (const auto& k : j.at("kinds")) spec.kinds.push_back(parse_kind(k.get<std::string>()));
    }
    spec.n_min = j.value("n_min", spec.n_min);
    spec.n_max = j.value("n_max", spec.n_max);
    spec.total_area_mm2 = j.value("A_all", spec.total_area_mm2);
    spec.power_fraction = j.value("p_p", spec.power_fraction);
    spec.bump_pitch_mm = j.value("P_B", spec.bump_pitch_mm);
    spec.non_data_wires = j.value("N_ndw", spec.non_data_wires);
    spec.freq_ghz = j.value("f", spec.freq_ghz);
    if (j.contains("sim")) from_json(j.at("sim"), spec.sim);
    spec.simulate = j.value("simulate", spec.simulate);
    spec.seeds = j.value("seeds", spec.seeds);
    spec.zero_load_rate = j.value("zero_load_rate", spec.zero_load_rate);
    spec.restarts = j.value("restarts", spec.restarts);
    spec.seed = j.value("seed", spec.seed);
    spec.jobs = j.value("jobs", spec.jobs);
    spec.output = j.value("output", spec.output);
}

void to_json(nlohmann::json& j, const SweepSpec& spec) {
    nlohmann::json kinds = nlohmann::json::array();
    for (auto k : spec.kinds) kinds.push_back(std::string(to_string(k)));
    j = nlohmann::json{{"kinds", std::move(kinds)},
                       {"n_min", spec.n_min},
                       {"n_max", spec.n_max},
                       {"A_all", spec.total_area_mm2},
                       {"p_p", spec.power_fraction},
                       {"P_B", spec.bump_pitch_mm},
                       {"N_ndw", spec.non_data_wires},
                       {"f", spec.freq_ghz},
                       {"sim", spec.sim},
                       {"simulate", spec.simulate},
                       {"seeds", spec.seeds},
                       {"zero_load_rate", spec.zero_load_rate},
                       {"restarts", spec.restarts},
                       {"seed", spec.seed},
                       {"jobs", spec.jobs},
                       {"output", spec.output}};
}

SweepRow evaluate_point(ArrangementKind kind, int n, const SweepSpec& spec) {
    SweepRow row;
    row.kind = kind;
    row.n = n;
    row.regularity = regularity_of(kind, n);
    try {
        const ShapeSolution shape = shape_for(kind, chiplet_area(spec.total_area_mm2, n), spec.power_fraction);
        row.chiplet_area_mm2 = shape.chiplet_area_mm2;
        row.chiplet_w_mm = shape.chiplet_w_mm;
        row.chiplet_h_mm = shape.chiplet_h_mm;
        row.bump_edge_dist_mm = shape.bump_edge_dist_mm;
        row.link_area_mm2 = shape.link_area_mm2;

        const Arrangement arr = build_arrangement(kind, n, shape.chiplet_w_mm, shape.chiplet_h_mm);
        MetricsOptions mopts;
        mopts.restarts = spec.restarts;
        mopts.seed = spec.seed;
        mopts.exact_limit = 0;  // the sweep reports the heuristic cut only
        const MetricsReport m = compute_metrics(arr, mopts);
        row.diameter_bfs = m.diameter_bfs;
        row.diameter_formula = m.diameter_formula;
        row.bisection_formula = m.bisection_formula;
        row.bisection_heuristic = m.bisection_heuristic;
        row.min_deg = m.min_deg;
        row.avg_deg = m.avg_deg;

        const LinkBudget budget = link_bandwidth(
            LinkParams{shape.link_area_mm2, spec.bump_pitch_mm, spec.non_data_wires, spec.freq_ghz});
        row.wires = budget.wires;
        row.data_wires = budget.data_wires;
        row.link_bw_gbps = budget.bandwidth_gbps;

        if (!spec.simulate) return row;
        double latency_sum = 0.0;
        double sat_sum = 0.0;
        for (int s = 0; s < spec.seeds; ++s) {
            SimConfig cfg = spec.sim;
            cfg.seed = spec.seed + static_cast<std::uint64_t>(s);
            cfg.injection_rate = spec.zero_load_rate;
            latency_sum += run(arr, cfg).avg_packet_latency_cycles;
            sat_sum += find_saturation(arr, cfg).sat_fraction;
        }
        row.zero_load_latency_cycles = latency_sum / spec.seeds;
        row.sat_fraction = sat_sum / spec.seeds;
        row.sat_throughput_tbps =
            throughput_tbps(*row.sat_fraction, n, spec.sim.endpoints_per_chiplet, budget.bandwidth_gbps);
    } catch (const Error& e) {
        row.note = e.what();
    }
    return row;
}

namespace {

using PointKey = std::pair<ArrangementKind, int>;

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const std::vector<SweepRow>& existing,
                                const std::function<void(const SweepRow&)>& on_row) {
    spec.validate();
    std::map<PointKey, SweepRow> reuse;
    for (const auto& row : existing) reuse.emplace(PointKey{row.kind, row.n}, row);

    std::vector<SweepRow> rows;
    std::vector<std::size_t> pending;
    for (auto kind : spec.kinds) {
        for (int n = spec.n_min; n <= spec.n_max; ++n) {
            auto it = reuse.find({kind, n});
            if (it != reuse.end()) {
                rows.push_back(it->second);
            } else {
                SweepRow placeholder;
                placeholder.kind = kind;
                placeholder.n = n;
                rows.push_back(placeholder);
                pending.push_back(rows.size() - 1);
            }
        }
    }

    unsigned workers = spec.jobs > 0 ? static_cast<unsigned>(spec.jobs) : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::max<std::size_t>(pending.size(), 1)));

    std::vector<char> done(rows.size(), 1);
    for (auto i : pending) done[i] = 0;
    std::size_t emitted = 0;
    std::mutex mutex;
    std::exception_ptr failure;
    // Caller holds `mutex`.
    auto flush = [&] {
        while (!failure && emitted < rows.size() && done[emitted]) {
            if (on_row) {
                try {
                    on_row(rows[emitted]);
                } catch (...) {
                    failure = std::current_exception();
                    return;
                }
            }
            ++emitted;
        }
    };
    {
        std::lock_guard lock(mutex);
        flush();
    }

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < pending.size(); i = next++) {
            {
                std::lock_guard lock(mutex);
                if (failure) return;
            }
            SweepRow row = rows[pending[i]];
            std::exception_ptr error;
            try {
                row = evaluate_point(row.kind, row.n, spec);
            } catch (...) {
                error = std::current_exception();
            }
            std::lock_guard lock(mutex);
            if (error) {
                if (!failure) failure = error;
                return;
            }
            rows[pending[i]] = std::move(row);
            done[pending[i]] = 1;
            flush();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> columns{
        "kind",     "n",        "regularity", "diameter_bfs", "diameter_formula",         "bisection_formula",
        "bisection_heuristic",  "min_deg",    "avg_deg",      "A_C",                      "W_C",
        "H_C",      "D_B",      "A_B",        "N_w",          "N_dw",                     "link_bw_gbps",
        "zero_load_latency_cycles",           "sat_fraction", "sat_throughput_tbps",      "note"};
    return columns;
}

std::string format_real(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }
std::string cell(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

std::string quote(const std::string& text) {
    if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

// Splits one CSV record, honoring quoted fields (which may span lines).
bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool quoted = false;
    bool any = false;
    for (int ch; (ch = in.get()) != EOF;) {
        any = true;
        const char c = static_cast<char>(ch);
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field += static_cast<char>(in.get());
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            fields.push_back(std::move(field));
            return true;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

std::optional<double> parse_real(const std::string& s, const std::string& column) {
    if (s.empty()) return std::nullopt;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size()) fail(ErrorCode::InvalidArgument, "bad number '" + s + "' in column " + column);
    return v;
}

std::optional<int> parse_int(const std::string& s, const std::string& column) {
    auto v = parse_real(s, column);
    if (!v) return std::nullopt;
    if (*v != std::floor(*v)) fail(ErrorCode::InvalidArgument, "bad integer '" + s + "' in column " + column);
    return static_cast<int>(*v);
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    const auto& cols = sweep_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : rows) {
        const std::vector<std::string> cells{std::string(to_string(r.kind)),
                                             std::to_string(r.n),
                                             std::string(to_string(r.regularity)),
                                             cell(r.diameter_bfs),
                                             cell(r.diameter_formula),
                                             cell(r.bisection_formula),
                                             cell(r.bisection_heuristic),
                                             cell(r.min_deg),
                                             cell(r.avg_deg),
                                             cell(r.chiplet_area_mm2),
                                             cell(r.chiplet_w_mm),
                                             cell(r.chiplet_h_mm),
                                             cell(r.bump_edge_dist_mm),
                                             cell(r.link_area_mm2),
                                             cell(r.wires),
                                             cell(r.data_wires),
                                             cell(r.link_bw_gbps),
                                             cell(r.zero_load_latency_cycles),
                                             cell(r.sat_fraction),
                                             cell(r.sat_throughput_tbps),
                                             quote(r.note)};
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
    const auto& cols = sweep_columns();
    std::vector<std::string> fields;
    if (!read_record(in, fields)) return {};
    require(fields == cols, "CSV header does not match the sweep column order");

    std::vector<SweepRow> rows;
    std::set<PointKey> seen;
    while (read_record(in, fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        require(fields.size() == cols.size(), "CSV row has " + std::to_string(fields.size()) + " cells, expected " +
                                                  std::to_string(cols.size()));
        SweepRow r;
        r.kind = parse_kind(fields[0]);
        r.n = parse_int(fields[1], cols[1]).value_or(0);
        require(r.n >= 1, "CSV row has no chiplet count");
        r.regularity = parse_regularity(fields[2]);
        r.diameter_bfs = parse_int(fields[3], cols[3]);
        r.diameter_formula = parse_real(fields[4], cols[4]);
        r.bisection_formula = parse_real(fields[5], cols[5]);
        r.bisection_heuristic = parse_int(fields[6], cols[6]);
        r.min_deg = parse_int(fields[7], cols[7]);
        r.avg_deg = parse_real(fields[8], cols[8]);
        r.chiplet_area_mm2 = parse_real(fields[9], cols[9]);
        r.chiplet_w_mm = parse_real(fields[10], cols[10]);
        r.chiplet_h_mm = parse_real(fields[11], cols[11]);
        r.bump_edge_dist_mm = parse_real(fields[12], cols[12]);
        r.link_area_mm2 = parse_real(fields[13], cols[13]);
        r.wires = parse_int(fields[14], cols[14]);
        r.data_wires = parse_int(fields[15], cols[15]);
        r.link_bw_gbps = parse_real(fields[16], cols[16]);
        r.zero_load_latency_cycles = parse_real(fields[17], cols[17]);
        r.sat_fraction = parse_real(fields[18], cols[18]);
        r.sat_throughput_tbps = parse_real(fields[19], cols[19]);
        r.note = fields[20];
        require(seen.insert({r.kind, r.n}).second,
                "duplicate CSV row for " + std::string(to_string(r.kind)) + " n=" + std::to_string(r.n));
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<CompareRow> compare_to_grid(const std::vector<SweepRow>& rows) {
    std::map<int, const SweepRow*> grid;
    for (const auto& r : rows)
        if (r.kind == ArrangementKind::Grid) grid[r.n] = &r;

    auto ratio = [](const std::optional<double>& x, const std::optional<double>& base) -> std::optional<double> {
        if (!x || !base || *base == 0.0) return std::nullopt;
        return *x / *base;
    };

    std::vector<CompareRow> out;
    for (const auto& r : rows) {
        auto it = grid.find(r.n);
        if (it == grid.end()) fail(ErrorCode::MissingBaseline, "no Grid row for n=" + std::to_string(r.n));
        const SweepRow& g = *it->second;
        out.push_back({r.n, r.kind, ratio(r.zero_load_latency_cycles, g.zero_load_latency_cycles),
                       ratio(r.sat_throughput_tbps, g.sat_throughput_tbps)});
    }
    std::stable_sort(out.begin(), out.end(), [](const CompareRow& a, const CompareRow& b) {
        return std::tie(a.n, a.kind) < std::tie(b.n, b.kind);
    });
    return out;
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
    out << "n,kind,latency_ratio,throughput_ratio\n";
    for (const auto& r : rows)
        out << r.n << ',' << to_string(r.kind) << ',' << cell(r.latency_ratio) << ',' << cell(r.throughput_ratio)
            << '\n';
}

namespace {

struct Series {
    ArrangementKind kind;
    std::vector<std::pair<double, double>> points;
};

const char* color_of(ArrangementKind kind) {
    switch (kind) {
        case ArrangementKind::Grid: return "#1f77b4";
        case ArrangementKind::Brickwall: return "#ff7f0e";
        case ArrangementKind::HexaMesh: return "#2ca02c";
    }
    return "#000000";
}

void render_panel(std::ostringstream& svg, double ox, double oy, const std::string& title, const std::string& ylabel,
                  const std::vector<Series>& series) {
    constexpr double kW = 420, kH = 280, kLeft = 60, kRight = 15, kTop = 30, kBottom = 40;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    svg << "<g transform=\"translate(" << ox << ',' << oy << ")\">\n";
    svg << "<text x=\"" << kW / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kW - kLeft - kRight << "\" height=\""
        << kH - kTop - kBottom << "\" fill=\"none\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << (kLeft + kW - kRight) / 2 << "\" y=\"" << kH - 5
        << "\" text-anchor=\"middle\" font-size=\"12\">chiplets</text>\n";
    svg << "<text x=\"12\" y=\"" << (kTop + kH - kBottom) / 2 << "\" text-anchor=\"middle\" font-size=\"12\" "
        << "transform=\"rotate(-90 12 " << (kTop + kH - kBottom) / 2 << ")\">" << ylabel << "</text>\n";
    if (xmin > xmax) {
        svg << "<text x=\"" << kW / 2 << "\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" font-size=\"12\">no data</text>\n</g>\n";
        return;
    }
    if (xmax == xmin) xmax = xmin + 1;
    const double pad = ymax > ymin ? 0.05 * (ymax - ymin) : std::max(0.05 * std::abs(ymax), 0.5);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kW - kLeft - kRight); };
    auto py = [&](double y) { return kH - kBottom - (y - ymin) / (ymax - ymin) * (kH - kTop - kBottom); };
    for (int t = 0; t <= 4; ++t) {
        const double x = xmin + (xmax - xmin) * t / 4, y = ymin + (ymax - ymin) * t / 4;
        svg << "<text x=\"" << px(x) << "\" y=\"" << kH - kBottom + 14 << "\" text-anchor=\"middle\" font-size=\"10\">"
            << format_real(std::round(x)) << "</text>\n";
        svg << "<text x=\"" << kLeft - 4 << "\" y=\"" << py(y) + 3 << "\" text-anchor=\"end\" font-size=\"10\">"
            << format_real(std::round(y * 1000) / 1000) << "</text>\n";
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        svg << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << color_of(s.kind) << "\" points=\"";
        for (const auto& [x, y] : s.points) svg << px(x) << ',' << py(y) << ' ';
        svg << "\"/>\n";
        svg << "<text x=\"" << kLeft + 8 << "\" y=\"" << kTop + 14 + 13 * i << "\" font-size=\"11\" fill=\""
            << color_of(s.kind) << "\">" << to_string(s.kind) << "</text>\n";
    }
    svg << "</g>\n";
}

}  // namespace

std::string render_sweep_svg(const std::vector<SweepRow>& rows) {
    std::vector<ArrangementKind> kinds;
    for (const auto& r : rows)
        if (std::find(kinds.begin(), kinds.end(), r.kind) == kinds.end()) kinds.push_back(r.kind);

    std::map<int, const SweepRow*> grid;
    for (const auto& r : rows)
        if (r.kind == ArrangementKind::Grid) grid[r.n] = &r;

    using Field = std::optional<double> SweepRow::*;
    auto absolute = [&](Field f) {
        std::vector<Series> out;
        for (auto k : kinds) {
            Series s{k, {}};
            for (const auto& r : rows)
                if (r.kind == k && (r.*f)) s.points.emplace_back(r.n, *(r.*f));
            out.push_back(std::move(s));
        }
        return out;
    };
    auto relative = [&](Field f) {
        std::vector<Series> out;
        for (auto k : kinds) {
            Series s{k, {}};
            for (const auto& r : rows) {
                auto g = grid.find(r.n);
                if (r.kind != k || !(r.*f) || g == grid.end() || !(g->second->*f) || *(g->second->*f) == 0.0) continue;
                s.points.emplace_back(r.n, *(r.*f) / *(g->second->*f));
            }
            out.push_back(std::move(s));
        }
        return out;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"840\" height=\"560\" font-family=\"sans-serif\">\n";
    svg << "<rect width=\"840\" height=\"560\" fill=\"white\"/>\n";
    render_panel(svg, 0, 0, "Zero-load latency", "cycles", absolute(&SweepRow::zero_load_latency_cycles));
    render_panel(svg, 420, 0, "Saturation throughput", "Tb/s", absolute(&SweepRow::sat_throughput_tbps));
    render_panel(svg, 0, 280, "Latency relative to Grid", "ratio", relative(&SweepRow::zero_load_latency_cycles));
    render_panel(svg, 420, 280, "Throughput relative to Grid", "ratio", relative(&SweepRow::sat_throughput_tbps));
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace chiplet
