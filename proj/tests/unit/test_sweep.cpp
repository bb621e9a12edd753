#include <gtest/gtest.h>

#include <sstream>

#include "chiplet/errors.hpp"
#include "chiplet/serialize.hpp"
#include "chiplet/sweep.hpp"

using namespace chiplet;

namespace {

SweepSpec quick_spec() {
    SweepSpec s;
    s.simulate = false;
    s.jobs = 2;
    return s;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    write_sweep_csv(out, rows);
    return out.str();
}

}  // namespace

TEST(SweepSpec, DefaultsAndValidation) {
    const SweepSpec s;
    EXPECT_EQ(s.kinds.size(), 3u);
    EXPECT_EQ(s.n_min, 2);
    EXPECT_EQ(s.n_max, 100);
    EXPECT_DOUBLE_EQ(s.total_area_mm2, 800.0);
    EXPECT_DOUBLE_EQ(s.power_fraction, 0.4);
    EXPECT_DOUBLE_EQ(s.bump_pitch_mm, 0.15);
    EXPECT_EQ(s.non_data_wires, 12);
    EXPECT_DOUBLE_EQ(s.freq_ghz, 16.0);
    EXPECT_NO_THROW(s.validate());

    SweepSpec bad;
    bad.n_min = 5;
    bad.n_max = 4;
    EXPECT_THROW(bad.validate(), Error);
    bad = SweepSpec{};
    bad.kinds = {ArrangementKind::Grid, ArrangementKind::Grid};
    EXPECT_THROW(bad.validate(), Error);
}

TEST(SweepSpec, JsonRoundTripAndOverrides) {
    SweepSpec s;
    s.kinds = {ArrangementKind::HexaMesh};
    s.n_min = 7;
    s.n_max = 19;
    s.sim.measure_cycles = 1234;
    s.seeds = 3;
    const json j = s;
    SweepSpec back;
    from_json(j, back);
    EXPECT_EQ(json(back), j);

    SweepSpec partial;
    from_json(json::parse(R"({"p_p": 0.3, "sim": {"num_vcs": 4}})"), partial);
    EXPECT_DOUBLE_EQ(partial.power_fraction, 0.3);
    EXPECT_EQ(partial.sim.num_vcs, 4);
    EXPECT_EQ(partial.sim.buffer_flits_per_vc, 8);
    EXPECT_EQ(partial.n_max, 100);

    EXPECT_THROW(from_json(json::parse(R"({"pp": 0.3})"), partial), Error);
}

TEST(Sweep, DefaultRangeGivesOneRowPerKindAndCount) {
    const auto rows = run_sweep(quick_spec());
    ASSERT_EQ(rows.size(), 297u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].kind, SweepSpec{}.kinds[i / 99]);
        EXPECT_EQ(rows[i].n, 2 + static_cast<int>(i % 99));
        const bool regular = rows[i].regularity == Regularity::Regular;
        EXPECT_EQ(rows[i].diameter_formula.has_value(), regular);
        EXPECT_EQ(rows[i].bisection_formula.has_value(), regular);
        EXPECT_TRUE(rows[i].note.empty()) << rows[i].note;
        EXPECT_FALSE(rows[i].sat_fraction.has_value());
    }
    // Brickwall at n = 100 uses 8 mm^2 chiplets.
    EXPECT_NEAR(*rows[99 + 98].chiplet_area_mm2, 8.0, 1e-12);
}

TEST(Sweep, CsvIsByteIdenticalAcrossRunsAndWorkerCounts) {
    SweepSpec s = quick_spec();
    s.n_max = 40;
    const std::string a = to_csv(run_sweep(s));
    s.jobs = 1;
    const std::string b = to_csv(run_sweep(s));
    s.jobs = 4;
    const std::string c = to_csv(run_sweep(s));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
}

TEST(Sweep, SimulatedPointIsDeterministic) {
    SweepSpec s;
    s.kinds = {ArrangementKind::HexaMesh};
    s.n_min = s.n_max = 7;
    s.sim.warmup_cycles = 1000;
    s.sim.measure_cycles = 4000;
    const std::string a = to_csv(run_sweep(s));
    const std::string b = to_csv(run_sweep(s));
    EXPECT_EQ(a, b);
    const auto rows = run_sweep(s);
    ASSERT_TRUE(rows[0].sat_throughput_tbps.has_value());
    EXPECT_GT(*rows[0].sat_fraction, 0.0);
    EXPECT_NEAR(*rows[0].sat_throughput_tbps, *rows[0].sat_fraction * 7 * 2 * *rows[0].link_bw_gbps / 1000, 1e-9);
}

TEST(Sweep, FailuresAreRecordedAndTheSweepContinues) {
    SweepSpec s = quick_spec();
    s.total_area_mm2 = 20.0;  // tiny chiplets run out of data wires
    s.n_min = 1;
    s.n_max = 30;
    const auto rows = run_sweep(s);
    ASSERT_EQ(rows.size(), 90u);
    int failed = 0;
    for (const auto& r : rows) {
        if (r.note.empty()) continue;
        ++failed;
        EXPECT_NE(r.note.find("LinkInfeasible"), std::string::npos);
        EXPECT_TRUE(r.chiplet_area_mm2.has_value());
        EXPECT_FALSE(r.link_bw_gbps.has_value());
    }
    EXPECT_GT(failed, 0);
    EXPECT_LT(failed, 90);
}

TEST(Sweep, ResumeReusesExistingRowsAndReportsInOrder) {
    SweepSpec s = quick_spec();
    s.n_max = 12;
    auto full = run_sweep(s);

    std::vector<SweepRow> partial{full[0], full[5], full[20]};
    partial[1].note = "kept";
    std::vector<std::pair<ArrangementKind, int>> order;
    const auto resumed = run_sweep(s, partial, [&](const SweepRow& r) { order.emplace_back(r.kind, r.n); });
    ASSERT_EQ(resumed.size(), full.size());
    EXPECT_EQ(resumed[5].note, "kept");
    for (std::size_t i = 0; i < full.size(); ++i) {
        EXPECT_EQ(order[i].first, full[i].kind);
        EXPECT_EQ(order[i].second, full[i].n);
    }
    auto expected = full;
    expected[5].note = "kept";
    EXPECT_EQ(to_csv(resumed), to_csv(expected));
}

TEST(Csv, FixedHeaderSixDigitsAndRoundTrip) {
    SweepSpec s = quick_spec();
    s.n_max = 20;
    auto rows = run_sweep(s);
    rows[3].note = "comma, and \"quotes\"";
    rows[4].zero_load_latency_cycles = 123.456789;
    const std::string text = to_csv(rows);
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "kind,n,regularity,diameter_bfs,diameter_formula,bisection_formula,bisection_heuristic,min_deg,"
              "avg_deg,A_C,W_C,H_C,D_B,A_B,N_w,N_dw,link_bw_gbps,zero_load_latency_cycles,sat_fraction,"
              "sat_throughput_tbps,note");
    EXPECT_NE(text.find(",123.457,"), std::string::npos);

    std::istringstream in(text);
    const auto back = read_sweep_csv(in);
    ASSERT_EQ(back.size(), rows.size());
    EXPECT_EQ(back[3].note, rows[3].note);
    EXPECT_EQ(to_csv(back), text);
}

TEST(Csv, RejectsMalformedInput) {
    std::istringstream wrong_header("kind,n\ngrid,4\n");
    EXPECT_THROW(read_sweep_csv(wrong_header), Error);

    SweepSpec s = quick_spec();
    s.n_max = 3;
    std::string text = to_csv(run_sweep(s));
    const std::string dup = text + text.substr(text.find('\n') + 1, text.find('\n', text.find('\n') + 1) - text.find('\n'));
    std::istringstream dup_in(dup);
    EXPECT_THROW(read_sweep_csv(dup_in), Error);
}

TEST(FormatReal, SixSignificantDigits) {
    EXPECT_EQ(format_real(944.0), "944");
    EXPECT_EQ(format_real(2.0 / 3.0), "0.666667");
    EXPECT_EQ(format_real(1234567.0), "1.23457e+06");
}

TEST(Compare, RatiosAgainstGrid) {
    std::vector<SweepRow> rows(4);
    rows[0].kind = ArrangementKind::Grid;
    rows[0].n = 10;
    rows[0].zero_load_latency_cycles = 100;
    rows[0].sat_throughput_tbps = 20;
    rows[1] = rows[0];
    rows[1].kind = ArrangementKind::HexaMesh;
    rows[1].zero_load_latency_cycles = 80;
    rows[1].sat_throughput_tbps = 27;
    rows[2] = rows[0];
    rows[2].n = 11;
    rows[3] = rows[1];
    rows[3].n = 11;
    rows[3].sat_throughput_tbps.reset();

    const auto ratios = compare_to_grid(rows);
    ASSERT_EQ(ratios.size(), 4u);
    for (const auto& r : ratios) {
        if (r.kind != ArrangementKind::Grid) continue;
        EXPECT_DOUBLE_EQ(*r.latency_ratio, 1.0);
        EXPECT_DOUBLE_EQ(*r.throughput_ratio, 1.0);
    }
    EXPECT_DOUBLE_EQ(*ratios[1].latency_ratio, 0.8);
    EXPECT_DOUBLE_EQ(*ratios[1].throughput_ratio, 1.35);
    EXPECT_FALSE(ratios[3].throughput_ratio.has_value());

    rows.erase(rows.begin() + 2);
    try {
        compare_to_grid(rows);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingBaseline);
    }
}

TEST(Plot, FourPanelsWithOneLinePerKind) {
    SweepSpec s = quick_spec();
    s.n_max = 10;
    auto rows = run_sweep(s);
    for (auto& r : rows) {
        r.zero_load_latency_cycles = 50.0 + r.n;
        r.sat_throughput_tbps = 10.0 + r.n;
    }
    const std::string svg = render_sweep_svg(rows);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    std::size_t lines = 0;
    for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++lines;
    EXPECT_EQ(lines, 12u);
}

TEST(Serialize, ArrangementRoundTrip) {
    for (auto kind : {ArrangementKind::Grid, ArrangementKind::Brickwall, ArrangementKind::HexaMesh}) {
        const auto arr = build_arrangement(kind, 37, 2.345678912, 1.5);
        const json j = arr;
        EXPECT_EQ(j["placements"].size(), 37u);
        const auto back = arrangement_from_json(json::parse(j.dump()));
        EXPECT_EQ(back.graph, arr.graph);
        EXPECT_EQ(json(back), j);
    }
    const json single = build_grid(1, 1, 1);
    EXPECT_TRUE(single["edges"].empty());

    json tampered = build_grid(4, 1, 1);
    tampered["edges"].push_back({0, 3});
    EXPECT_THROW(arrangement_from_json(tampered), Error);
}

TEST(Serialize, MetricsOmitAbsentFields) {
    MetricsReport m;
    m.diameter_bfs = 3;
    const json j = m;
    EXPECT_FALSE(j.contains("diameter_formula"));
    EXPECT_FALSE(j.contains("bisection_exact"));
    m.diameter_formula = 2.5;
    EXPECT_DOUBLE_EQ(json(m)["diameter_formula"].get<double>(), 2.5);
}
