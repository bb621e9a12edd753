#include <gtest/gtest.h>

#include <cmath>

#include "chiplet/errors.hpp"
#include "chiplet/geometry.hpp"
#include "chiplet/linkmodel.hpp"

using namespace chiplet;

TEST(LinkBandwidth, Examples) {
    const auto brick = link_bandwidth({1.6, 0.15, 12, 16});
    EXPECT_EQ(brick.wires, 71);
    EXPECT_EQ(brick.data_wires, 59);
    EXPECT_DOUBLE_EQ(brick.bandwidth_gbps, 944.0);

    const auto grid = link_bandwidth({2.4, 0.15, 12, 16});
    EXPECT_EQ(grid.wires, 106);
    EXPECT_EQ(grid.data_wires, 94);
    EXPECT_DOUBLE_EQ(grid.bandwidth_gbps, 1504.0);

    try {
        link_bandwidth({0.02, 0.15, 12, 16});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::LinkInfeasible);
    }
}

TEST(LinkBandwidth, FromShapeSolverAtSixteenSquareMillimetres) {
    const auto s = solve_shape_brick(16, 0.4);
    const auto b = link_bandwidth({s.link_area_mm2, 0.15, 12, 16});
    EXPECT_EQ(b.wires, 71);
    EXPECT_EQ(b.bandwidth_gbps, 944.0);
}

TEST(LinkBandwidth, WireCountIsExactlyTheFloor) {
    // 0.0225 * 71 = 1.5975 exactly in decimal; the floor must not lose a wire
    // to binary rounding.
    for (int w = 13; w < 2000; ++w) {
        const double area = w * 0.15 * 0.15;
        EXPECT_EQ(link_bandwidth({area, 0.15, 12, 16}).wires, w) << w;
    }
}

TEST(LinkBandwidth, Monotonicity) {
    double prev = 0.0;
    for (double area = 0.5; area < 20; area += 0.25) {
        const double bw = link_bandwidth({area, 0.15, 12, 16}).bandwidth_gbps;
        EXPECT_GE(bw, prev);
        prev = bw;
    }
    prev = 0.0;
    for (double f = 1; f <= 32; f += 1) {
        const double bw = link_bandwidth({4.0, 0.15, 12, f}).bandwidth_gbps;
        EXPECT_GE(bw, prev);
        prev = bw;
    }
    prev = 1e18;
    for (double pitch = 0.05; pitch <= 0.3; pitch += 0.01) {
        const double bw = link_bandwidth({4.0, pitch, 12, 16}).bandwidth_gbps;
        EXPECT_LE(bw, prev);
        prev = bw;
    }
    prev = 1e18;
    for (int ndw = 0; ndw <= 100; ++ndw) {
        const double bw = link_bandwidth({4.0, 0.15, ndw, 16}).bandwidth_gbps;
        EXPECT_LE(bw, prev);
        prev = bw;
    }
}

TEST(LinkBandwidth, HalvingPitchQuadruplesWires) {
    for (double area : {0.9, 1.6, 2.4, 7.3}) {
        const int coarse = link_bandwidth({area, 0.15, 0, 16}).wires;
        const int fine = link_bandwidth({area, 0.075, 0, 16}).wires;
        EXPECT_LE(std::abs(fine - 4 * coarse), 4) << area;
        EXPECT_NEAR(fine, 4.0 * area / (0.15 * 0.15), 1.0);
    }
}

TEST(LinkBandwidth, GridBeatsBrickAtEqualCount) {
    for (int n = 1; n <= 100; ++n) {
        const double a = chiplet_area(800, n);
        const auto g = solve_shape_grid(a, 0.4);
        const auto b = solve_shape_brick(a, 0.4);
        EXPECT_GT(link_bandwidth({g.link_area_mm2, 0.15, 12, 16}).bandwidth_gbps,
                  link_bandwidth({b.link_area_mm2, 0.15, 12, 16}).bandwidth_gbps)
            << n;
    }
}

TEST(GlobalBandwidth, Product) {
    EXPECT_DOUBLE_EQ(full_global_bandwidth(50, 2, 944), 94400.0);
    EXPECT_DOUBLE_EQ(full_global_bandwidth(1, 1, 123.0), 123.0);
    EXPECT_DOUBLE_EQ(full_global_bandwidth(100, 2, 500), 2 * full_global_bandwidth(100, 1, 500));
}

TEST(LinkLength, WarningIsInformationalOnly) {
    EXPECT_FALSE(link_length_warning(0.73).has_value());
    EXPECT_TRUE(link_length_warning(1.0).has_value());  // 2.1 mm
    EXPECT_FALSE(link_length_warning(0.95, 0.1).has_value());
    EXPECT_TRUE(link_length_warning(0.95, 0.2).has_value());
}
