// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "airgnn/baselines.hpp"
#include "airgnn/error.hpp"
#include "oracles.hpp"

using namespace airgnn;
namespace t = airgnn::testing;

namespace {

// Two pairs with real gains: g_00 = 2, g_01 = 0.5, g_10 = 1, g_11 = 3.
Layout two_pairs()
{
    return Layout(2, {{2, 0}, {0.5, 0}, {1, 0}, {3, 0}}, {1.0, 0.5}, 10.0);
}

} // namespace

TEST(Sinr, HandExample)
{
    const Eigen::VectorXd s = sinr(two_pairs(), Eigen::Vector2d(1.0, 2.0));
    // rx 0: 4*1 / (1*2 + 1) ; rx 1: 9*2 / (0.25*1 + 0.5)
    EXPECT_DOUBLE_EQ(s(0), 4.0 / 3.0);
    EXPECT_DOUBLE_EQ(s(1), 18.0 / 0.75);
    EXPECT_DOUBLE_EQ(sum_rate(two_pairs(), Eigen::Vector2d(1.0, 2.0)), std::log1p(4.0 / 3.0) + std::log1p(24.0));
}

TEST(Sinr, ZeroPowerAndBoxCheck)
{
    EXPECT_EQ(sum_rate(two_pairs(), Eigen::Vector2d::Zero()), 0.0);
    EXPECT_THROW(sinr(two_pairs(), Eigen::Vector2d(-1.0, 0.0)), std::invalid_argument);
    EXPECT_THROW(sinr(two_pairs(), Eigen::Vector2d(11.0, 0.0)), std::invalid_argument);
    EXPECT_NO_THROW(sinr(two_pairs(), Eigen::Vector2d(10.0 * (1 + 1e-12), 0.0)));
    EXPECT_THROW(sinr(two_pairs(), Eigen::Vector3d::Zero()), DimensionError);
}

TEST(SumRateGradient, MatchesFiniteDifferences)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Layout l = generate_layout(6, 30.0, 1.0, 100 + trial);
        Eigen::VectorXd p(6);
        std::uniform_real_distribution<double> u(0.05, 1.0);
        for (int i = 0; i < 6; ++i)
            p(i) = u(rng) * l.p_max_mw();
        const Eigen::VectorXd g = sum_rate_gradient(l, p);
        auto f = [&] { return sum_rate_unchecked(l, p); };
        for (int i = 0; i < 6; ++i) {
            const double num = t::five_point_difference(f, p.data() + i, 1e-3 * l.p_max_mw());
            EXPECT_LT(t::relative_error(g(i), num), 1e-6) << "trial " << trial << " entry " << i;
        }
    }
}

TEST(Wmmse, SinglePairUsesFullPower)
{
    const Layout l(1, {{0.3, -0.4}}, {1.0}, 1000.0);
    const WmmseResult r = wmmse(l);
    EXPECT_EQ(r.powers(0), 1000.0);
    EXPECT_EQ(r.sum_rate_trace.size(), 100u);
}

TEST(Wmmse, SumRateTraceIsNondecreasing)
{
    for (const auto &l : generate_layouts(100, 10, 30.0, 1.0, 17)) {
        const WmmseResult r = wmmse(l);
        for (std::size_t i = 1; i < r.sum_rate_trace.size(); ++i)
            ASSERT_GE(r.sum_rate_trace[i], r.sum_rate_trace[i - 1] - 1e-9) << "iteration " << i;
    }
}

TEST(Wmmse, PowersStayInBox)
{
    for (const auto &l : generate_layouts(20, 10, 30.0, 1.0, 5)) {
        const Eigen::VectorXd p = wmmse(l).powers;
        EXPECT_GE(p.minCoeff(), 0.0);
        EXPECT_LE(p.maxCoeff(), l.p_max_mw());
    }
}

TEST(Wmmse, BeatsFullPowerOnMostLayouts)
{
    int better = 0;
    const auto layouts = generate_layouts(100, 10, 30.0, 1.0, 23);
    for (const auto &l : layouts) {
        const double full = sum_rate(l, Eigen::VectorXd::Constant(10, l.p_max_mw()));
        better += wmmse(l).sum_rate_trace.back() >= full;
    }
    EXPECT_GE(better, 90);
}

TEST(Wmmse, ZeroDirectGainsGiveZeroPower)
{
    const Layout l(2, {{0, 0}, {1, 0}, {1, 0}, {0, 0}}, {1.0, 1.0}, 10.0);
    const WmmseResult r = wmmse(l);
    EXPECT_EQ(r.powers, Eigen::Vector2d::Zero());
    EXPECT_THROW(wmmse(l, 0), std::invalid_argument);
}

TEST(NormalizedSumRate, ReferenceAndZero)
{
    const auto layouts = generate_layouts(5, 4, 30.0, 1.0, 2);
    const double one = normalized_sum_rate(layouts, [](const Layout &l, std::size_t) { return wmmse(l).powers; });
    EXPECT_NEAR(one, 1.0, 1e-12);
    const double zero = normalized_sum_rate(layouts, [](const Layout &l, std::size_t) {
        return Eigen::VectorXd::Zero(l.n_pairs()).eval();
    });
    EXPECT_EQ(zero, 0.0);
    EXPECT_THROW(normalized_sum_rate({}, [](const Layout &, std::size_t) { return Eigen::VectorXd(); }),
                 std::invalid_argument);
}

TEST(NormalizedSumRate, SkipsLayoutsWithZeroReference)
{
    std::vector<Layout> layouts = generate_layouts(2, 2, 30.0, 1.0, 2);
    layouts.push_back(Layout(2, {{0, 0}, {1, 0}, {1, 0}, {0, 0}}, {1.0, 1.0}, 10.0));
    std::size_t skipped = 0;
    normalized_sum_rate(layouts, [](const Layout &l, std::size_t) { return wmmse(l).powers; }, 100, &skipped);
    EXPECT_EQ(skipped, 1u);
}
