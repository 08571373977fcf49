// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "airgnn/channel.hpp"
#include "airgnn/error.hpp"
#include "airgnn/signaling.hpp"

using namespace airgnn;

namespace {

ControlChannel make_channel(std::vector<double> gain, std::vector<double> power, double noise_var)
{
    ControlChannel ch;
    ch.receiver = 0;
    for (std::size_t i = 0; i < gain.size(); ++i)
        ch.neighbors.push_back(static_cast<int>(i) + 1);
    ch.gain = std::move(gain);
    ch.power = std::move(power);
    ch.noise_var = noise_var;
    return ch;
}

} // namespace

TEST(AirCompReceive, NoiselessSuperposition)
{
    const auto ch = make_channel({1.0, 1.0}, {1.0, 1.0}, 0.0);
    GaussianStream rng(1);
    const std::vector<Eigen::VectorXd> m = {Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(-0.5, 0.25, 4)};
    const auto r = aircomp_receive(m, ch, 3, rng);
    EXPECT_EQ(r.value, Eigen::Vector3d(0.5, 2.25, 7));
    EXPECT_EQ(r.mode, SignalingMode::kAirComp);
}

TEST(AirCompReceive, GainScaling)
{
    const auto ch = make_channel({2.0}, {1.0}, 0.0);
    GaussianStream rng(1);
    const std::vector<Eigen::VectorXd> m = {Eigen::Vector2d(1, 0)};
    EXPECT_EQ(aircomp_receive(m, ch, 2, rng).value, Eigen::Vector2d(2, 0));
}

TEST(AirCompReceive, NoiseMatchesSeedStream)
{
    const auto ch = make_channel({0.5, 1.5}, {1.0, 1.0}, 2.0);
    const std::vector<Eigen::VectorXd> m = {Eigen::Vector2d(1, 1), Eigen::Vector2d(2, -1)};
    GaussianStream rng(42), replay(42);
    const auto r = aircomp_receive(m, ch, 2, rng);
    const double sd = std::sqrt(2.0);
    const double n0 = sd * replay.standard(), n1 = sd * replay.standard();
    EXPECT_EQ(r.value(0), 0.5 * 1 + 1.5 * 2 + n0);
    EXPECT_EQ(r.value(1), 0.5 * 1 + 1.5 * -1 + n1);
}

TEST(AirCompReceive, EmptyNeighborSetIsPureNoise)
{
    const auto ch = make_channel({}, {}, 1.0);
    GaussianStream rng(3);
    const auto r = aircomp_receive({}, ch, 4, rng);
    EXPECT_EQ(r.value.size(), 4);
    EXPECT_GT(r.value.norm(), 0.0);
}

TEST(AirCompReceive, RejectsWidthMismatch)
{
    const auto ch = make_channel({1.0, 1.0}, {1.0, 1.0}, 0.0);
    GaussianStream rng(1);
    const std::vector<Eigen::VectorXd> m = {Eigen::Vector2d(1, 0), Eigen::Vector3d(1, 0, 0)};
    EXPECT_THROW(aircomp_receive(m, ch, 2, rng), DimensionError);
}

TEST(AirCompReceive, NoiseVariance)
{
    const auto ch = make_channel({1.0}, {1.0}, 0.25);
    GaussianStream rng(8);
    const std::vector<Eigen::VectorXd> m = {Eigen::VectorXd::Zero(20000)};
    const auto r = aircomp_receive(m, ch, 20000, rng);
    EXPECT_NEAR(r.value.squaredNorm() / 20000.0, 0.25, 0.01);
    EXPECT_NEAR(r.value.mean(), 0.0, 0.01);
}

TEST(OrthogonalReceive, Examples)
{
    GaussianStream rng(1);
    EXPECT_EQ(orthogonal_receive(Eigen::Vector2d(3, -1), 1.0, 0.0, rng).value, Eigen::Vector2d(3, -1));
    EXPECT_EQ(orthogonal_receive(Eigen::VectorXd::Constant(1, 2.0), 0.5, 0.0, rng).value(0), 1.0);
}

TEST(OrthogonalReceive, SuccessiveLinksDrawDifferentNoise)
{
    GaussianStream rng(5);
    const auto a = orthogonal_receive(Eigen::VectorXd::Zero(3), 1.0, 1.0, rng);
    const auto b = orthogonal_receive(Eigen::VectorXd::Zero(3), 1.0, 1.0, rng);
    GaussianStream replay(5);
    for (int i = 0; i < 3; ++i)
        EXPECT_EQ(a.value(i), replay.standard());
    for (int i = 0; i < 3; ++i)
        EXPECT_EQ(b.value(i), replay.standard());
    EXPECT_NE(a.value, b.value);
}

TEST(NoiseScale, AirCompLaterIterationsUseWeakestLink)
{
    const auto ch = make_channel({1.0, 2.0}, {1.0, 1.0}, 1.0);
    const auto sol = solve_aircomp_first_iteration(ch.instance(), {1.0, 1e-4});
    EXPECT_NEAR(noisy_iteration_noise_scale(ch, sol, SignalingMode::kAirComp, 2).channel_divisor, 1.0, 1e-15);
}

TEST(NoiseScale, AirCompFirstIteration)
{
    const auto ch = make_channel({1.0, 2.0}, {1.0, 1.0}, 1.0);
    const auto sol = solve_aircomp_first_iteration(ch.instance(), {1.0, 1e-4});
    const NoiseScales s = noisy_iteration_noise_scale(ch, sol, SignalingMode::kAirComp, 1);
    EXPECT_NEAR(s.channel_divisor, 0.27830103005718676, 1e-12);
    EXPECT_NEAR(s.artificial_scale[1], std::sqrt(4.0 * 0.9806371341672772) / 0.27830103005718676, 1e-12);
    EXPECT_NEAR(s.artificial_scale[1], 7.116547, 1e-6);
}

TEST(NoiseScale, OrthogonalFirstIteration)
{
    const auto ch = make_channel({1.0}, {1.0}, 1.0);
    SignalingSolution sol;
    sol.mode = SignalingMode::kOrthogonal;
    sol.alpha = {0.5};
    sol.beta = {0.5};
    sol.gamma = {1.0};
    const NoiseScales s = noisy_iteration_noise_scale(ch, sol, SignalingMode::kOrthogonal, 1);
    EXPECT_DOUBLE_EQ(s.artificial_scale[0], 1.0);
    EXPECT_DOUBLE_EQ(s.link_channel_divisor[0], std::sqrt(0.5));
    const NoiseScales later = noisy_iteration_noise_scale(ch, sol, SignalingMode::kOrthogonal, 3);
    EXPECT_DOUBLE_EQ(later.link_channel_divisor[0], 1.0);
}

TEST(NoiseScale, InvalidSolutions)
{
    const auto ch = make_channel({1.0}, {1.0}, 1.0);
    SignalingSolution sol;
    sol.alpha = {0.0};
    sol.beta = {0.5};
    EXPECT_THROW(noisy_iteration_noise_scale(ch, sol, SignalingMode::kAirComp, 1), ContractError);
    EXPECT_THROW(noisy_iteration_noise_scale(ch, sol, SignalingMode::kOrthogonal, 1), ContractError);
    EXPECT_THROW(noisy_iteration_noise_scale(ch, sol, SignalingMode::kAirComp, 0), std::invalid_argument);
}

TEST(ControlChannel, FromLayout)
{
    const Layout l = generate_layout(4, 30.0, 0.6, 9);
    const ControlChannel ch = control_channel(l, 2, 10.0);
    EXPECT_EQ(ch.neighbors, (std::vector<int>{0, 1, 3}));
    EXPECT_DOUBLE_EQ(ch.gain[2], l.gain(3, 2).magnitude());
    EXPECT_DOUBLE_EQ(ch.noise_var, 0.6);
    EXPECT_DOUBLE_EQ(ch.instance().rx_power[0], l.gain(0, 2).power() * 10.0);
    EXPECT_THROW(control_channel(l, 4, 10.0), std::out_of_range);
}

TEST(EstimateNoise, NoneIsZeroAndChannelOnlyUsesWeakestLink)
{
    const auto ch = make_channel({1.0, 3.0}, {4.0, 4.0}, 1.0);
    GaussianStream rng(2);
    EXPECT_EQ(estimate_noise(ch, nullptr, SignalingMode::kAirComp, NoiseModel::kNone, 1, 3, rng),
              Eigen::RowVectorXd::Zero(3));
    GaussianStream a(4), b(4);
    const auto n = estimate_noise(ch, nullptr, SignalingMode::kAirComp, NoiseModel::kChannelOnly, 1, 2, a);
    EXPECT_DOUBLE_EQ(n(0), b.standard() / 2.0);
    EXPECT_DOUBLE_EQ(n(1), b.standard() / 2.0);
}
