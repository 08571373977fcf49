// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "airgnn/signaling.hpp"

using namespace airgnn;

namespace {

ReceiverInstance random_receiver(int neighbors, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> lr(std::log(1e-2), std::log(1e2));
    ReceiverInstance inst;
    for (int i = 0; i < neighbors; ++i)
        inst.rx_power.push_back(std::exp(lr(rng)));
    inst.noise_var = 1.0;
    return inst;
}

// Budget halfway (in log scale) between the two thresholds.
double intermediate_eps(const ReceiverInstance &inst)
{
    const Thresholds th = eps_thresholds(inst, 1e-4);
    return std::sqrt(th.eps0 * th.eps1);
}

} // namespace

static void BM_SolveAirComp(benchmark::State &state)
{
    const ReceiverInstance inst = random_receiver(static_cast<int>(state.range(0)), 1);
    const PrivacyTarget target{intermediate_eps(inst), 1e-4};
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_aircomp_first_iteration(inst, target));
}
BENCHMARK(BM_SolveAirComp)->RangeMultiplier(4)->Range(2, 128);

static void BM_SolveOrthogonal(benchmark::State &state)
{
    const ReceiverInstance inst = random_receiver(static_cast<int>(state.range(0)), 1);
    const PrivacyTarget target{intermediate_eps(inst), 1e-4};
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_orthogonal_first_iteration(inst, target));
}
BENCHMARK(BM_SolveOrthogonal)->RangeMultiplier(4)->Range(2, 128);

static void BM_WaterFilling(benchmark::State &state)
{
    const ReceiverInstance inst = random_receiver(static_cast<int>(state.range(0)), 2);
    const double eps = intermediate_eps(inst);
    for (auto _ : state)
        benchmark::DoNotOptimize(water_filling(inst, eps, 1e-4));
}
BENCHMARK(BM_WaterFilling)->RangeMultiplier(4)->Range(2, 128);
