// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "airgnn/baselines.hpp"
#include "airgnn/netgraph.hpp"

using namespace airgnn;

static void BM_Wmmse(benchmark::State &state)
{
    const Layout l = generate_layout(static_cast<int>(state.range(0)), 30.0, 1.0, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(wmmse(l));
}
BENCHMARK(BM_Wmmse)->Arg(10)->Arg(20)->Arg(50);

static void BM_SumRateGradient(benchmark::State &state)
{
    const Layout l = generate_layout(static_cast<int>(state.range(0)), 30.0, 1.0, 3);
    const Eigen::VectorXd p = Eigen::VectorXd::Constant(l.n_pairs(), 0.5 * l.p_max_mw());
    for (auto _ : state)
        benchmark::DoNotOptimize(sum_rate_gradient(l, p));
}
BENCHMARK(BM_SumRateGradient)->Arg(10)->Arg(50);
