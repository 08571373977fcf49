// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <vector>

#include "airgnn/gnn.hpp"
#include "airgnn/infer.hpp"
#include "airgnn/netgraph.hpp"
#include "airgnn/training.hpp"

using namespace airgnn;

static void BM_GnnForwardClean(benchmark::State &state)
{
    const GnnModel m = GnnModel::power_control(1);
    const NetworkGraph g = layout_to_graph(generate_layout(static_cast<int>(state.range(0)), 30.0, 1.0, 2));
    for (auto _ : state)
        benchmark::DoNotOptimize(gnn_forward_clean(m, g));
}
BENCHMARK(BM_GnnForwardClean)->Arg(10)->Arg(20)->Arg(50);

static void BM_DecentralizedInfer(benchmark::State &state)
{
    const GnnModel m = GnnModel::power_control(1);
    const Layout l = generate_layout(static_cast<int>(state.range(0)), 30.0, 1.0, 2);
    InferenceOptions o;
    o.wmmse_sum_rate = 1.0;
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(decentralized_infer(m, l, o, seed++));
}
BENCHMARK(BM_DecentralizedInfer)->Arg(10)->Arg(20);

// One minibatch of privacy-guaranteed training: noisy forward, loss, backward, Adam.
static void BM_TrainStep(benchmark::State &state)
{
    TrainConfig cfg;
    const auto layouts = generate_layouts(static_cast<int>(state.range(0)), 10, 30.0, 1.0, 4);
    const auto samples = prepare_samples(layouts, cfg);
    std::vector<const TrainingSample *> ptrs;
    std::vector<const NetworkGraph *> graphs;
    std::vector<std::uint64_t> roots;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        ptrs.push_back(&samples[i]);
        graphs.push_back(&samples[i].graph);
        roots.push_back(i);
    }
    const GraphBatch batch = make_batch(graphs);
    GnnModel m = GnnModel::power_control(5);
    AdamState adam;
    for (auto _ : state) {
        GnnTape tape;
        const Eigen::MatrixXd out =
            noisy_forward(m, batch, ptrs, TrainVariant::kPrivacyGuaranteed, cfg.mode, roots, Mode::kTrain, &tape);
        Eigen::MatrixXd d;
        benchmark::DoNotOptimize(negative_sum_rate_loss(ptrs, batch, out, &d));
        GnnGradients grads = m.zero_gradients();
        gnn_backward(m, batch, tape, d, grads);
        adam_step(m.parameters(), static_cast<const GnnGradients &>(grads).flat(), adam, 1e-3);
        for (auto &r : roots)
            r += samples.size();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainStep)->Arg(16)->Arg(64);
