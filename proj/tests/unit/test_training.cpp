// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "airgnn/baselines.hpp"
#include "airgnn/error.hpp"
#include "airgnn/training.hpp"
#include "gradcheck.hpp"
#include "oracles.hpp"

using namespace airgnn;
namespace t = airgnn::testing;

namespace {

struct Batch {
    std::vector<TrainingSample> samples;
    std::vector<const TrainingSample *> ptrs;
    std::vector<std::uint64_t> roots;
    GraphBatch batch;
};

Batch make_training_batch(int count, int pairs, const TrainConfig &cfg, std::uint64_t seed)
{
    Batch b;
    const auto layouts = generate_layouts(count, pairs, 30.0, 1.0, seed);
    b.samples = prepare_samples(layouts, cfg);
    std::vector<const NetworkGraph *> graphs;
    for (std::size_t i = 0; i < b.samples.size(); ++i) {
        b.ptrs.push_back(&b.samples[i]);
        graphs.push_back(&b.samples[i].graph);
        b.roots.push_back(seed * 1000 + i);
    }
    b.batch = make_batch(graphs);
    return b;
}

} // namespace

TEST(Adam, TwoStepHandTrace)
{
    Eigen::MatrixXd p = Eigen::MatrixXd::Constant(1, 1, 1.0);
    Eigen::MatrixXd g = Eigen::MatrixXd::Constant(1, 1, 0.5);
    std::vector<Eigen::MatrixXd *> params = {&p};
    std::vector<const Eigen::MatrixXd *> grads = {&g};
    AdamState s;
    adam_step(params, grads, s, 0.1);
    // First step moves by lr * g / (|g| + eps).
    EXPECT_NEAR(p(0, 0), 1.0 - 0.1 * 0.5 / (0.5 + 1e-8), 1e-15);
    g(0, 0) = -1.0;
    adam_step(params, grads, s, 0.1);
    // m = -0.055, v = 0.00124975; corrected by 0.19 and 0.001999.
    const double mhat = -0.055 / 0.19, vhat = 0.00124975 / (1.0 - 0.999 * 0.999);
    EXPECT_NEAR(p(0, 0), 0.900000002 - 0.1 * mhat / (std::sqrt(vhat) + 1e-8), 1e-12);
    EXPECT_NEAR(p(0, 0), 0.9366103542405654, 1e-12);
    EXPECT_EQ(s.step, 2);
}

TEST(Adam, ZeroGradientLeavesParameters)
{
    Eigen::MatrixXd p = Eigen::MatrixXd::Constant(2, 3, 0.7), g = Eigen::MatrixXd::Zero(2, 3);
    std::vector<Eigen::MatrixXd *> params = {&p};
    std::vector<const Eigen::MatrixXd *> grads = {&g};
    AdamState s;
    adam_step(params, grads, s, 1e-3);
    EXPECT_EQ(p, Eigen::MatrixXd::Constant(2, 3, 0.7));
}

TEST(Adam, ShapeMismatch)
{
    Eigen::MatrixXd p(2, 2), g(2, 3);
    std::vector<Eigen::MatrixXd *> params = {&p};
    std::vector<const Eigen::MatrixXd *> grads = {&g};
    AdamState s;
    EXPECT_THROW(adam_step(params, grads, s, 1e-3), DimensionError);
}

TEST(TrainConfig, Validation)
{
    TrainConfig c;
    c.epochs = -1;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.batch_size = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.learning_rate = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.target.eps_star = -1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    EXPECT_THROW(train_variant_from_string("noisy"), std::invalid_argument);
    for (auto v : {TrainVariant::kClassic, TrainVariant::kNoArtificialNoise, TrainVariant::kPrivacyGuaranteed})
        EXPECT_EQ(train_variant_from_string(to_string(v)), v);
}

TEST(Train, ZeroEpochsReturnsInitialModel)
{
    TrainConfig cfg;
    cfg.epochs = 0;
    const auto layouts = generate_layouts(4, 3, 30.0, 1.0, 1);
    const auto samples = prepare_samples(layouts, cfg);
    const GnnModel init = GnnModel::power_control(5);
    const TrainRun run = train(cfg, samples, init);
    EXPECT_TRUE(run.loss_history.empty());
    const auto a = init.parameters(), b = run.model.parameters();
    for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_EQ(*a[i], *b[i]);
    EXPECT_THROW(train(cfg, std::span<const TrainingSample>{}), std::invalid_argument);
}

TEST(Train, IsDeterministic)
{
    TrainConfig cfg;
    cfg.epochs = 2;
    cfg.batch_size = 4;
    cfg.rng_seed = 11;
    const auto layouts = generate_layouts(10, 4, 30.0, 1.0, 3);
    const auto samples = prepare_samples(layouts, cfg);
    const TrainRun a = train(cfg, samples), b = train(cfg, samples);
    EXPECT_EQ(a.loss_history, b.loss_history);
    const auto pa = a.model.parameters(), pb = b.model.parameters();
    for (std::size_t i = 0; i < pa.size(); ++i)
        EXPECT_EQ(*pa[i], *pb[i]);
}

TEST(Train, SinglePairLearnsFullPower)
{
    TrainConfig cfg;
    cfg.variant = TrainVariant::kClassic;
    cfg.epochs = 40;
    cfg.batch_size = 16;
    cfg.learning_rate = 1e-2;
    const auto layouts = generate_layouts(64, 1, 30.0, 1.0, 4);
    const auto samples = prepare_samples(layouts, cfg);
    const TrainRun run = train(cfg, samples);
    for (const auto &s : samples)
        EXPECT_GT(gnn_forward_clean(run.model, s.graph)(0, 0), 0.99);
}

TEST(Train, LossDecreasesOnSmallProblem)
{
    TrainConfig cfg;
    cfg.variant = TrainVariant::kPrivacyGuaranteed;
    cfg.epochs = 8;
    cfg.batch_size = 16;
    cfg.learning_rate = 3e-3;
    const auto layouts = generate_layouts(64, 5, 30.0, 1.0, 9);
    const auto samples = prepare_samples(layouts, cfg);
    const TrainRun run = train(cfg, samples);
    ASSERT_EQ(run.loss_history.size(), 8u);
    EXPECT_LT(run.loss_history.back(), run.loss_history.front());
}

TEST(Preprocess, HugeBudgetNeedsNoArtificialNoise)
{
    TrainConfig cfg;
    cfg.target.eps_star = 1e6;
    const auto layouts = generate_layouts(3, 5, 30.0, 1.0, 2);
    for (const auto &l : layouts) {
        const SampleSignaling s = preprocess_sample(l, cfg);
        for (const auto &sol : s.solutions)
            for (double b : sol.beta)
                EXPECT_EQ(b, 0.0);
    }
}

TEST(Preprocess, IsolatedReceiverHasNoSolution)
{
    const Layout l(1, {{1, 0}}, {1.0}, 10.0);
    const SampleSignaling s = preprocess_sample(l, TrainConfig{});
    ASSERT_EQ(s.solutions.size(), 1u);
    EXPECT_TRUE(s.solutions[0].alpha.empty());
}

TEST(NoisyForward, ClassicIgnoresNoiseSeeds)
{
    TrainConfig cfg;
    Batch b = make_training_batch(3, 4, cfg, 5);
    const GnnModel m = GnnModel::power_control(2);
    const Eigen::MatrixXd a = noisy_forward(m, b.batch, b.ptrs, TrainVariant::kClassic, cfg.mode, b.roots, Mode::kEval);
    for (auto &r : b.roots)
        r += 77;
    EXPECT_EQ(a, noisy_forward(m, b.batch, b.ptrs, TrainVariant::kClassic, cfg.mode, b.roots, Mode::kEval));
    EXPECT_EQ(a, gnn_forward(m, b.batch, {}));
}

TEST(NoisyForward, NoiseIsSeededPerSample)
{
    TrainConfig cfg;
    Batch b = make_training_batch(3, 4, cfg, 6);
    const GnnModel m = GnnModel::power_control(2);
    std::vector<Eigen::MatrixXd> n1, n2;
    noisy_forward(m, b.batch, b.ptrs, TrainVariant::kPrivacyGuaranteed, cfg.mode, b.roots, Mode::kEval, nullptr, &n1);
    noisy_forward(m, b.batch, b.ptrs, TrainVariant::kPrivacyGuaranteed, cfg.mode, b.roots, Mode::kEval, nullptr, &n2);
    ASSERT_EQ(n1.size(), 3u);
    for (int k = 0; k < 3; ++k)
        EXPECT_EQ(n1[k], n2[k]);
    b.roots[1] += 1;
    noisy_forward(m, b.batch, b.ptrs, TrainVariant::kPrivacyGuaranteed, cfg.mode, b.roots, Mode::kEval, nullptr, &n2);
    EXPECT_EQ(n1[0].topRows(4), n2[0].topRows(4));
    EXPECT_NE(n1[0].middleRows(4, 4), n2[0].middleRows(4, 4));
}

TEST(Loss, GradientMatchesFiniteDifferences)
{
    TrainConfig cfg;
    Batch b = make_training_batch(3, 5, cfg, 8);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    Eigen::MatrixXd out(15, 1);
    for (int i = 0; i < 15; ++i)
        out(i, 0) = u(rng);
    Eigen::MatrixXd d;
    const double loss = negative_sum_rate_loss(b.ptrs, b.batch, out, &d);
    EXPECT_LT(loss, 0.0);
    auto f = [&] { return negative_sum_rate_loss(b.ptrs, b.batch, out); };
    for (int i = 0; i < 15; ++i)
        EXPECT_LT(t::relative_error(d(i, 0), t::central_difference(f, out.data() + i, 1e-6)), 1e-6) << i;
}

TEST(NoisyForward, GradientWithFrozenNoiseMatchesFiniteDifferences)
{
    TrainConfig cfg;
    Batch b = make_training_batch(3, 4, cfg, 12);
    GnnModel m = GnnModel::power_control(3);
    std::vector<Eigen::MatrixXd> noise;
    GnnTape tape;
    const Eigen::MatrixXd out = noisy_forward(m, b.batch, b.ptrs, TrainVariant::kPrivacyGuaranteed, cfg.mode, b.roots,
                                              Mode::kTrain, &tape, &noise);
    Eigen::MatrixXd d;
    negative_sum_rate_loss(b.ptrs, b.batch, out, &d);
    GnnGradients grads = m.zero_gradients();
    gnn_backward(m, b.batch, tape, d, grads);
    const auto flat = static_cast<const GnnGradients &>(grads).flat();

    ForwardOptions frozen;
    frozen.mode = Mode::kTrain;
    frozen.normalize_first_layer = true;
    frozen.aggregate_noise = noise;
    auto f = [&] { return negative_sum_rate_loss(b.ptrs, b.batch, gnn_forward(m, b.batch, frozen)); };
    std::mt19937_64 rng(4);
    const t::ProbeReport r = t::probe_gradients(m.parameters(), flat, f, t::bias_before_batch_norm(m), 100, rng);
    EXPECT_EQ(r.failures, 0) << r.first_failure << " (worst " << r.worst << ")";
}

TEST(EvaluateCleanLoss, MatchesManualSum)
{
    TrainConfig cfg;
    const auto layouts = generate_layouts(3, 4, 30.0, 1.0, 3);
    const auto samples = prepare_samples(layouts, cfg);
    const GnnModel m = GnnModel::power_control(8);
    double expect = 0.0;
    for (const auto &s : samples)
        expect -= sum_rate(s.layout, s.layout.p_max_mw() * gnn_forward_clean(m, s.graph).col(0));
    EXPECT_NEAR(evaluate_clean_loss(m, samples), expect / 3.0, 1e-12);
}
