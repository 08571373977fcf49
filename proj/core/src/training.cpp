// SPDX-License-Identifier: Apache-2.0
#include "airgnn/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "airgnn/baselines.hpp"
#include "airgnn/error.hpp"
#include "airgnn/rng.hpp"

namespace airgnn {

std::string to_string(TrainVariant v)
{
    switch (v) {
    case TrainVariant::kClassic: return "classic";
    case TrainVariant::kNoArtificialNoise: return "no-artificial-noise";
    case TrainVariant::kPrivacyGuaranteed: return "privacy-guaranteed";
    }
    return "unknown";
}

TrainVariant train_variant_from_string(const std::string &s)
{
    if (s == "classic")
        return TrainVariant::kClassic;
    if (s == "no-artificial-noise")
        return TrainVariant::kNoArtificialNoise;
    if (s == "privacy-guaranteed")
        return TrainVariant::kPrivacyGuaranteed;
    throw std::invalid_argument("unknown training variant '" + s +
                                "' (expected classic, no-artificial-noise or privacy-guaranteed)");
}

NoiseModel noise_model(TrainVariant v)
{
    switch (v) {
    case TrainVariant::kClassic: return NoiseModel::kNone;
    case TrainVariant::kNoArtificialNoise: return NoiseModel::kChannelOnly;
    case TrainVariant::kPrivacyGuaranteed: return NoiseModel::kPrivacyGuaranteed;
    }
    return NoiseModel::kNone;
}

void TrainConfig::validate() const
{
    if (epochs < 0)
        throw std::invalid_argument("train config: epochs must be >= 0");
    if (batch_size < 1)
        throw std::invalid_argument("train config: batch_size must be >= 1");
    if (!(learning_rate > 0.0))
        throw std::invalid_argument("train config: learning_rate must be > 0");
    target.validate();
}

SampleSignaling preprocess_sample(const Layout &layout, const PrivacyTarget &target, SignalingMode mode,
                                  double control_power_dbm)
{
    const double p = dbm_to_mw(control_power_dbm);
    SampleSignaling s;
    s.channels.reserve(layout.n_pairs());
    s.solutions.reserve(layout.n_pairs());
    for (int v = 0; v < layout.n_pairs(); ++v) {
        s.channels.push_back(control_channel(layout, v, p));
        if (s.channels.back().size() == 0)
            s.solutions.emplace_back();
        else
            s.solutions.push_back(solve_signaling(s.channels.back().instance(), target, mode));
    }
    return s;
}

SampleSignaling preprocess_sample(const Layout &layout, const TrainConfig &config)
{
    return preprocess_sample(layout, config.target, config.mode, config.control_power_dbm);
}

std::vector<TrainingSample> prepare_samples(std::span<const Layout> layouts, const TrainConfig &config)
{
    std::vector<TrainingSample> out;
    out.reserve(layouts.size());
    for (const auto &l : layouts)
        out.push_back({l, layout_to_graph(l), preprocess_sample(l, config)});
    return out;
}

std::vector<Eigen::MatrixXd> draw_forward_noise(const GnnModel &model, std::span<const TrainingSample *const> samples,
                                                const GraphBatch &batch, NoiseModel noise, SignalingMode mode,
                                                std::span<const std::uint64_t> sample_roots)
{
    const int K = model.layer_count();
    std::vector<Eigen::MatrixXd> out(K);
    if (noise == NoiseModel::kNone)
        return out;
    if (sample_roots.size() != samples.size() || static_cast<int>(samples.size()) != batch.graph_count())
        throw DimensionError("draw_forward_noise: samples, seeds and batch disagree");
    for (int k = 1; k <= K; ++k) {
        const Eigen::Index dim = model.message_dim(k);
        Eigen::MatrixXd &nk = out[k - 1];
        nk.resize(batch.graph.node_count, dim);
        for (std::size_t s = 0; s < samples.size(); ++s) {
            const auto &sig = samples[s]->signaling;
            const int n = samples[s]->layout.n_pairs();
            for (int v = 0; v < n; ++v) {
                GaussianStream rng(substream_seed(sample_roots[s], static_cast<std::uint64_t>(v),
                                                  static_cast<std::uint64_t>(k)));
                const SignalingSolution *sol = sig.channels[v].size() ? &sig.solutions[v] : nullptr;
                nk.row(batch.node_offsets[s] + v) =
                    estimate_noise(sig.channels[v], sol, mode, noise, k, dim, rng);
            }
        }
    }
    return out;
}

Eigen::MatrixXd noisy_forward(const GnnModel &model, const GraphBatch &batch,
                              std::span<const TrainingSample *const> samples, TrainVariant variant, SignalingMode mode,
                              std::span<const std::uint64_t> sample_roots, Mode bn_mode, GnnTape *tape,
                              std::vector<Eigen::MatrixXd> *noise_out)
{
    ForwardOptions opt;
    opt.mode = bn_mode;
    opt.normalize_first_layer = variant == TrainVariant::kPrivacyGuaranteed;
    opt.aggregate_noise = draw_forward_noise(model, samples, batch, noise_model(variant), mode, sample_roots);
    Eigen::MatrixXd out = gnn_forward(model, batch, opt, tape);
    if (noise_out)
        *noise_out = std::move(opt.aggregate_noise);
    return out;
}

double negative_sum_rate_loss(std::span<const TrainingSample *const> samples, const GraphBatch &batch,
                              const Eigen::MatrixXd &output, Eigen::MatrixXd *d_output)
{
    if (output.cols() != 1 || output.rows() != batch.graph.node_count)
        throw DimensionError("loss: expected one output per node");
    if (d_output)
        d_output->setZero(output.rows(), 1);
    const double inv_b = 1.0 / static_cast<double>(samples.size());
    double loss = 0.0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const Layout &l = samples[s]->layout;
        const int n = l.n_pairs(), off = batch.node_offsets[s];
        const Eigen::VectorXd p = l.p_max_mw() * output.col(0).segment(off, n);
        loss -= inv_b * sum_rate_unchecked(l, p);
        if (d_output)
            d_output->col(0).segment(off, n) = -inv_b * l.p_max_mw() * sum_rate_gradient(l, p);
    }
    return loss;
}

void adam_step(std::span<Eigen::MatrixXd *const> params, std::span<const Eigen::MatrixXd *const> grads,
               AdamState &state, double lr)
{
    if (params.size() != grads.size())
        throw DimensionError("adam: parameter and gradient counts differ");
    if (state.m.empty()) {
        for (const auto *p : params) {
            state.m.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
            state.v.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
        }
    }
    if (state.m.size() != params.size())
        throw DimensionError("adam: state does not match the parameter list");
    ++state.step;
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto &p = *params[i];
        const auto &g = *grads[i];
        if (g.rows() != p.rows() || g.cols() != p.cols() || state.m[i].rows() != p.rows() ||
            state.m[i].cols() != p.cols())
            throw DimensionError("adam: shape mismatch in parameter " + std::to_string(i));
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g.cwiseAbs2();
        p.array() -= lr * (state.m[i].array() / c1) / ((state.v[i].array() / c2).sqrt() + state.eps);
    }
}

TrainRun train(const TrainConfig &config, std::span<const TrainingSample> samples, const EpochCallback &on_epoch)
{
    return train(config, samples, GnnModel::power_control(derive_seed(config.rng_seed, {0x1417ULL})), on_epoch);
}

TrainRun train(const TrainConfig &config, std::span<const TrainingSample> samples, GnnModel initial,
               const EpochCallback &on_epoch)
{
    config.validate();
    if (samples.empty())
        throw std::invalid_argument("train: empty dataset");
    const auto t0 = std::chrono::steady_clock::now();

    TrainRun run;
    run.config = config;
    run.model = std::move(initial);
    AdamState adam;
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::mt19937_64 shuffle_rng(derive_seed(config.rng_seed, {0x5u, static_cast<std::uint64_t>(epoch)}));
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batches) {
            const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
            std::vector<const TrainingSample *> batch_samples;
            std::vector<const NetworkGraph *> graphs;
            std::vector<std::uint64_t> roots;
            for (std::size_t i = start; i < stop; ++i) {
                batch_samples.push_back(&samples[order[i]]);
                graphs.push_back(&samples[order[i]].graph);
                roots.push_back(derive_seed(config.rng_seed, {0x7u, static_cast<std::uint64_t>(epoch),
                                                              static_cast<std::uint64_t>(i)}));
            }
            const GraphBatch batch = make_batch(graphs);

            GnnTape tape;
            const Eigen::MatrixXd out =
                noisy_forward(run.model, batch, batch_samples, config.variant, config.mode, roots, Mode::kTrain, &tape);
            Eigen::MatrixXd d_out;
            const double loss = negative_sum_rate_loss(batch_samples, batch, out, &d_out);
            if (!std::isfinite(loss))
                throw NumericError("training diverged: non-finite loss at epoch " + std::to_string(epoch) +
                                   ", batch " + std::to_string(batches));
            GnnGradients grads = run.model.zero_gradients();
            gnn_backward(run.model, batch, tape, d_out, grads);
            update_running_stats(run.model, tape);
            auto params = run.model.parameters();
            const auto &cgrads = grads;
            const auto flat = cgrads.flat();
            adam_step(params, flat, adam, config.learning_rate);
            epoch_loss += loss;
        }
        run.loss_history.push_back(epoch_loss / static_cast<double>(batches));
        if (on_epoch)
            on_epoch(epoch, run.loss_history.back());
    }
    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

double evaluate_clean_loss(const GnnModel &model, std::span<const TrainingSample> samples)
{
    if (samples.empty())
        throw std::invalid_argument("evaluate_clean_loss: empty sample set");
    double total = 0.0;
    for (const auto &s : samples) {
        const Eigen::MatrixXd out = gnn_forward_clean(model, s.graph);
        total -= sum_rate_unchecked(s.layout, s.layout.p_max_mw() * out.col(0));
    }
    return total / static_cast<double>(samples.size());
}

} // namespace airgnn
