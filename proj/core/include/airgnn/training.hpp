// SPDX-License-Identifier: Apache-2.0
//
// Unsupervised training of the power-control GNN: loss is the negative sum
// rate averaged over a minibatch, optimized with Adam. The noisy variants
// inject the channel (and optionally artificial) noise that decentralized
// inference will see into the aggregated messages during the forward pass.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "airgnn/channel.hpp"
#include "airgnn/gnn.hpp"
#include "airgnn/netgraph.hpp"
#include "airgnn/signaling.hpp"

namespace airgnn {

enum class TrainVariant { kClassic, kNoArtificialNoise, kPrivacyGuaranteed };

std::string to_string(TrainVariant v);
TrainVariant train_variant_from_string(const std::string &s);

/// Noise injected by each variant.
NoiseModel noise_model(TrainVariant v);

struct TrainConfig {
    TrainVariant variant = TrainVariant::kPrivacyGuaranteed;
    SignalingMode mode = SignalingMode::kAirComp;
    int epochs = 100;
    int batch_size = 64;
    double learning_rate = 1e-3;
    std::uint64_t rng_seed = 0;
    double control_power_dbm = 10.0;
    PrivacyTarget target;

    void validate() const;
};

/// Control channels and first-iteration signaling of every receiver of one layout.
struct SampleSignaling {
    std::vector<ControlChannel> channels;
    std::vector<SignalingSolution> solutions; // default-constructed for receivers without neighbors
};

SampleSignaling preprocess_sample(const Layout &layout, const PrivacyTarget &target, SignalingMode mode,
                                  double control_power_dbm);
SampleSignaling preprocess_sample(const Layout &layout, const TrainConfig &config);

struct TrainingSample {
    Layout layout;
    NetworkGraph graph;
    SampleSignaling signaling;
};

std::vector<TrainingSample> prepare_samples(std::span<const Layout> layouts, const TrainConfig &config);

/// Per-layer additive noise for a batch of samples. Sample s draws its noise
/// for receiver v in iteration k from substream_seed(sample_roots[s], v, k).
std::vector<Eigen::MatrixXd> draw_forward_noise(const GnnModel &model, std::span<const TrainingSample *const> samples,
                                                const GraphBatch &batch, NoiseModel noise, SignalingMode mode,
                                                std::span<const std::uint64_t> sample_roots);

/// Forward pass of one variant (noise drawn as in draw_forward_noise). The drawn
/// noise is stored in `noise_out` when given so it can be replayed.
Eigen::MatrixXd noisy_forward(const GnnModel &model, const GraphBatch &batch,
                              std::span<const TrainingSample *const> samples, TrainVariant variant, SignalingMode mode,
                              std::span<const std::uint64_t> sample_roots, Mode bn_mode, GnnTape *tape = nullptr,
                              std::vector<Eigen::MatrixXd> *noise_out = nullptr);

/// Mean negative sum rate of a batch given the model outputs (sigmoid in [0,1]);
/// `d_output` receives d(loss)/d(output) when given.
double negative_sum_rate_loss(std::span<const TrainingSample *const> samples, const GraphBatch &batch,
                              const Eigen::MatrixXd &output, Eigen::MatrixXd *d_output = nullptr);

struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;
    std::vector<Eigen::MatrixXd> m;
    std::vector<Eigen::MatrixXd> v;
};

/// Bias-corrected Adam; state moments are allocated on first use.
void adam_step(std::span<Eigen::MatrixXd *const> params, std::span<const Eigen::MatrixXd *const> grads,
               AdamState &state, double lr);

struct TrainRun {
    TrainConfig config;
    std::vector<double> loss_history; // mean training loss per epoch
    GnnModel model;
    double wall_seconds = 0.0;
};

using EpochCallback = std::function<void(int epoch, double mean_loss)>;

/// Trains GnnModel::power_control(seed-derived) on the samples.
TrainRun train(const TrainConfig &config, std::span<const TrainingSample> samples, const EpochCallback &on_epoch = {});

/// Same, starting from a given model.
TrainRun train(const TrainConfig &config, std::span<const TrainingSample> samples, GnnModel initial,
               const EpochCallback &on_epoch = {});

/// Mean clean (noise-free, eval-mode) negative sum rate.
double evaluate_clean_loss(const GnnModel &model, std::span<const TrainingSample> samples);

} // namespace airgnn
