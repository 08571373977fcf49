// SPDX-License-Identifier: Apache-2.0
//
// Decentralized inference over the simulated control channel. Every node
// holds the same model; in iteration k each node computes its outgoing
// messages, transmits them over the air, and updates its own state from the
// estimate of the aggregated message it receives.
//
// Iteration 1 transmits unit-norm messages with privacy-preserving signaling
// and the estimate is the received signal divided by C_v (AirComp) or the
// per-link amplitude |g| sqrt(alpha P) (orthogonal). Later iterations send raw
// messages with aligned (AirComp) or full (orthogonal) power.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "airgnn/channel.hpp"
#include "airgnn/gnn.hpp"
#include "airgnn/netgraph.hpp"
#include "airgnn/signaling.hpp"

namespace airgnn {

struct InferenceOptions {
    PrivacyTarget target;
    SignalingMode mode = SignalingMode::kAirComp;
    double control_power_dbm = 10.0;
    bool optimal_signaling = true; // false: halved gamma, beta = 1 - alpha
    bool record_first_estimates = false;
    int wmmse_iterations = 100;
    /// Reference WMMSE sum rate; computed when NaN.
    double wmmse_sum_rate = std::numeric_limits<double>::quiet_NaN();
};

struct InferenceReport {
    Eigen::VectorXd powers;            // mW
    std::vector<double> analytic_snr;  // first-iteration SNR of the signaling solution
    std::vector<double> measured_snr;  // 1 / per-entry squared error of the iteration-1 estimate
    std::vector<double> first_mse;     // per-entry squared error of the iteration-1 estimate
    std::vector<Regime> regime;
    std::vector<bool> privacy_limited;
    std::vector<bool> has_neighbors;
    std::vector<SignalingSolution> solutions;
    double frac_privacy_limited = 0.0; // over nodes with at least one neighbor
    double sum_rate = 0.0;
    double wmmse_sum_rate = 0.0;
    double normalized_sum_rate = 0.0;

    // Filled when InferenceOptions::record_first_estimates is set.
    Eigen::MatrixXd first_estimates; // nodes x message_dim
    Eigen::MatrixXd first_clean;     // noiseless aggregate of unit-norm messages
};

/// Runs all K iterations. Noise for receiver v in iteration k is drawn from
/// substream_seed(rng_seed, v, k).
InferenceReport decentralized_infer(const GnnModel &model, const Layout &layout, const InferenceOptions &options,
                                    std::uint64_t rng_seed);

/// Fraction of nodes with neighbors that are privacy-limited, pooled over reports.
double region_fraction(std::span<const InferenceReport> reports);

struct SensitivityReport {
    double max_aggregate_diff = 0.0; // AirComp: || sum_u C_v * (unit_u - unit'_u) ||
    double aggregate_bound = 0.0;    // 2 C_v
    std::vector<double> max_link_diff;  // per neighbor
    std::vector<double> link_bound;     // 2 |g| sqrt(alpha P)
};

/// Monte Carlo over pairs of graphs differing in one neighbor's node feature:
/// returns the largest observed change of the noiseless protected part of the
/// iteration-1 signal at receiver v.
SensitivityReport empirical_sensitivity(const GnnModel &model, const NetworkGraph &graph, int v,
                                        const ReceiverInstance &instance, const SignalingSolution &solution,
                                        int trials, std::uint64_t rng_seed);

} // namespace airgnn
