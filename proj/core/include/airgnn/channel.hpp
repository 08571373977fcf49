// SPDX-License-Identifier: Apache-2.0
//
// Control-plane links used while nodes exchange messages. Transmitters
// pre-compensate the channel phase exactly, so all arithmetic is real-valued
// on the gain magnitudes |g_uv|. Channel noise is real Gaussian with variance
// sigma_v^2 per entry.

#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "airgnn/netgraph.hpp"
#include "airgnn/rng.hpp"
#include "airgnn/signaling.hpp"

namespace airgnn {

struct ControlChannel {
    int receiver = 0;
    std::vector<int> neighbors;  // transmitting nodes, ascending
    std::vector<double> gain;    // |g_uv|
    std::vector<double> power;   // P_u (mW)
    double noise_var = 1.0;      // sigma_v^2

    int size() const noexcept { return static_cast<int>(neighbors.size()); }

    /// r_u = |g_uv|^2 P_u.
    ReceiverInstance instance() const;

    /// Requires matching lengths, P_u > 0 and noise_var >= 0.
    void validate() const;
};

/// Links into receiver v from every other node of the layout, each transmitting with `power_mw`.
ControlChannel control_channel(const Layout &layout, int v, double power_mw);

struct ReceivedSignal {
    Eigen::VectorXd value;
    SignalingMode mode = SignalingMode::kAirComp;
    int iteration = 1;
};

/// sum_u |g_uv| * scaled_u + n_v. With no neighbors the result is pure noise of width `dim`.
ReceivedSignal aircomp_receive(std::span<const Eigen::VectorXd> scaled, const ControlChannel &channel, Eigen::Index dim,
                               GaussianStream &rng, int iteration = 1);

/// |g| * message + n for one link.
ReceivedSignal orthogonal_receive(const Eigen::VectorXd &message, double gain, double noise_var, GaussianStream &rng,
                                  int iteration = 1);

/// Scale factors mapping physical noise into the receiver's estimate of the aggregated message.
struct NoiseScales {
    double channel_divisor = 1.0;             // AirComp
    std::vector<double> link_channel_divisor; // orthogonal, per neighbor
    std::vector<double> artificial_scale;     // iteration 1 only, per neighbor
};

/// Iteration-1 scales come from the signaling solution; later iterations use
/// the aligned amplitude (AirComp) or sqrt(|g|^2 P) per link (orthogonal).
NoiseScales noisy_iteration_noise_scale(const ControlChannel &channel, const SignalingSolution &solution,
                                        SignalingMode mode, int k);

enum class NoiseModel {
    kNone,              // clean aggregation
    kChannelOnly,       // fading and channel noise, no artificial noise
    kPrivacyGuaranteed, // artificial noise in iteration 1, channel noise everywhere
};

/// Additive noise on the receiver's aggregated-message estimate for iteration k.
///
/// Draw order (shared with the protocol simulation): iteration 1 with
/// artificial noise draws m_u for every neighbor before the channel noise
/// (AirComp) or m_u then n_u per neighbor (orthogonal); otherwise one n_v
/// (AirComp) or n_u per neighbor (orthogonal).
Eigen::RowVectorXd estimate_noise(const ControlChannel &channel, const SignalingSolution *solution, SignalingMode mode,
                                  NoiseModel model, int k, Eigen::Index dim, GaussianStream &rng);

} // namespace airgnn
