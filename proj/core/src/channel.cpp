// SPDX-License-Identifier: Apache-2.0
#include "airgnn/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "airgnn/error.hpp"

namespace airgnn {

ReceiverInstance ControlChannel::instance() const
{
    ReceiverInstance inst;
    inst.noise_var = noise_var;
    inst.rx_power.reserve(gain.size());
    for (std::size_t u = 0; u < gain.size(); ++u)
        inst.rx_power.push_back(gain[u] * gain[u] * power[u]);
    return inst;
}

void ControlChannel::validate() const
{
    if (gain.size() != neighbors.size() || power.size() != neighbors.size())
        throw DimensionError("control channel: neighbor, gain and power lists differ in length");
    for (double p : power)
        if (!(p > 0.0))
            throw std::invalid_argument("control channel: transmit powers must be > 0");
    if (!(noise_var >= 0.0))
        throw std::invalid_argument("control channel: noise variance must be >= 0");
}

ControlChannel control_channel(const Layout &layout, int v, double power_mw)
{
    if (v < 0 || v >= layout.n_pairs())
        throw std::out_of_range("control_channel: receiver index out of range");
    ControlChannel ch;
    ch.receiver = v;
    ch.noise_var = layout.noise_var(v);
    for (int u = 0; u < layout.n_pairs(); ++u) {
        if (u == v)
            continue;
        ch.neighbors.push_back(u);
        ch.gain.push_back(layout.gain(u, v).magnitude());
        ch.power.push_back(power_mw);
    }
    ch.validate();
    return ch;
}

ReceivedSignal aircomp_receive(std::span<const Eigen::VectorXd> scaled, const ControlChannel &channel, Eigen::Index dim,
                               GaussianStream &rng, int iteration)
{
    channel.validate();
    if (scaled.size() != channel.neighbors.size())
        throw DimensionError("aircomp_receive: one message per neighbor is required");
    ReceivedSignal out;
    out.mode = SignalingMode::kAirComp;
    out.iteration = iteration;
    out.value = Eigen::VectorXd::Zero(dim);
    for (std::size_t u = 0; u < scaled.size(); ++u) {
        if (scaled[u].size() != dim)
            throw DimensionError("aircomp_receive: message " + std::to_string(u) + " has width " +
                                 std::to_string(scaled[u].size()) + ", expected " + std::to_string(dim));
        out.value += channel.gain[u] * scaled[u];
    }
    const double sd = std::sqrt(channel.noise_var);
    for (Eigen::Index i = 0; i < dim; ++i)
        out.value(i) += rng(sd);
    if (!out.value.allFinite())
        throw NumericError("aircomp_receive: non-finite received signal");
    return out;
}

ReceivedSignal orthogonal_receive(const Eigen::VectorXd &message, double gain, double noise_var, GaussianStream &rng,
                                  int iteration)
{
    if (!(noise_var >= 0.0))
        throw std::invalid_argument("orthogonal_receive: noise variance must be >= 0");
    ReceivedSignal out;
    out.mode = SignalingMode::kOrthogonal;
    out.iteration = iteration;
    out.value = gain * message;
    const double sd = std::sqrt(noise_var);
    for (Eigen::Index i = 0; i < out.value.size(); ++i)
        out.value(i) += rng(sd);
    if (!out.value.allFinite())
        throw NumericError("orthogonal_receive: non-finite received signal");
    return out;
}

NoiseScales noisy_iteration_noise_scale(const ControlChannel &channel, const SignalingSolution &solution,
                                        SignalingMode mode, int k)
{
    if (k < 1)
        throw std::invalid_argument("noise scale: iteration index must be >= 1");
    channel.validate();
    const std::size_t n = channel.neighbors.size();
    NoiseScales s;
    if (mode == SignalingMode::kAirComp) {
        if (k == 1) {
            if (!(solution.c_v > 0.0))
                throw ContractError("noise scale: invalid solution, C_v must be > 0");
            if (solution.beta.size() != n)
                throw DimensionError("noise scale: solution does not match the channel");
            s.channel_divisor = solution.c_v;
            s.artificial_scale.resize(n);
            for (std::size_t u = 0; u < n; ++u)
                s.artificial_scale[u] = channel.gain[u] * std::sqrt(solution.beta[u] * channel.power[u]) / solution.c_v;
        } else {
            double amp = solution.aligned_amplitude;
            if (!(amp > 0.0)) {
                double m = INFINITY;
                for (std::size_t u = 0; u < n; ++u)
                    m = std::min(m, channel.gain[u] * channel.gain[u] * channel.power[u]);
                amp = std::sqrt(m);
            }
            s.channel_divisor = amp;
        }
        return s;
    }

    s.link_channel_divisor.resize(n);
    if (k == 1) {
        if (solution.alpha.size() != n || solution.beta.size() != n)
            throw DimensionError("noise scale: solution does not match the channel");
        s.artificial_scale.resize(n);
        for (std::size_t u = 0; u < n; ++u) {
            if (!(solution.alpha[u] > 0.0))
                throw ContractError("noise scale: invalid solution, alpha must be > 0");
            s.artificial_scale[u] = std::sqrt(solution.beta[u] / solution.alpha[u]);
            s.link_channel_divisor[u] = channel.gain[u] * std::sqrt(solution.alpha[u] * channel.power[u]);
        }
    } else {
        for (std::size_t u = 0; u < n; ++u)
            s.link_channel_divisor[u] = channel.gain[u] * std::sqrt(channel.power[u]);
    }
    return s;
}

Eigen::RowVectorXd estimate_noise(const ControlChannel &channel, const SignalingSolution *solution, SignalingMode mode,
                                  NoiseModel model, int k, Eigen::Index dim, GaussianStream &rng)
{
    Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(dim);
    const std::size_t n = channel.neighbors.size();
    if (model == NoiseModel::kNone || n == 0)
        return out;
    const double sd = std::sqrt(channel.noise_var);

    if (model == NoiseModel::kPrivacyGuaranteed) {
        if (!solution)
            throw ContractError("estimate_noise: privacy-guaranteed noise needs a signaling solution");
        const NoiseScales s = noisy_iteration_noise_scale(channel, *solution, mode, k);
        if (mode == SignalingMode::kAirComp) {
            for (std::size_t u = 0; u < s.artificial_scale.size(); ++u)
                for (Eigen::Index i = 0; i < dim; ++i)
                    out(i) += s.artificial_scale[u] * rng.standard();
            for (Eigen::Index i = 0; i < dim; ++i)
                out(i) += rng(sd) / s.channel_divisor;
        } else {
            for (std::size_t u = 0; u < n; ++u) {
                if (k == 1)
                    for (Eigen::Index i = 0; i < dim; ++i)
                        out(i) += s.artificial_scale[u] * rng.standard();
                for (Eigen::Index i = 0; i < dim; ++i)
                    out(i) += rng(sd) / s.link_channel_divisor[u];
            }
        }
        return out;
    }

    // Channel noise only; the divisor is the iteration-2 amplitude in every iteration.
    if (mode == SignalingMode::kAirComp) {
        double m = INFINITY;
        for (std::size_t u = 0; u < n; ++u)
            m = std::min(m, channel.gain[u] * channel.gain[u] * channel.power[u]);
        const double div = std::sqrt(m);
        for (Eigen::Index i = 0; i < dim; ++i)
            out(i) += rng(sd) / div;
    } else {
        for (std::size_t u = 0; u < n; ++u) {
            const double div = channel.gain[u] * std::sqrt(channel.power[u]);
            for (Eigen::Index i = 0; i < dim; ++i)
                out(i) += rng(sd) / div;
        }
    }
    return out;
}

} // namespace airgnn
