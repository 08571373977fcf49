// SPDX-License-Identifier: Apache-2.0
//
// Sum-rate objective of the interference channel and the WMMSE reference.
// Rates are in nats.

#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "airgnn/netgraph.hpp"

namespace airgnn {

/// SINR_i = |g_ii|^2 p_i / (sum_{j != i} |g_ji|^2 p_j + sigma_i^2).
/// Throws std::invalid_argument if a power lies outside [0, P^max] (1e-9 relative slack).
Eigen::VectorXd sinr(const Layout &layout, const Eigen::VectorXd &powers);

double sum_rate(const Layout &layout, const Eigen::VectorXd &powers);

/// d(sum_rate)/d(p) without the box check, for use inside training.
Eigen::VectorXd sum_rate_gradient(const Layout &layout, const Eigen::VectorXd &powers);

/// Sum rate without the box check (training may evaluate any nonnegative powers).
double sum_rate_unchecked(const Layout &layout, const Eigen::VectorXd &powers);

struct WmmseResult {
    Eigen::VectorXd powers;
    std::vector<double> sum_rate_trace; // after each iteration
};

/// Scalar-channel WMMSE started from full power.
WmmseResult wmmse(const Layout &layout, int iterations = 100);

/// Mean over layouts of sum_rate(powers) / sum_rate(WMMSE); layouts whose
/// WMMSE rate is zero are skipped and counted in `skipped` when given.
double normalized_sum_rate(std::span<const Layout> layouts,
                           const std::function<Eigen::VectorXd(const Layout &, std::size_t)> &powers_fn,
                           int wmmse_iters = 100, std::size_t *skipped = nullptr);

} // namespace airgnn
