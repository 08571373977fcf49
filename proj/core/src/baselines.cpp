// SPDX-License-Identifier: Apache-2.0
#include "airgnn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "airgnn/error.hpp"

namespace airgnn {

namespace {

Eigen::MatrixXd gain_power(const Layout &layout)
{
    const int n = layout.n_pairs();
    Eigen::MatrixXd g(n, n); // g(j, i) = |g_ji|^2, transmitter j to receiver i
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            g(j, i) = layout.gain(j, i).power();
    return g;
}

void check_size(const Layout &layout, const Eigen::VectorXd &powers)
{
    if (powers.size() != layout.n_pairs())
        throw DimensionError("expected " + std::to_string(layout.n_pairs()) + " powers, got " +
                             std::to_string(powers.size()));
}

void check_box(const Layout &layout, const Eigen::VectorXd &powers)
{
    check_size(layout, powers);
    const double pmax = layout.p_max_mw();
    for (Eigen::Index i = 0; i < powers.size(); ++i)
        if (!(powers(i) >= 0.0) || powers(i) > pmax * (1.0 + 1e-9))
            throw std::invalid_argument("power " + std::to_string(i) + " = " + std::to_string(powers(i)) +
                                        " outside [0, " + std::to_string(pmax) + "]");
}

Eigen::VectorXd sinr_unchecked(const Layout &layout, const Eigen::VectorXd &powers)
{
    const Eigen::MatrixXd g = gain_power(layout);
    const int n = layout.n_pairs();
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        const double signal = g(i, i) * powers(i);
        double interference = layout.noise_var(i);
        for (int j = 0; j < n; ++j)
            if (j != i)
                interference += g(j, i) * powers(j);
        out(i) = signal / interference;
    }
    return out;
}

} // namespace

Eigen::VectorXd sinr(const Layout &layout, const Eigen::VectorXd &powers)
{
    check_box(layout, powers);
    return sinr_unchecked(layout, powers);
}

double sum_rate(const Layout &layout, const Eigen::VectorXd &powers)
{
    return sinr(layout, powers).array().log1p().sum();
}

double sum_rate_unchecked(const Layout &layout, const Eigen::VectorXd &powers)
{
    check_size(layout, powers);
    return sinr_unchecked(layout, powers).array().log1p().sum();
}

Eigen::VectorXd sum_rate_gradient(const Layout &layout, const Eigen::VectorXd &powers)
{
    check_size(layout, powers);
    const Eigen::MatrixXd g = gain_power(layout);
    const int n = layout.n_pairs();
    // total_i = sum_j |g_ji|^2 p_j + sigma_i^2, interference_i = total_i - |g_ii|^2 p_i
    Eigen::VectorXd total(n), interference(n);
    for (int i = 0; i < n; ++i) {
        total(i) = layout.noise_var(i);
        for (int j = 0; j < n; ++j)
            total(i) += g(j, i) * powers(j);
        interference(i) = total(i) - g(i, i) * powers(i);
    }
    // rate_i = ln(total_i) - ln(interference_i)
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            grad(k) += g(k, i) / total(i);
            if (i != k)
                grad(k) -= g(k, i) / interference(i);
        }
    return grad;
}

WmmseResult wmmse(const Layout &layout, int iterations)
{
    if (iterations < 1)
        throw std::invalid_argument("wmmse: iterations must be >= 1");
    const int n = layout.n_pairs();
    const double pmax = layout.p_max_mw();
    const double vmax = std::sqrt(pmax);
    Eigen::MatrixXd h(n, n); // h(j, i) = |g_ji|
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            h(j, i) = layout.gain(j, i).magnitude();

    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, vmax);
    Eigen::VectorXd u(n), w(n);
    auto update_uw = [&]() {
        for (int i = 0; i < n; ++i) {
            double denom = layout.noise_var(i);
            for (int j = 0; j < n; ++j)
                denom += h(j, i) * h(j, i) * v(j) * v(j);
            u(i) = h(i, i) * v(i) / denom;
            // 1 / (1 - u h v) written as denom / (denom - (h v)^2) for accuracy.
            const double hv = h(i, i) * v(i);
            w(i) = denom / (denom - hv * hv);
        }
    };

    WmmseResult res;
    res.sum_rate_trace.reserve(iterations);
    Eigen::VectorXd p(n);
    update_uw();
    for (int it = 0; it < iterations; ++it) {
        for (int i = 0; i < n; ++i) {
            double denom = 0.0;
            for (int j = 0; j < n; ++j)
                denom += w(j) * u(j) * u(j) * h(i, j) * h(i, j);
            const double num = w(i) * u(i) * h(i, i);
            v(i) = denom > 0.0 ? std::clamp(num / denom, 0.0, vmax) : 0.0;
        }
        for (int i = 0; i < n; ++i)
            p(i) = v(i) >= vmax ? pmax : v(i) * v(i);
        res.sum_rate_trace.push_back(sum_rate(layout, p));
        update_uw();
    }
    res.powers = p;
    return res;
}

double normalized_sum_rate(std::span<const Layout> layouts,
                           const std::function<Eigen::VectorXd(const Layout &, std::size_t)> &powers_fn,
                           int wmmse_iters, std::size_t *skipped)
{
    if (layouts.empty())
        throw std::invalid_argument("normalized_sum_rate: empty layout set");
    double total = 0.0;
    std::size_t used = 0, skip = 0;
    for (std::size_t k = 0; k < layouts.size(); ++k) {
        const double ref = wmmse(layouts[k], wmmse_iters).sum_rate_trace.back();
        if (!(ref > 0.0)) {
            ++skip;
            continue;
        }
        total += sum_rate(layouts[k], powers_fn(layouts[k], k)) / ref;
        ++used;
    }
    if (skipped)
        *skipped = skip;
    return used ? total / static_cast<double>(used) : 0.0;
}

} // namespace airgnn
