// SPDX-License-Identifier: Apache-2.0
#include "airgnn/signaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "airgnn/error.hpp"

namespace airgnn {

void PrivacyTarget::validate() const
{
    if (!(eps_star > 0.0))
        throw std::invalid_argument("privacy target: eps* must be > 0");
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("privacy target: delta must lie in (0, 1]");
}

double privacy_constant(double delta)
{
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("delta must lie in (0, 1]");
    return 8.0 * std::log(1.25 / delta);
}

double ReceiverInstance::min_power() const
{
    if (rx_power.empty())
        throw std::invalid_argument("receiver instance has no neighbors");
    return *std::min_element(rx_power.begin(), rx_power.end());
}

double ReceiverInstance::total_power() const { return std::accumulate(rx_power.begin(), rx_power.end(), 0.0); }

void ReceiverInstance::validate() const
{
    if (rx_power.empty())
        throw std::invalid_argument("receiver instance has no neighbors");
    for (double r : rx_power)
        if (!(r > 0.0) || !std::isfinite(r))
            throw std::invalid_argument("receiver instance: received powers must be finite and > 0");
    if (!(noise_var > 0.0) || !std::isfinite(noise_var))
        throw std::invalid_argument("receiver instance: noise variance must be finite and > 0");
}

std::string to_string(SignalingMode m) { return m == SignalingMode::kAirComp ? "aircomp" : "orthogonal"; }

std::string to_string(Regime r)
{
    switch (r) {
    case Regime::kPrivacyLimited: return "privacy-limited";
    case Regime::kWaterFilling: return "water-filling";
    case Regime::kSnrLimited: return "snr-limited";
    }
    return "unknown";
}

SignalingMode signaling_mode_from_string(const std::string &s)
{
    if (s == "aircomp")
        return SignalingMode::kAirComp;
    if (s == "orthogonal")
        return SignalingMode::kOrthogonal;
    throw std::invalid_argument("unknown mode '" + s + "' (expected aircomp or orthogonal)");
}

double gaussian_mechanism_epsilon(double sensitivity, double sigma, double delta)
{
    if (!(sigma > 0.0))
        throw std::invalid_argument("gaussian mechanism: sigma must be > 0");
    if (sensitivity < 0.0)
        throw std::invalid_argument("gaussian mechanism: sensitivity must be >= 0");
    return sensitivity * std::sqrt(privacy_constant(delta) / 4.0) / sigma;
}

std::vector<double> solve_gamma(const ReceiverInstance &inst)
{
    const double m = inst.min_power();
    std::vector<double> gamma(inst.rx_power.size());
    for (std::size_t u = 0; u < gamma.size(); ++u)
        gamma[u] = inst.rx_power[u] == m ? 1.0 : m / inst.rx_power[u];
    return gamma;
}

Thresholds eps_thresholds(const ReceiverInstance &inst, double delta)
{
    inst.validate();
    const double L = privacy_constant(delta);
    const double m = inst.min_power();
    const double denom = inst.total_power() + inst.noise_var - inst.size() * m;
    if (!(denom > 0.0))
        throw NumericError("eps_thresholds: non-positive denominator " + std::to_string(denom));
    return {std::sqrt(L * m / inst.noise_var), std::sqrt(L * m / denom)};
}

std::vector<double> water_filling(const ReceiverInstance &inst, double eps_star, double delta,
                                  std::vector<double> *rounds)
{
    inst.validate();
    const double L = privacy_constant(delta);
    const double m = inst.min_power();
    const auto th = eps_thresholds(inst, delta);
    const double rel = 1e-12;
    if (eps_star > th.eps0 * (1.0 + rel) || eps_star < th.eps1 * (1.0 - rel))
        throw ContractError("water_filling: eps* = " + std::to_string(eps_star) + " outside [" +
                            std::to_string(th.eps1) + ", " + std::to_string(th.eps0) + "]");

    double D = L * m / (eps_star * eps_star) - inst.noise_var;
    if (D < 0.0) {
        if (D < -1e-9 * std::max(1.0, inst.noise_var))
            throw ContractError("water_filling: negative noise budget " + std::to_string(D));
        D = 0.0;
    }
    const std::size_t n = inst.rx_power.size();
    std::vector<double> beta(n, 0.0), cap(n);
    for (std::size_t u = 0; u < n; ++u)
        cap[u] = inst.rx_power[u] - m; // r_u * beta_u^U
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), std::size_t{0});
    if (rounds)
        rounds->clear();

    while (!active.empty() && D > 0.0) {
        const double share = D / static_cast<double>(active.size());
        if (rounds)
            rounds->push_back(share);
        std::vector<std::size_t> rest;
        double filled = 0.0;
        for (std::size_t u : active) {
            if (cap[u] <= share) {
                beta[u] = 1.0 - (inst.rx_power[u] == m ? 1.0 : m / inst.rx_power[u]);
                filled += cap[u];
            } else {
                rest.push_back(u);
            }
        }
        if (rest.size() == active.size()) {
            for (std::size_t u : active)
                beta[u] = share / inst.rx_power[u];
            D = 0.0;
            break;
        }
        D -= filled;
        active.swap(rest);
    }
    if (D > 1e-9)
        throw ContractError("water_filling: noise budget " + std::to_string(D) + " left after all caps were filled");
    return beta;
}

double received_snr_aircomp(double c_v, const ReceiverInstance &inst, const std::vector<double> &beta)
{
    if (beta.size() != inst.rx_power.size())
        throw DimensionError("received_snr_aircomp: beta has the wrong length");
    double noise = inst.noise_var;
    for (std::size_t u = 0; u < beta.size(); ++u)
        noise += inst.rx_power[u] * beta[u];
    return c_v * c_v / noise;
}

double achieved_epsilon_aircomp(double c_v, const ReceiverInstance &inst, const std::vector<double> &beta,
                                double delta)
{
    if (beta.size() != inst.rx_power.size())
        throw DimensionError("achieved_epsilon_aircomp: beta has the wrong length");
    double noise = inst.noise_var;
    for (std::size_t u = 0; u < beta.size(); ++u)
        noise += inst.rx_power[u] * beta[u];
    return gaussian_mechanism_epsilon(2.0 * c_v, std::sqrt(noise), delta);
}

double achieved_epsilon_link(double rx_power, double alpha, double beta, double noise_var, double delta)
{
    return gaussian_mechanism_epsilon(2.0 * std::sqrt(rx_power * alpha), std::sqrt(rx_power * beta + noise_var),
                                      delta);
}

SignalingSolution solve_aircomp_first_iteration(const ReceiverInstance &inst, const PrivacyTarget &target)
{
    inst.validate();
    target.validate();
    const double L = privacy_constant(target.delta);
    const double eps = target.eps_star;
    const double m = inst.min_power();
    const std::size_t n = inst.rx_power.size();

    SignalingSolution s;
    s.mode = SignalingMode::kAirComp;
    s.thresholds = eps_thresholds(inst, target.delta);
    s.gamma = solve_gamma(inst);
    s.aligned_amplitude = std::sqrt(m);
    s.alpha.resize(n);
    s.beta.assign(n, 0.0);

    if (eps <= s.thresholds.eps1) {
        s.regime = Regime::kPrivacyLimited;
        s.c_v = eps * std::sqrt((inst.noise_var + inst.total_power()) / (L + static_cast<double>(n) * eps * eps));
        for (std::size_t u = 0; u < n; ++u) {
            s.alpha[u] = s.c_v * s.c_v / inst.rx_power[u];
            s.beta[u] = 1.0 - s.alpha[u];
        }
    } else {
        s.c_v = std::sqrt(m);
        for (std::size_t u = 0; u < n; ++u)
            s.alpha[u] = inst.rx_power[u] == m ? 1.0 : m / inst.rx_power[u];
        if (eps <= s.thresholds.eps0) {
            s.regime = Regime::kWaterFilling;
            s.beta = water_filling(inst, eps, target.delta);
        } else {
            s.regime = Regime::kSnrLimited;
        }
    }
    s.epsilon = achieved_epsilon_aircomp(s.c_v, inst, s.beta, target.delta);
    s.rho = received_snr_aircomp(s.c_v, inst, s.beta);
    return s;
}

SignalingSolution solve_orthogonal_first_iteration(const ReceiverInstance &inst, const PrivacyTarget &target)
{
    inst.validate();
    target.validate();
    const double L = privacy_constant(target.delta);
    const double eps = target.eps_star;
    const double s2 = inst.noise_var;
    const std::size_t n = inst.rx_power.size();

    SignalingSolution s;
    s.mode = SignalingMode::kOrthogonal;
    s.thresholds = eps_thresholds(inst, target.delta);
    s.gamma.assign(n, 1.0);
    s.alpha.resize(n);
    s.beta.resize(n);
    s.link_regime.resize(n);
    s.link_epsilon.resize(n);
    s.link_rho.resize(n);
    s.link_eps0.resize(n);

    double inv_sum = 0.0;
    bool any_privacy_limited = false;
    for (std::size_t u = 0; u < n; ++u) {
        const double r = inst.rx_power[u];
        s.link_eps0[u] = std::sqrt(L * r / s2);
        if (eps <= s.link_eps0[u]) {
            s.alpha[u] = std::min(1.0, eps * eps * (s2 + r) / (r * (L + eps * eps)));
            s.link_regime[u] = Regime::kPrivacyLimited;
            any_privacy_limited = true;
        } else {
            s.alpha[u] = 1.0;
            s.link_regime[u] = Regime::kSnrLimited;
        }
        s.beta[u] = 1.0 - s.alpha[u];
        s.link_epsilon[u] = achieved_epsilon_link(r, s.alpha[u], s.beta[u], s2, target.delta);
        s.link_rho[u] = s.alpha[u] * r / (s.beta[u] * r + s2);
        inv_sum += 1.0 / s.link_rho[u];
    }
    s.regime = any_privacy_limited ? Regime::kPrivacyLimited : Regime::kSnrLimited;
    s.epsilon = *std::max_element(s.link_epsilon.begin(), s.link_epsilon.end());
    s.rho = 1.0 / inv_sum;
    if (n == 1) {
        // One link: both receivers see the same channel, so take the
        // over-the-air design and keep the two results bit-identical.
        const SignalingSolution a = solve_aircomp_first_iteration(inst, target);
        s.alpha = a.alpha;
        s.beta = a.beta;
        s.link_epsilon = {a.epsilon};
        s.link_rho = {a.rho};
        s.epsilon = a.epsilon;
        s.rho = a.rho;
    }
    return s;
}

SignalingSolution solve_non_optimal_signaling(const ReceiverInstance &inst, const PrivacyTarget &target)
{
    SignalingSolution s = solve_aircomp_first_iteration(inst, target);
    const double m = inst.min_power();
    for (std::size_t u = 0; u < s.gamma.size(); ++u) {
        s.gamma[u] = m / (2.0 * inst.rx_power[u]);
        s.beta[u] = 1.0 - s.alpha[u];
    }
    s.aligned_amplitude = std::sqrt(m / 2.0);
    s.epsilon = achieved_epsilon_aircomp(s.c_v, inst, s.beta, target.delta);
    s.rho = received_snr_aircomp(s.c_v, inst, s.beta);
    return s;
}

SignalingSolution solve_signaling(const ReceiverInstance &inst, const PrivacyTarget &target, SignalingMode mode,
                                  bool optimal)
{
    if (mode == SignalingMode::kOrthogonal)
        return solve_orthogonal_first_iteration(inst, target);
    return optimal ? solve_aircomp_first_iteration(inst, target) : solve_non_optimal_signaling(inst, target);
}

double tradeoff_rho_max(const ReceiverInstance &inst, double delta, double eps, SignalingMode mode)
{
    inst.validate();
    const double L = privacy_constant(delta);
    if (mode == SignalingMode::kAirComp) {
        const double eps0 = std::sqrt(L * inst.min_power() / inst.noise_var);
        return eps <= eps0 ? eps * eps / L : inst.min_power() / inst.noise_var;
    }
    if (inst.rx_power.size() == 1)
        return tradeoff_rho_max(inst, delta, eps, SignalingMode::kAirComp);
    double inv_sum = 0.0;
    for (double r : inst.rx_power) {
        const double eps0 = std::sqrt(L * r / inst.noise_var);
        inv_sum += 1.0 / (eps <= eps0 ? eps * eps / L : r / inst.noise_var);
    }
    return 1.0 / inv_sum;
}

std::vector<TradeoffPoint> tradeoff_curve(const ReceiverInstance &inst, double delta, const std::vector<double> &eps_grid,
                                          SignalingMode mode)
{
    inst.validate();
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0))
            throw std::invalid_argument("tradeoff_curve: eps grid must be positive");
        if (i > 0 && !(eps_grid[i] > eps_grid[i - 1]))
            throw std::invalid_argument("tradeoff_curve: eps grid must be strictly increasing");
    }
    const double L = privacy_constant(delta);
    double edge = 0.0; // largest eps at which some bound still depends on eps
    if (mode == SignalingMode::kAirComp) {
        edge = std::sqrt(L * inst.min_power() / inst.noise_var);
    } else {
        for (double r : inst.rx_power)
            edge = std::max(edge, std::sqrt(L * r / inst.noise_var));
    }
    std::vector<TradeoffPoint> out;
    out.reserve(eps_grid.size());
    for (double e : eps_grid)
        out.push_back({e, tradeoff_rho_max(inst, delta, e, mode),
                       e <= edge ? Regime::kPrivacyLimited : Regime::kSnrLimited});
    return out;
}

} // namespace airgnn
