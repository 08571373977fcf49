// SPDX-License-Identifier: Apache-2.0
//
// Privacy-preserving signal design for the first message-passing iteration.
//
// Receiver v hears neighbors u with received-power terms r_u = |g_uv|^2 P_u
// and channel noise variance sigma^2. Neighbor u transmits
//
//   e^{-j phi_uv} ( sqrt(alpha_u P_u) * normalized_message + sqrt(beta_u P_u) * m_u )
//
// with m_u ~ N(0, I). Under over-the-air aggregation every neighbor's signal
// amplitude is aligned to C_v, i.e. r_u alpha_u = C_v^2. With
// L = 8 ln(1.25/delta) the (eps, delta)-LDP level and the received SNR are
//
//   eps = 2 C_v sqrt(2 ln(1.25/delta)) / sqrt(sum_u r_u beta_u + sigma^2)
//   rho = C_v^2 / (sum_u r_u beta_u + sigma^2)
//
// The solvers below maximize rho subject to eps <= eps*, alpha + beta <= 1.

#pragma once

#include <string>
#include <vector>

namespace airgnn {

struct PrivacyTarget {
    double eps_star = 1.0;
    double delta = 1e-4;

    /// Throws std::invalid_argument unless eps_star > 0 and 0 < delta <= 1.
    void validate() const;
};

/// 8 ln(1.25 / delta).
double privacy_constant(double delta);

struct ReceiverInstance {
    std::vector<double> rx_power; // r_u = |g_uv|^2 P_u per neighbor
    double noise_var = 1.0;

    double min_power() const;
    double total_power() const;
    int size() const noexcept { return static_cast<int>(rx_power.size()); }

    /// Throws std::invalid_argument unless nonempty, all r_u > 0 and noise_var > 0.
    void validate() const;
};

enum class SignalingMode { kAirComp, kOrthogonal };
enum class Regime { kPrivacyLimited, kWaterFilling, kSnrLimited };

std::string to_string(SignalingMode m);
std::string to_string(Regime r);
SignalingMode signaling_mode_from_string(const std::string &s);

struct Thresholds {
    double eps0 = 0.0; // above this the SNR bound no longer depends on eps
    double eps1 = 0.0; // below this every neighbor uses alpha + beta = 1
};

struct SignalingSolution {
    SignalingMode mode = SignalingMode::kAirComp;
    double c_v = 0.0;               // aligned first-iteration amplitude (AirComp)
    double aligned_amplitude = 0.0; // sqrt(gamma_u r_u), common to all u (AirComp)
    std::vector<double> gamma;
    std::vector<double> alpha;
    std::vector<double> beta;
    Regime regime = Regime::kPrivacyLimited;
    double epsilon = 0.0; // achieved; orthogonal: largest per-link value
    double rho = 0.0;     // achieved first-iteration SNR
    Thresholds thresholds;

    // Orthogonal mode only.
    std::vector<Regime> link_regime;
    std::vector<double> link_epsilon;
    std::vector<double> link_rho;
    std::vector<double> link_eps0;

    bool privacy_limited() const noexcept { return regime != Regime::kSnrLimited; }
};

/// Delta * sqrt(2 ln(1.25/delta)) / sigma.
double gaussian_mechanism_epsilon(double sensitivity, double sigma, double delta);

/// gamma_u = min_w r_w / r_u.
std::vector<double> solve_gamma(const ReceiverInstance &inst);

Thresholds eps_thresholds(const ReceiverInstance &inst, double delta);

/// Noise-power split for the intermediate regime; `rounds` (optional)
/// receives the per-round share D / |I|.
std::vector<double> water_filling(const ReceiverInstance &inst, double eps_star, double delta,
                                  std::vector<double> *rounds = nullptr);

double achieved_epsilon_aircomp(double c_v, const ReceiverInstance &inst, const std::vector<double> &beta,
                                double delta);
double received_snr_aircomp(double c_v, const ReceiverInstance &inst, const std::vector<double> &beta);

SignalingSolution solve_aircomp_first_iteration(const ReceiverInstance &inst, const PrivacyTarget &target);
SignalingSolution solve_orthogonal_first_iteration(const ReceiverInstance &inst, const PrivacyTarget &target);

/// Halved gamma and beta = 1 - alpha in every regime.
SignalingSolution solve_non_optimal_signaling(const ReceiverInstance &inst, const PrivacyTarget &target);

SignalingSolution solve_signaling(const ReceiverInstance &inst, const PrivacyTarget &target, SignalingMode mode,
                                  bool optimal = true);

/// Per-link LDP level of orthogonal reception: 2|g| sqrt(alpha P) sqrt(2 ln(1.25/delta)) / sqrt(|g|^2 beta P + sigma^2).
double achieved_epsilon_link(double rx_power, double alpha, double beta, double noise_var, double delta);

struct TradeoffPoint {
    double eps = 0.0;
    double rho_max = 0.0;
    Regime region = Regime::kPrivacyLimited;
};

double tradeoff_rho_max(const ReceiverInstance &inst, double delta, double eps, SignalingMode mode);

/// `eps_grid` must be positive and strictly increasing.
std::vector<TradeoffPoint> tradeoff_curve(const ReceiverInstance &inst, double delta, const std::vector<double> &eps_grid,
                                          SignalingMode mode);

} // namespace airgnn
