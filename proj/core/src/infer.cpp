// SPDX-License-Identifier: Apache-2.0
#include "airgnn/infer.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "airgnn/baselines.hpp"
#include "airgnn/error.hpp"
#include "airgnn/rng.hpp"

namespace airgnn {

InferenceReport decentralized_infer(const GnnModel &model, const Layout &layout, const InferenceOptions &options,
                                    std::uint64_t rng_seed)
{
    options.target.validate();
    const NetworkGraph graph = layout_to_graph(layout);
    const int n = layout.n_pairs();
    const int K = model.layer_count();
    const double p_ctrl = dbm_to_mw(options.control_power_dbm);
    const bool aircomp = options.mode == SignalingMode::kAirComp;

    InferenceReport rep;
    std::vector<ControlChannel> channels;
    channels.reserve(n);
    rep.solutions.resize(n);
    rep.analytic_snr.assign(n, 0.0);
    rep.measured_snr.assign(n, 0.0);
    rep.first_mse.assign(n, 0.0);
    rep.regime.assign(n, Regime::kSnrLimited);
    rep.privacy_limited.assign(n, false);
    rep.has_neighbors.assign(n, false);
    int with_neighbors = 0, limited = 0;
    for (int v = 0; v < n; ++v) {
        channels.push_back(control_channel(layout, v, p_ctrl));
        if (channels.back().size() == 0)
            continue;
        rep.has_neighbors[v] = true;
        ++with_neighbors;
        auto &sol = rep.solutions[v];
        sol = solve_signaling(channels.back().instance(), options.target, options.mode, options.optimal_signaling);
        rep.analytic_snr[v] = sol.rho;
        rep.regime[v] = sol.regime;
        rep.privacy_limited[v] = sol.privacy_limited();
        limited += sol.privacy_limited() ? 1 : 0;
    }
    rep.frac_privacy_limited = with_neighbors ? static_cast<double>(limited) / with_neighbors : 0.0;

    Eigen::MatrixXd h = graph.node_features;
    for (int k = 1; k <= K; ++k) {
        Eigen::MatrixXd msg = model.messages(k, graph, h, Mode::kEval);
        if (k == 1)
            msg = normalize_rows(msg);
        const Eigen::Index d = msg.cols();
        Eigen::MatrixXd agg = Eigen::MatrixXd::Zero(n, d);
        if (k == 1 && options.record_first_estimates) {
            rep.first_clean = aggregate(graph, msg);
        }

        for (int v = 0; v < n; ++v) {
            const ControlChannel &ch = channels[v];
            if (ch.size() == 0)
                continue;
            const SignalingSolution &sol = rep.solutions[v];
            GaussianStream rng(substream_seed(rng_seed, static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(k)));
            const int first = graph.in_offsets[v];
            Eigen::VectorXd estimate = Eigen::VectorXd::Zero(d);

            if (aircomp) {
                std::vector<Eigen::VectorXd> tx(ch.size());
                for (int i = 0; i < ch.size(); ++i) {
                    const Eigen::VectorXd m = msg.row(graph.in_edges[first + i]).transpose();
                    const double p = ch.power[i];
                    if (k == 1) {
                        const Eigen::VectorXd art = rng.row(d, 1.0).transpose();
                        tx[i] = std::sqrt(sol.alpha[i] * p) * m + std::sqrt(sol.beta[i] * p) * art;
                    } else {
                        tx[i] = std::sqrt(sol.gamma[i] * p) * m;
                    }
                }
                const ReceivedSignal r = aircomp_receive(tx, ch, d, rng, k);
                estimate = r.value / (k == 1 ? sol.c_v : sol.aligned_amplitude);
            } else {
                for (int i = 0; i < ch.size(); ++i) {
                    const Eigen::VectorXd m = msg.row(graph.in_edges[first + i]).transpose();
                    const double p = ch.power[i];
                    Eigen::VectorXd tx;
                    double amplitude;
                    if (k == 1) {
                        const Eigen::VectorXd art = rng.row(d, 1.0).transpose();
                        tx = std::sqrt(sol.alpha[i] * p) * m + std::sqrt(sol.beta[i] * p) * art;
                        amplitude = ch.gain[i] * std::sqrt(sol.alpha[i] * p);
                    } else {
                        tx = std::sqrt(sol.gamma[i] * p) * m;
                        amplitude = ch.gain[i] * std::sqrt(sol.gamma[i] * p);
                    }
                    const ReceivedSignal r = orthogonal_receive(tx, ch.gain[i], ch.noise_var, rng, k);
                    estimate += r.value / amplitude;
                }
            }
            agg.row(v) = estimate.transpose();

            if (k == 1) {
                Eigen::VectorXd clean = Eigen::VectorXd::Zero(d);
                for (int i = 0; i < ch.size(); ++i)
                    clean += msg.row(graph.in_edges[first + i]).transpose();
                const double mse = (estimate - clean).squaredNorm() / static_cast<double>(d);
                rep.first_mse[v] = mse;
                rep.measured_snr[v] = mse > 0.0 ? 1.0 / mse : std::numeric_limits<double>::infinity();
            }
        }
        if (k == 1 && options.record_first_estimates)
            rep.first_estimates = agg;
        h = model.update(k, h, agg, Mode::kEval);
    }

    if (h.cols() != 1)
        throw DimensionError("decentralized_infer: the model must output one value per node");
    rep.powers = layout.p_max_mw() * h.col(0);
    rep.sum_rate = sum_rate(layout, rep.powers);
    rep.wmmse_sum_rate = std::isnan(options.wmmse_sum_rate)
                             ? wmmse(layout, options.wmmse_iterations).sum_rate_trace.back()
                             : options.wmmse_sum_rate;
    rep.normalized_sum_rate = rep.wmmse_sum_rate > 0.0 ? rep.sum_rate / rep.wmmse_sum_rate : 0.0;
    return rep;
}

double region_fraction(std::span<const InferenceReport> reports)
{
    if (reports.empty())
        throw std::invalid_argument("region_fraction: no reports");
    std::size_t total = 0, limited = 0;
    for (const auto &r : reports)
        for (std::size_t v = 0; v < r.has_neighbors.size(); ++v)
            if (r.has_neighbors[v]) {
                ++total;
                limited += r.privacy_limited[v] ? 1 : 0;
            }
    return total ? static_cast<double>(limited) / static_cast<double>(total) : 0.0;
}

SensitivityReport empirical_sensitivity(const GnnModel &model, const NetworkGraph &graph, int v,
                                        const ReceiverInstance &instance, const SignalingSolution &solution,
                                        int trials, std::uint64_t rng_seed)
{
    const std::vector<int> nbrs = graph.neighbors(v);
    const int n = static_cast<int>(nbrs.size());
    if (n == 0 || instance.size() != n || static_cast<int>(solution.alpha.size()) != n)
        throw DimensionError("empirical_sensitivity: instance and solution must cover every neighbor of v");

    std::vector<double> amplitude(n);
    SensitivityReport rep;
    rep.max_link_diff.assign(n, 0.0);
    rep.link_bound.resize(n);
    for (int i = 0; i < n; ++i) {
        amplitude[i] = std::sqrt(instance.rx_power[i] * solution.alpha[i]);
        rep.link_bound[i] = 2.0 * amplitude[i];
    }
    rep.aggregate_bound = 2.0 * solution.c_v;

    const int first = graph.in_offsets[v];
    const Eigen::Index hd = graph.node_dim(), ed = graph.edge_dim();
    Eigen::MatrixXd base(n, hd + ed);
    for (int i = 0; i < n; ++i) {
        const int e = graph.in_edges[first + i];
        base.row(i).head(hd) = graph.node_features.row(graph.edge_src[e]);
        base.row(i).tail(ed) = graph.edge_features.row(e);
    }
    const Mlp &f = model.layer(1).message;

    // Protected part as received: sum_u |g| sqrt(alpha P) * unit message.
    auto protected_part = [&](const Eigen::MatrixXd &input, Eigen::MatrixXd &links) {
        links = normalize_rows(f.forward(input, Mode::kEval));
        for (int i = 0; i < n; ++i)
            links.row(i) *= amplitude[i];
        return Eigen::RowVectorXd(links.colwise().sum());
    };

    std::mt19937_64 rng(rng_seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    std::uniform_real_distribution<double> log_noise(std::log(0.1), std::log(10.0));
    auto random_feature = [&]() {
        Eigen::RowVectorXd x(hd);
        for (Eigen::Index j = 0; j < hd; ++j)
            x(j) = j == 0 ? std::hypot(normal(rng), normal(rng)) : std::exp(log_noise(rng));
        return x;
    };

    Eigen::MatrixXd links_a, links_b;
    for (int t = 0; t < trials; ++t) {
        const int u = pick(rng);
        Eigen::MatrixXd a = base, b = base;
        a.row(u).head(hd) = random_feature();
        b.row(u).head(hd) = random_feature();
        const Eigen::RowVectorXd ra = protected_part(a, links_a);
        const Eigen::RowVectorXd rb = protected_part(b, links_b);
        if (solution.mode == SignalingMode::kAirComp)
            rep.max_aggregate_diff = std::max(rep.max_aggregate_diff, (ra - rb).norm());
        for (int i = 0; i < n; ++i)
            rep.max_link_diff[i] = std::max(rep.max_link_diff[i], (links_a.row(i) - links_b.row(i)).norm());
    }
    return rep;
}

} // namespace airgnn
