// SPDX-License-Identifier: Apache-2.0
#include "airgnn/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "airgnn/baselines.hpp"
#include "airgnn/harness/csv.hpp"
#include "airgnn/rng.hpp"
#include "airgnn/signaling.hpp"
#include "airgnn/training.hpp"

namespace airgnn::harness {

namespace {

std::ostream &log_of(RunContext &ctx) { return ctx.log ? *ctx.log : std::cerr; }
std::ostream &out_of(RunContext &ctx) { return ctx.out ? *ctx.out : std::cout; }

TrainConfig train_config(const Config &c, TrainVariant variant, std::uint64_t seed)
{
    TrainConfig t;
    t.variant = variant;
    t.mode = signaling_mode_from_string(c.mode);
    t.epochs = c.epochs;
    t.batch_size = c.batch_size;
    t.learning_rate = c.learning_rate;
    t.rng_seed = seed;
    t.control_power_dbm = c.control_power_dbm;
    t.target = {c.eps_star, c.delta};
    return t;
}

InferenceOptions inference_options(const Config &c)
{
    InferenceOptions o;
    o.target = {c.eps_star, c.delta};
    o.mode = signaling_mode_from_string(c.mode);
    o.control_power_dbm = c.control_power_dbm;
    o.wmmse_iterations = c.wmmse_iterations;
    return o;
}

TrainRun train_logged(RunContext &ctx, const TrainConfig &tc, std::span<const TrainingSample> samples)
{
    auto &log = log_of(ctx);
    log << "training " << to_string(tc.variant) << " (seed " << tc.rng_seed << ", " << samples.size()
        << " layouts, " << tc.epochs << " epochs)\n";
    TrainRun run = train(tc, samples, [&](int epoch, double loss) {
        if ((epoch + 1) % 10 == 0 || epoch + 1 == tc.epochs)
            log << "  epoch " << epoch + 1 << "/" << tc.epochs << " loss " << loss << '\n';
    });
    log << "  done in " << run.wall_seconds << " s\n";
    return run;
}

std::vector<double> normalized_by_max(const std::vector<double> &v)
{
    const double m = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = m > 0.0 ? v[i] / m : 0.0;
    return out;
}

// Noise-free eval-mode forward; layer-1 messages are normalized when the
// model was trained that way.
double clean_normalized_sum_rate(const GnnModel &model, std::span<const Layout> layouts,
                                 std::span<const double> wmmse, TrainVariant variant)
{
    ForwardOptions opt;
    opt.normalize_first_layer = variant == TrainVariant::kPrivacyGuaranteed;
    double total = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < layouts.size(); ++k) {
        if (!(wmmse[k] > 0.0))
            continue;
        const Eigen::MatrixXd out = gnn_forward(model, make_batch(layout_to_graph(layouts[k])), opt);
        total += sum_rate(layouts[k], layouts[k].p_max_mw() * out.col(0)) / wmmse[k];
        ++used;
    }
    return used ? total / static_cast<double>(used) : 0.0;
}

constexpr std::uint64_t kEvalStream = 0x1f;

} // namespace

std::filesystem::path RunContext::output(const std::string &name)
{
    if (std::find(outputs.begin(), outputs.end(), name) == outputs.end())
        outputs.push_back(name);
    const auto p = out_dir / name;
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    return p;
}

std::vector<Layout> training_layouts(const Config &c)
{
    if (!c.train_layouts_file.empty())
        return load_layouts(c.train_layouts_file);
    return generate_layouts(static_cast<std::size_t>(c.train_layouts), c.n_pairs, c.p_max_dbm, c.noise_var,
                            c.data_seed);
}

std::vector<Layout> test_layouts(const Config &c)
{
    if (!c.test_layouts_file.empty())
        return load_layouts(c.test_layouts_file);
    return generate_layouts(static_cast<std::size_t>(c.test_layouts), c.n_pairs, c.p_max_dbm, c.noise_var,
                            c.test_seed);
}

std::vector<double> wmmse_rates(std::span<const Layout> layouts, int iterations)
{
    std::vector<double> out;
    out.reserve(layouts.size());
    for (const auto &l : layouts)
        out.push_back(wmmse(l, iterations).sum_rate_trace.back());
    return out;
}

GnnModel obtain_model(RunContext &ctx)
{
    const Config &c = ctx.config;
    if (!c.model.empty()) {
        log_of(ctx) << "using model " << c.model << '\n';
        return load_model(c.model);
    }
    const TrainConfig tc = train_config(c, train_variant_from_string(c.variant), c.seed);
    const auto layouts = training_layouts(c);
    const auto samples = prepare_samples(layouts, tc);
    TrainRun run = train_logged(ctx, tc, samples);
    save_model(run.model, ctx.output("model.json"));
    return std::move(run.model);
}

EvalSummary evaluate(const GnnModel &model, std::span<const Layout> layouts, std::span<const double> wmmse,
                     const InferenceOptions &options, std::uint64_t seed, std::vector<InferenceReport> *reports)
{
    if (layouts.size() != wmmse.size())
        throw std::invalid_argument("evaluate: one WMMSE reference per layout is required");
    EvalSummary s;
    std::size_t nodes = 0, used = 0;
    std::vector<InferenceReport> all;
    for (std::size_t k = 0; k < layouts.size(); ++k) {
        InferenceOptions o = options;
        o.wmmse_sum_rate = wmmse[k];
        InferenceReport r = decentralized_infer(model, layouts[k], o, derive_seed(seed, {kEvalStream, k}));
        for (std::size_t v = 0; v < r.has_neighbors.size(); ++v) {
            if (!r.has_neighbors[v])
                continue;
            s.mean_snr += r.measured_snr[v];
            s.mean_analytic_snr += r.analytic_snr[v];
            ++nodes;
        }
        if (wmmse[k] > 0.0) {
            s.mean_normalized_sum_rate += r.normalized_sum_rate;
            ++used;
        }
        all.push_back(std::move(r));
    }
    if (nodes) {
        s.mean_snr /= static_cast<double>(nodes);
        s.mean_analytic_snr /= static_cast<double>(nodes);
    }
    if (used)
        s.mean_normalized_sum_rate /= static_cast<double>(used);
    s.frac_privacy_limited = all.empty() ? 0.0 : region_fraction(all);
    if (reports)
        *reports = std::move(all);
    return s;
}

void run_gen_layouts(RunContext &ctx)
{
    const Config &c = ctx.config;
    const int n = c.count > 0 ? c.count : c.test_layouts;
    const auto layouts =
        generate_layouts(static_cast<std::size_t>(n), c.n_pairs, c.p_max_dbm, c.noise_var, c.data_seed);
    save_layouts(layouts, ctx.output("layouts.json"));
    CsvWriter csv(ctx.output("layouts_summary.csv"), {"layout", "n_pairs", "p_max_mw", "mean_direct_gain_power"});
    for (std::size_t k = 0; k < layouts.size(); ++k) {
        double direct = 0.0;
        for (int i = 0; i < layouts[k].n_pairs(); ++i)
            direct += layouts[k].gain(i, i).power();
        csv.cell(static_cast<long long>(k)).cell(layouts[k].n_pairs()).cell(layouts[k].p_max_mw());
        csv.cell(direct / layouts[k].n_pairs()).end_row();
    }
    csv.close();
    out_of(ctx) << "wrote " << layouts.size() << " layouts to " << (ctx.out_dir / "layouts.json").string() << '\n';
}

void run_train(RunContext &ctx)
{
    const Config &c = ctx.config;
    const TrainConfig tc = train_config(c, train_variant_from_string(c.variant), c.seed);
    const auto layouts = training_layouts(c);
    const auto samples = prepare_samples(layouts, tc);
    const TrainRun run = train_logged(ctx, tc, samples);
    save_model(run.model, ctx.output("model.json"));

    CsvWriter csv(ctx.output("train_history.csv"), {"epoch", "mean_loss"});
    for (std::size_t e = 0; e < run.loss_history.size(); ++e)
        csv.cell(static_cast<long long>(e + 1)).cell(run.loss_history[e]).end_row();
    csv.close();

    nlohmann::json meta = {{"variant", to_string(tc.variant)},
                           {"mode", to_string(tc.mode)},
                           {"seed", tc.rng_seed},
                           {"epochs", tc.epochs},
                           {"loss_history", run.loss_history}};
    std::ofstream(ctx.output("train_run.json")) << meta.dump(2) << '\n';
    if (!run.loss_history.empty())
        out_of(ctx) << "final loss " << run.loss_history.back() << '\n';
}

void run_infer(RunContext &ctx)
{
    const Config &c = ctx.config;
    const GnnModel model = obtain_model(ctx);
    const auto layouts = test_layouts(c);
    const auto ref = wmmse_rates(layouts, c.wmmse_iterations);
    std::vector<InferenceReport> reports;
    const EvalSummary s = evaluate(model, layouts, ref, inference_options(c), c.seed, &reports);

    CsvWriter nodes(ctx.output("infer_nodes.csv"), {"layout", "node", "power_mw", "analytic_snr", "measured_snr",
                                                     "regime", "privacy_limited"});
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const auto &r = reports[k];
        for (Eigen::Index v = 0; v < r.powers.size(); ++v) {
            nodes.cell(static_cast<long long>(k)).cell(static_cast<long long>(v)).cell(r.powers(v));
            nodes.cell(r.analytic_snr[v]).cell(r.measured_snr[v]);
            nodes.cell(r.has_neighbors[v] ? to_string(r.regime[v]) : std::string("isolated"));
            nodes.cell(r.privacy_limited[v] ? 1 : 0).end_row();
        }
    }
    nodes.close();

    CsvWriter sum(ctx.output("infer_summary.csv"),
                  {"mode", "eps_star", "control_power_dbm", "mean_normalized_sum_rate", "mean_snr", "mean_analytic_snr",
                   "frac_privacy_limited", "clean_normalized_sum_rate"});
    sum.cell(c.mode).cell(c.eps_star).cell(c.control_power_dbm).cell(s.mean_normalized_sum_rate);
    sum.cell(s.mean_snr).cell(s.mean_analytic_snr).cell(s.frac_privacy_limited);
    sum.cell(clean_normalized_sum_rate(model, layouts, ref, train_variant_from_string(c.variant))).end_row();
    sum.close();
    out_of(ctx) << "normalized sum rate " << s.mean_normalized_sum_rate << ", privacy-limited fraction "
                << s.frac_privacy_limited << '\n';
}

void run_signaling(RunContext &ctx)
{
    const Config &c = ctx.config;
    const ReceiverInstance inst{c.rx_power, c.instance_noise_var};
    const PrivacyTarget target{c.eps_star, c.delta};
    const SignalingMode mode = signaling_mode_from_string(c.mode);
    const SignalingSolution s = solve_signaling(inst, target, mode);

    CsvWriter csv(ctx.output("signaling.csv"), {"neighbor", "rx_power", "gamma", "alpha", "beta"});
    for (std::size_t u = 0; u < inst.rx_power.size(); ++u)
        csv.cell(static_cast<long long>(u)).cell(inst.rx_power[u]).cell(s.gamma[u]).cell(s.alpha[u]).cell(s.beta[u])
            .end_row();
    csv.close();
    CsvWriter sum(ctx.output("signaling_summary.csv"),
                  {"mode", "eps_star", "delta", "regime", "c_v", "rho", "epsilon", "eps0", "eps1"});
    sum.cell(to_string(mode)).cell(c.eps_star).cell(c.delta).cell(to_string(s.regime)).cell(s.c_v).cell(s.rho);
    sum.cell(s.epsilon).cell(s.thresholds.eps0).cell(s.thresholds.eps1).end_row();
    sum.close();

    auto &out = out_of(ctx);
    char buf[256];
    std::snprintf(buf, sizeof buf, "mode %s, regime %s\n", to_string(mode).c_str(), to_string(s.regime).c_str());
    out << buf;
    if (mode == SignalingMode::kAirComp) {
        std::snprintf(buf, sizeof buf, "C_v = %.5f\n", s.c_v);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "rho = %.6f\nepsilon = %.6f\neps0 = %.6g, eps1 = %.6g\n", s.rho, s.epsilon,
                  s.thresholds.eps0, s.thresholds.eps1);
    out << buf;
    for (std::size_t u = 0; u < inst.rx_power.size(); ++u) {
        std::snprintf(buf, sizeof buf, "  neighbor %zu: gamma %.6g alpha %.6g beta %.6g\n", u, s.gamma[u], s.alpha[u],
                      s.beta[u]);
        out << buf;
    }
}

void run_tradeoff(RunContext &ctx)
{
    const Config &c = ctx.config;
    const ReceiverInstance inst{c.rx_power, c.instance_noise_var};
    const auto air = tradeoff_curve(inst, c.delta, c.eps_grid, SignalingMode::kAirComp);
    const auto orth = tradeoff_curve(inst, c.delta, c.eps_grid, SignalingMode::kOrthogonal);
    CsvWriter csv(ctx.output("tradeoff.csv"),
                  {"eps", "rho_max_aircomp", "region_aircomp", "rho_max_orthogonal", "region_orthogonal"});
    for (std::size_t i = 0; i < air.size(); ++i) {
        csv.cell(air[i].eps).cell(air[i].rho_max).cell(to_string(air[i].region));
        csv.cell(orth[i].rho_max).cell(to_string(orth[i].region)).end_row();
    }
    csv.close();
    out_of(ctx) << "wrote " << air.size() << " trade-off points\n";
}

void run_wmmse(RunContext &ctx)
{
    const Config &c = ctx.config;
    const auto layouts = test_layouts(c);
    CsvWriter csv(ctx.output("wmmse.csv"), {"layout", "wmmse_sum_rate", "full_power_sum_rate", "iterations"});
    double mean = 0.0;
    for (std::size_t k = 0; k < layouts.size(); ++k) {
        const auto r = wmmse(layouts[k], c.wmmse_iterations);
        const double full = sum_rate(layouts[k], Eigen::VectorXd::Constant(layouts[k].n_pairs(), layouts[k].p_max_mw()));
        csv.cell(static_cast<long long>(k)).cell(r.sum_rate_trace.back()).cell(full).cell(c.wmmse_iterations).end_row();
        mean += r.sum_rate_trace.back();
    }
    csv.close();
    out_of(ctx) << "mean WMMSE sum rate " << mean / static_cast<double>(layouts.size()) << " nats\n";
}

namespace {

void experiment_tradeoff_eps(RunContext &ctx)
{
    const Config &c = ctx.config;
    const GnnModel model = obtain_model(ctx);
    const auto layouts = test_layouts(c);
    const auto ref = wmmse_rates(layouts, c.wmmse_iterations);
    std::vector<EvalSummary> rows;
    for (double eps : c.eps_grid) {
        InferenceOptions o = inference_options(c);
        o.target.eps_star = eps;
        rows.push_back(evaluate(model, layouts, ref, o, c.seed));
        log_of(ctx) << "  eps* " << eps << ": snr " << rows.back().mean_snr << ", normalized sum rate "
                    << rows.back().mean_normalized_sum_rate << '\n';
    }
    std::vector<double> snr, analytic;
    for (const auto &r : rows) {
        snr.push_back(r.mean_snr);
        analytic.push_back(r.mean_analytic_snr);
    }
    const auto nsnr = normalized_by_max(snr), nanalytic = normalized_by_max(analytic);
    CsvWriter csv(ctx.output("tradeoff_eps.csv"),
                  {"eps_star", "mean_normalized_snr", "mean_normalized_sum_rate", "frac_privacy_limited", "mean_snr",
                   "mean_analytic_snr", "mean_normalized_analytic_snr"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        csv.cell(c.eps_grid[i]).cell(nsnr[i]).cell(rows[i].mean_normalized_sum_rate).cell(rows[i].frac_privacy_limited);
        csv.cell(rows[i].mean_snr).cell(rows[i].mean_analytic_snr).cell(nanalytic[i]).end_row();
    }
    csv.close();
}

void experiment_tradeoff_power(RunContext &ctx)
{
    const Config &c = ctx.config;
    const GnnModel model = obtain_model(ctx);
    const auto layouts = test_layouts(c);
    const auto ref = wmmse_rates(layouts, c.wmmse_iterations);
    std::vector<EvalSummary> rows;
    for (double p : c.power_grid_dbm) {
        InferenceOptions o = inference_options(c);
        o.control_power_dbm = p;
        rows.push_back(evaluate(model, layouts, ref, o, c.seed));
        log_of(ctx) << "  P_v " << p << " dBm: snr " << rows.back().mean_snr << ", normalized sum rate "
                    << rows.back().mean_normalized_sum_rate << '\n';
    }
    std::vector<double> snr, analytic;
    for (const auto &r : rows) {
        snr.push_back(r.mean_snr);
        analytic.push_back(r.mean_analytic_snr);
    }
    const auto nsnr = normalized_by_max(snr), nanalytic = normalized_by_max(analytic);
    CsvWriter csv(ctx.output("tradeoff_power.csv"),
                  {"power_dbm", "mean_normalized_snr", "mean_normalized_sum_rate", "frac_privacy_limited", "mean_snr",
                   "mean_analytic_snr", "mean_normalized_analytic_snr"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        csv.cell(c.power_grid_dbm[i]).cell(nsnr[i]).cell(rows[i].mean_normalized_sum_rate);
        csv.cell(rows[i].frac_privacy_limited).cell(rows[i].mean_snr).cell(rows[i].mean_analytic_snr);
        csv.cell(nanalytic[i]).end_row();
    }
    csv.close();
}

void experiment_signaling_opt(RunContext &ctx)
{
    const Config &c = ctx.config;
    const GnnModel model = obtain_model(ctx);
    const auto layouts = test_layouts(c);
    const auto ref = wmmse_rates(layouts, c.wmmse_iterations);
    std::vector<EvalSummary> opt, non;
    for (double eps : c.eps_grid) {
        InferenceOptions o = inference_options(c);
        o.mode = SignalingMode::kAirComp;
        o.target.eps_star = eps;
        opt.push_back(evaluate(model, layouts, ref, o, c.seed));
        o.optimal_signaling = false;
        non.push_back(evaluate(model, layouts, ref, o, c.seed));
        log_of(ctx) << "  eps* " << eps << ": optimal " << opt.back().mean_normalized_sum_rate << ", non-optimal "
                    << non.back().mean_normalized_sum_rate << '\n';
    }
    double top = 0.0;
    for (std::size_t i = 0; i < opt.size(); ++i)
        top = std::max({top, opt[i].mean_snr, non[i].mean_snr});
    CsvWriter csv(ctx.output("signaling_opt.csv"),
                  {"eps_star", "optimal_normalized_snr", "non_optimal_normalized_snr", "optimal_normalized_sum_rate",
                   "non_optimal_normalized_sum_rate", "optimal_snr", "non_optimal_snr", "optimal_analytic_snr",
                   "non_optimal_analytic_snr", "frac_privacy_limited"});
    for (std::size_t i = 0; i < opt.size(); ++i) {
        csv.cell(c.eps_grid[i]).cell(top > 0 ? opt[i].mean_snr / top : 0.0).cell(top > 0 ? non[i].mean_snr / top : 0.0);
        csv.cell(opt[i].mean_normalized_sum_rate).cell(non[i].mean_normalized_sum_rate);
        csv.cell(opt[i].mean_snr).cell(non[i].mean_snr).cell(opt[i].mean_analytic_snr).cell(non[i].mean_analytic_snr);
        csv.cell(opt[i].frac_privacy_limited).end_row();
    }
    csv.close();
}

void experiment_aircomp_compare(RunContext &ctx)
{
    const Config &c = ctx.config;
    const GnnModel model = obtain_model(ctx);
    const auto layouts = test_layouts(c);
    const auto ref = wmmse_rates(layouts, c.wmmse_iterations);
    std::vector<EvalSummary> air, orth;
    for (double eps : c.eps_grid) {
        InferenceOptions o = inference_options(c);
        o.target.eps_star = eps;
        o.mode = SignalingMode::kAirComp;
        air.push_back(evaluate(model, layouts, ref, o, c.seed));
        o.mode = SignalingMode::kOrthogonal;
        orth.push_back(evaluate(model, layouts, ref, o, c.seed));
        log_of(ctx) << "  eps* " << eps << ": aircomp snr " << air.back().mean_snr << ", orthogonal snr "
                    << orth.back().mean_snr << '\n';
    }
    double top = 0.0;
    for (std::size_t i = 0; i < air.size(); ++i)
        top = std::max({top, air[i].mean_snr, orth[i].mean_snr});
    CsvWriter csv(ctx.output("aircomp_compare.csv"),
                  {"eps_star", "aircomp_normalized_snr", "orthogonal_normalized_snr", "aircomp_snr", "orthogonal_snr",
                   "aircomp_analytic_snr", "orthogonal_analytic_snr", "relative_gap", "aircomp_normalized_sum_rate",
                   "orthogonal_normalized_sum_rate", "frac_privacy_limited_aircomp",
                   "frac_privacy_limited_orthogonal"});
    for (std::size_t i = 0; i < air.size(); ++i) {
        csv.cell(c.eps_grid[i]).cell(top > 0 ? air[i].mean_snr / top : 0.0);
        csv.cell(top > 0 ? orth[i].mean_snr / top : 0.0).cell(air[i].mean_snr).cell(orth[i].mean_snr);
        csv.cell(air[i].mean_analytic_snr).cell(orth[i].mean_analytic_snr);
        csv.cell(orth[i].mean_snr > 0 ? (air[i].mean_snr - orth[i].mean_snr) / orth[i].mean_snr : 0.0);
        csv.cell(air[i].mean_normalized_sum_rate).cell(orth[i].mean_normalized_sum_rate);
        csv.cell(air[i].frac_privacy_limited).cell(orth[i].frac_privacy_limited).end_row();
    }
    csv.close();
}

void experiment_training_table(RunContext &ctx)
{
    const Config &c = ctx.config;
    const auto train_set = training_layouts(c);
    const auto layouts = test_layouts(c);
    const auto ref = wmmse_rates(layouts, c.wmmse_iterations);
    const std::vector<TrainVariant> variants = {TrainVariant::kClassic, TrainVariant::kNoArtificialNoise,
                                                TrainVariant::kPrivacyGuaranteed};
    // Signaling depends on the channel and the privacy target only, so one sample set serves every variant.
    const auto samples = prepare_samples(train_set, train_config(c, TrainVariant::kPrivacyGuaranteed, 0));

    CsvWriter runs(ctx.output("training_runs.csv"), {"variant", "seed", "normalized_sum_rate",
                                                     "clean_normalized_sum_rate", "final_train_loss", "model"});
    std::map<TrainVariant, std::vector<double>> noisy, clean;
    for (TrainVariant v : variants) {
        for (std::uint64_t seed : c.seeds) {
            const TrainRun run = train_logged(ctx, train_config(c, v, seed), samples);
            const std::string name = "models/" + to_string(v) + "_seed" + std::to_string(seed) + ".json";
            save_model(run.model, ctx.output(name));
            const EvalSummary s = evaluate(run.model, layouts, ref, inference_options(c), c.seed);
            const double cl = clean_normalized_sum_rate(run.model, layouts, ref, v);
            noisy[v].push_back(s.mean_normalized_sum_rate);
            clean[v].push_back(cl);
            log_of(ctx) << "  " << to_string(v) << " seed " << seed << ": noisy " << s.mean_normalized_sum_rate
                        << ", clean " << cl << '\n';
            runs.cell(to_string(v)).cell(seed).cell(s.mean_normalized_sum_rate).cell(cl);
            runs.cell(run.loss_history.empty() ? 0.0 : run.loss_history.back()).cell(name).end_row();
        }
    }
    runs.close();

    auto mean = [](const std::vector<double> &x) {
        double s = 0.0;
        for (double v : x)
            s += v;
        return s / static_cast<double>(x.size());
    };
    auto stddev = [&](const std::vector<double> &x) {
        if (x.size() < 2)
            return 0.0;
        const double m = mean(x);
        double s = 0.0;
        for (double v : x)
            s += (v - m) * (v - m);
        return std::sqrt(s / static_cast<double>(x.size() - 1));
    };
    CsvWriter table(ctx.output("training_table.csv"), {"variant", "mean_normalized_sum_rate", "std_normalized_sum_rate",
                                                       "mean_clean_normalized_sum_rate", "seeds"});
    for (TrainVariant v : variants) {
        table.cell(to_string(v)).cell(mean(noisy[v])).cell(stddev(noisy[v])).cell(mean(clean[v]));
        table.cell(static_cast<long long>(noisy[v].size())).end_row();
        out_of(ctx) << to_string(v) << ": " << mean(noisy[v]) << '\n';
    }
    table.close();
}

} // namespace

const std::vector<std::string> &experiment_ids()
{
    static const std::vector<std::string> ids = {"tradeoff-eps", "tradeoff-power", "signaling-opt", "aircomp-compare",
                                                  "training-table"};
    return ids;
}

void run_experiment(const std::string &id, RunContext &ctx)
{
    if (id == "tradeoff-eps")
        experiment_tradeoff_eps(ctx);
    else if (id == "tradeoff-power")
        experiment_tradeoff_power(ctx);
    else if (id == "signaling-opt")
        experiment_signaling_opt(ctx);
    else if (id == "aircomp-compare")
        experiment_aircomp_compare(ctx);
    else if (id == "training-table")
        experiment_training_table(ctx);
    else
        throw std::invalid_argument("unknown experiment '" + id + "'");
}

} // namespace airgnn::harness
