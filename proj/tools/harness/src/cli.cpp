// SPDX-License-Identifier: Apache-2.0
#include "airgnn/harness/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "airgnn/error.hpp"
#include "airgnn/harness/config.hpp"
#include "airgnn/harness/experiments.hpp"

#ifndef AIRGNN_VERSION
#define AIRGNN_VERSION "unknown"
#endif

namespace airgnn::harness {

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Flags {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
    std::optional<double> eps;
    std::optional<double> delta;
    std::optional<double> power_dbm;
    std::optional<std::string> variant;
    std::optional<int> epochs;
    std::optional<std::string> model;
    std::optional<int> count;
    std::optional<std::vector<double>> rx_power;
    std::optional<double> noise_var;
    bool paper_scale = false;
};

void add_common(CLI::App *cmd, Flags &f)
{
    cmd->add_option("--config", f.config_path, "JSON config or run manifest")->check(CLI::ExistingFile);
    cmd->add_option("--out", f.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", f.seed, "root random seed");
    cmd->add_option("--mode", f.mode, "signaling mode")->check(CLI::IsMember({"aircomp", "orthogonal"}));
    cmd->add_option("--eps", f.eps, "target privacy budget eps*");
    cmd->add_option("--delta", f.delta, "privacy slack delta");
    cmd->add_option("--power-dbm", f.power_dbm, "control-channel transmit power (dBm)");
    cmd->add_flag("--paper-scale", f.paper_scale, "10000 training layouts, 400 epochs, 1000 test layouts");
}

Config resolve_config(const Flags &f, std::ostream &err)
{
    Config c;
    try {
        if (!f.config_path.empty())
            c = load_config(f.config_path);
    } catch (const std::exception &e) {
        throw ConfigError(e.what());
    }
    if (f.seed)
        c.seed = *f.seed;
    if (f.mode)
        c.mode = *f.mode;
    if (f.eps)
        c.eps_star = *f.eps;
    if (f.delta)
        c.delta = *f.delta;
    if (f.power_dbm)
        c.control_power_dbm = *f.power_dbm;
    if (f.variant)
        c.variant = *f.variant;
    if (f.epochs)
        c.epochs = *f.epochs;
    if (f.model)
        c.model = *f.model;
    if (f.count)
        c.count = *f.count;
    if (f.rx_power)
        c.rx_power = *f.rx_power;
    if (f.noise_var)
        c.instance_noise_var = *f.noise_var;
    if (f.paper_scale)
        c.apply_paper_scale();
    if (c.paper_scale)
        err << "warning: --paper-scale selected (10000 training layouts, 400 epochs, 1000 test layouts); "
               "expect a multi-hour run\n";
    try {
        c.validate();
    } catch (const std::exception &e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    return c;
}

std::string compiler_version()
{
#if defined(__clang__)
    return "clang " __clang_version__;
#elif defined(__GNUC__)
    return "gcc " __VERSION__;
#else
    return "unknown";
#endif
}

void write_manifest(const RunContext &ctx, const std::string &command, const std::string &experiment)
{
    nlohmann::json m;
    m["tool"] = "airgnn";
    m["command"] = command;
    if (!experiment.empty())
        m["experiment"] = experiment;
    m["seed"] = ctx.config.seed;
    m["versions"] = {{"airgnn", AIRGNN_VERSION},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"compiler", compiler_version()}};
    m["config"] = nlohmann::json::parse(config_to_json(ctx.config));
    m["outputs"] = ctx.outputs;
    std::ofstream os(ctx.out_dir / "run_manifest.json");
    os << m.dump(2) << '\n';
    if (!os)
        throw std::runtime_error("cannot write " + (ctx.out_dir / "run_manifest.json").string());
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Privacy-preserving decentralized GNN inference over wireless channels", "airgnn"};
    app.set_version_flag("--version", std::string(AIRGNN_VERSION));
    app.require_subcommand(1);

    Flags f;
    std::string experiment_id;
    std::map<std::string, std::function<void(RunContext &)>> drivers = {
        {"gen-layouts", run_gen_layouts}, {"train", run_train},     {"infer", run_infer},
        {"signaling", run_signaling},     {"tradeoff", run_tradeoff}, {"wmmse", run_wmmse},
    };

    auto *gen = app.add_subcommand("gen-layouts", "generate random network layouts");
    auto *tr = app.add_subcommand("train", "train a power-control GNN");
    auto *inf = app.add_subcommand("infer", "noisy decentralized inference on test layouts");
    auto *sig = app.add_subcommand("signaling", "privacy-preserving signaling for one receiver");
    auto *trd = app.add_subcommand("tradeoff", "SNR-privacy trade-off curve for one receiver");
    auto *wm = app.add_subcommand("wmmse", "WMMSE baseline on test layouts");
    auto *exp = app.add_subcommand("experiment", "run a named experiment");
    for (auto *cmd : {gen, tr, inf, sig, trd, wm, exp})
        add_common(cmd, f);
    gen->add_option("--count", f.count, "number of layouts");
    for (auto *cmd : {tr, exp})
        cmd->add_option("--variant", f.variant, "training variant")
            ->check(CLI::IsMember({"classic", "no-artificial-noise", "privacy-guaranteed"}));
    for (auto *cmd : {tr, inf, exp})
        cmd->add_option("--epochs", f.epochs, "training epochs");
    for (auto *cmd : {inf, exp})
        cmd->add_option("--model", f.model, "trained model file (skips training)")->check(CLI::ExistingFile);
    for (auto *cmd : {sig, trd}) {
        cmd->add_option("--rx-power", f.rx_power, "received power |g|^2 P of each neighbor")->delimiter(',');
        cmd->add_option("--noise-var", f.noise_var, "receiver noise variance");
    }
    exp->add_option("id", experiment_id, "experiment id")->required()->check(CLI::IsMember(experiment_ids()));

    if (args.empty()) {
        out << app.help();
        return 2;
    }
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return 0;
    } catch (const CLI::CallForVersion &e) {
        out << e.what() << '\n';
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\nrun with --help for usage\n";
        return 2;
    }

    CLI::App *cmd = app.get_subcommands().front();
    const std::string command = cmd->get_name();
    try {
        RunContext ctx;
        ctx.config = resolve_config(f, err);
        ctx.out_dir = f.out_dir;
        ctx.out = &out;
        ctx.log = &err;
        std::filesystem::create_directories(ctx.out_dir);
        if (command == "experiment")
            run_experiment(experiment_id, ctx);
        else
            drivers.at(command)(ctx);
        write_manifest(ctx, command, experiment_id);
        return 0;
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        err << "error: " << command << ": " << e.what() << '\n';
        return 1;
    }
}

int run_cli(int argc, char **argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

} // namespace airgnn::harness
