// SPDX-License-Identifier: Apache-2.0
//
// Subcommand and experiment drivers. Each driver writes its files into the
// context's output directory and records their names for the run manifest.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "airgnn/gnn.hpp"
#include "airgnn/harness/config.hpp"
#include "airgnn/infer.hpp"
#include "airgnn/netgraph.hpp"

namespace airgnn::harness {

struct RunContext {
    Config config;
    std::filesystem::path out_dir;
    std::ostream *out = nullptr; // results meant for the user
    std::ostream *log = nullptr; // progress
    std::vector<std::string> outputs;

    std::filesystem::path output(const std::string &name);
};

std::vector<Layout> training_layouts(const Config &c);
std::vector<Layout> test_layouts(const Config &c);

/// Loads config.model, or trains the configured variant and saves it as model.json.
GnnModel obtain_model(RunContext &ctx);

struct EvalSummary {
    double mean_snr = 0.0;          // measured first-iteration SNR, mean over nodes with neighbors
    double mean_analytic_snr = 0.0;
    double mean_normalized_sum_rate = 0.0;
    double frac_privacy_limited = 0.0;
};

/// Noisy decentralized inference over a layout set; layout k uses noise seed derive_seed(seed, {k}).
EvalSummary evaluate(const GnnModel &model, std::span<const Layout> layouts, std::span<const double> wmmse_rates,
                     const InferenceOptions &options, std::uint64_t seed, std::vector<InferenceReport> *reports = nullptr);

std::vector<double> wmmse_rates(std::span<const Layout> layouts, int iterations);

void run_gen_layouts(RunContext &ctx);
void run_train(RunContext &ctx);
void run_infer(RunContext &ctx);
void run_signaling(RunContext &ctx);
void run_tradeoff(RunContext &ctx);
void run_wmmse(RunContext &ctx);

/// ids: tradeoff-eps, tradeoff-power, signaling-opt, aircomp-compare, training-table.
void run_experiment(const std::string &id, RunContext &ctx);

const std::vector<std::string> &experiment_ids();

} // namespace airgnn::harness
