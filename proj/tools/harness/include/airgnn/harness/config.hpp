// SPDX-License-Identifier: Apache-2.0
//
// Run configuration shared by every subcommand. JSON keys match the field
// names; missing keys keep their defaults and unknown keys are rejected.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace airgnn::harness {

struct Config {
    // Network layouts
    int n_pairs = 10;
    double p_max_dbm = 30.0;
    double noise_var = 1.0;
    int train_layouts = 2000;
    int test_layouts = 200;
    std::uint64_t data_seed = 1;
    std::uint64_t test_seed = 2;
    std::string train_layouts_file; // optional, overrides generation
    std::string test_layouts_file;  // optional, overrides generation

    // Training
    std::string variant = "privacy-guaranteed";
    int epochs = 100;
    int batch_size = 64;
    double learning_rate = 1e-3;
    std::vector<std::uint64_t> seeds = {0, 1, 2}; // training-table repetitions
    std::string model; // optional model file used instead of training

    // Inference and signaling
    std::string mode = "aircomp";
    double eps_star = 1.0;
    double delta = 1e-4;
    double control_power_dbm = 10.0;
    int wmmse_iterations = 100;
    std::vector<double> eps_grid = {0.5, 1, 2, 4, 6, 8, 10, 15};
    std::vector<double> power_grid_dbm = {0, 10, 20, 30, 40, 50};

    // Single-receiver instance for `signaling` and `tradeoff`
    std::vector<double> rx_power = {1.0, 4.0};
    double instance_noise_var = 1.0;

    std::uint64_t seed = 0;
    bool paper_scale = false;
    int count = 0; // gen-layouts: number of layouts (0 = test_layouts)

    /// Throws std::invalid_argument describing the first invalid field.
    void validate() const;

    /// Switches to 10000 training layouts, 400 epochs and 1000 test layouts.
    void apply_paper_scale();
};

std::string config_to_json(const Config &c, int indent = 2);
Config config_from_json_text(const std::string &text);

/// Reads a config file, or the "config" member of a run manifest.
Config load_config(const std::filesystem::path &path);

} // namespace airgnn::harness
