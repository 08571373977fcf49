// SPDX-License-Identifier: Apache-2.0
#include "airgnn/harness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "airgnn/error.hpp"
#include "airgnn/signaling.hpp"
#include "airgnn/training.hpp"

namespace airgnn::harness {

using nlohmann::json;

namespace {

void check_increasing(const std::vector<double> &grid, const char *name)
{
    if (grid.empty())
        throw std::invalid_argument(std::string(name) + " must not be empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument(std::string(name) + " must be strictly increasing");
}

// Field table: one entry per JSON key.
#define AIRGNN_CONFIG_FIELDS(X)                                                                                        \
    X(n_pairs)                                                                                                         \
    X(p_max_dbm)                                                                                                       \
    X(noise_var)                                                                                                       \
    X(train_layouts)                                                                                                   \
    X(test_layouts)                                                                                                    \
    X(data_seed)                                                                                                       \
    X(test_seed)                                                                                                       \
    X(train_layouts_file)                                                                                              \
    X(test_layouts_file)                                                                                               \
    X(variant)                                                                                                         \
    X(epochs)                                                                                                          \
    X(batch_size)                                                                                                      \
    X(learning_rate)                                                                                                   \
    X(seeds)                                                                                                           \
    X(model)                                                                                                           \
    X(mode)                                                                                                            \
    X(eps_star)                                                                                                        \
    X(delta)                                                                                                           \
    X(control_power_dbm)                                                                                               \
    X(wmmse_iterations)                                                                                                \
    X(eps_grid)                                                                                                        \
    X(power_grid_dbm)                                                                                                  \
    X(rx_power)                                                                                                        \
    X(instance_noise_var)                                                                                              \
    X(seed)                                                                                                            \
    X(paper_scale)                                                                                                     \
    X(count)

} // namespace

void Config::validate() const
{
    if (n_pairs < 1)
        throw std::invalid_argument("n_pairs must be >= 1");
    if (!(noise_var > 0.0))
        throw std::invalid_argument("noise_var must be > 0");
    if (train_layouts < 1 || test_layouts < 1)
        throw std::invalid_argument("train_layouts and test_layouts must be >= 1");
    if (epochs < 0 || batch_size < 1 || !(learning_rate > 0.0))
        throw std::invalid_argument("epochs >= 0, batch_size >= 1 and learning_rate > 0 are required");
    if (seeds.empty())
        throw std::invalid_argument("seeds must not be empty");
    train_variant_from_string(variant);
    signaling_mode_from_string(mode);
    PrivacyTarget{eps_star, delta}.validate();
    if (wmmse_iterations < 1)
        throw std::invalid_argument("wmmse_iterations must be >= 1");
    check_increasing(eps_grid, "eps_grid");
    if (!(eps_grid.front() > 0.0))
        throw std::invalid_argument("eps_grid must be positive");
    check_increasing(power_grid_dbm, "power_grid_dbm");
    ReceiverInstance{rx_power, instance_noise_var}.validate();
    if (count < 0)
        throw std::invalid_argument("count must be >= 0");
}

void Config::apply_paper_scale()
{
    paper_scale = true;
    train_layouts = 10000;
    epochs = 400;
    test_layouts = 1000;
}

std::string config_to_json(const Config &c, int indent)
{
    json j;
#define X(name) j[#name] = c.name;
    AIRGNN_CONFIG_FIELDS(X)
#undef X
    return j.dump(indent);
}

namespace {

Config config_from_json(const json &j)
{
    if (!j.is_object())
        throw std::invalid_argument("config must be a JSON object");
    static const std::set<std::string> known = {
#define X(name) #name,
        AIRGNN_CONFIG_FIELDS(X)
#undef X
    };
    for (const auto &[key, value] : j.items())
        if (!known.count(key))
            throw std::invalid_argument("unknown config key \"" + key + "\"");
    Config c;
    try {
#define X(name)                                                                                                        \
    if (j.contains(#name))                                                                                             \
        j.at(#name).get_to(c.name);
        AIRGNN_CONFIG_FIELDS(X)
#undef X
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return c;
}

} // namespace

Config config_from_json_text(const std::string &text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            line += text[i] == '\n';
        throw ParseError(std::string("malformed config: ") + e.what(), line);
    }
    if (j.is_object() && j.contains("config") && j.contains("tool"))
        return config_from_json(j.at("config"));
    return config_from_json(j);
}

Config load_config(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open config " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return config_from_json_text(ss.str());
}

} // namespace airgnn::harness
