// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "airgnn/error.hpp"
#include "airgnn/gnn.hpp"

namespace airgnn {

namespace {

using nlohmann::json;

constexpr const char *kFormat = "airgnn-model-v1";

json matrix_to_json(const Eigen::MatrixXd &m)
{
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            data.push_back(m(i, j));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd matrix_from_json(const json &j, Eigen::Index rows, Eigen::Index cols, const std::string &what)
{
    if (j.at("rows").get<Eigen::Index>() != rows || j.at("cols").get<Eigen::Index>() != cols)
        throw DimensionError("model file: " + what + " should be " + std::to_string(rows) + "x" + std::to_string(cols));
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != static_cast<std::size_t>(rows * cols))
        throw DimensionError("model file: " + what + " has the wrong number of entries");
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j2 = 0; j2 < cols; ++j2)
            m(i, j2) = data[static_cast<std::size_t>(i * cols + j2)];
    return m;
}

json mlp_to_json(const Mlp &mlp)
{
    json layers = json::array();
    for (const auto &L : mlp.layers()) {
        json l = {{"weight", matrix_to_json(L.weight)}, {"bias", matrix_to_json(L.bias)}, {"batch_norm", L.batch_norm}};
        if (L.batch_norm) {
            l["gamma"] = matrix_to_json(L.gamma);
            l["beta"] = matrix_to_json(L.beta);
            l["running_mean"] = matrix_to_json(L.running_mean);
            l["running_var"] = matrix_to_json(L.running_var);
        }
        layers.push_back(std::move(l));
    }
    const auto &s = mlp.spec();
    return {{"spec", {{"widths", s.widths}, {"output_activation", to_string(s.output_activation)}, {"batch_norm", s.batch_norm}}},
            {"layers", layers}};
}

Mlp mlp_from_json(const json &j, const std::string &what)
{
    MlpSpec spec;
    spec.widths = j.at("spec").at("widths").get<std::vector<int>>();
    spec.output_activation = activation_from_string(j.at("spec").at("output_activation").get<std::string>());
    spec.batch_norm = j.at("spec").at("batch_norm").get<bool>();
    Mlp mlp(spec);
    const auto &layers = j.at("layers");
    if (layers.size() != static_cast<std::size_t>(spec.layer_count()))
        throw DimensionError("model file: " + what + " layer count does not match its widths");
    auto dst = mlp.layers();
    for (std::size_t l = 0; l < dst.size(); ++l) {
        auto &L = dst[l];
        const auto &src = layers[l];
        const std::string tag = what + " layer " + std::to_string(l);
        const auto in = L.weight.rows(), out = L.weight.cols();
        L.weight = matrix_from_json(src.at("weight"), in, out, tag + " weight");
        L.bias = matrix_from_json(src.at("bias"), 1, out, tag + " bias");
        if (src.at("batch_norm").get<bool>() != L.batch_norm)
            throw DimensionError("model file: " + tag + " batch-norm flag disagrees with its spec");
        if (L.batch_norm) {
            L.gamma = matrix_from_json(src.at("gamma"), 1, out, tag + " gamma");
            L.beta = matrix_from_json(src.at("beta"), 1, out, tag + " beta");
            L.running_mean = matrix_from_json(src.at("running_mean"), 1, out, tag + " running_mean");
            L.running_var = matrix_from_json(src.at("running_var"), 1, out, tag + " running_var");
        }
    }
    return mlp;
}

} // namespace

void save_model(const GnnModel &model, const std::filesystem::path &path)
{
    json layers = json::array();
    for (int k = 1; k <= model.layer_count(); ++k)
        layers.push_back({{"message", mlp_to_json(model.layer(k).message)},
                          {"update", mlp_to_json(model.layer(k).update)}});
    json doc = {{"format", kFormat},
                {"node_dim", model.node_dim()},
                {"edge_dim", model.edge_dim()},
                {"layers", layers}};
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("save_model: cannot open " + path.string() + " for writing");
    os << doc.dump(1) << '\n';
    if (!os)
        throw std::runtime_error("save_model: write failed for " + path.string());
}

GnnModel load_model(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("load_model: cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    json doc;
    try {
        doc = json::parse(ss.str());
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("malformed model file ") + path.string() + ": " + e.what(), 0);
    }
    try {
        if (doc.value("format", std::string()) != kFormat)
            throw std::runtime_error("unsupported model format (expected " + std::string(kFormat) + ")");
        std::vector<GnnLayer> layers;
        int k = 1;
        for (const auto &l : doc.at("layers")) {
            const std::string tag = "layer " + std::to_string(k++);
            layers.push_back({mlp_from_json(l.at("message"), tag + " message"),
                              mlp_from_json(l.at("update"), tag + " update")});
        }
        return GnnModel(doc.at("node_dim").get<int>(), doc.at("edge_dim").get<int>(), std::move(layers));
    } catch (const json::exception &e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
}

} // namespace airgnn
