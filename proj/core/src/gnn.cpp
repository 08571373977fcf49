// SPDX-License-Identifier: Apache-2.0
#include "airgnn/gnn.hpp"

#include <cmath>
#include <stdexcept>

#include "airgnn/error.hpp"
#include "airgnn/rng.hpp"

namespace airgnn {

namespace {

constexpr double kNormFloor = 1e-12;

} // namespace

std::vector<const Eigen::MatrixXd *> GnnGradients::flat() const
{
    std::vector<const Eigen::MatrixXd *> out;
    for (std::size_t k = 0; k < message.size(); ++k) {
        for (const auto &p : message[k].params)
            out.push_back(&p);
        for (const auto &p : update[k].params)
            out.push_back(&p);
    }
    return out;
}

std::vector<Eigen::MatrixXd *> GnnGradients::flat()
{
    std::vector<Eigen::MatrixXd *> out;
    for (std::size_t k = 0; k < message.size(); ++k) {
        for (auto &p : message[k].params)
            out.push_back(&p);
        for (auto &p : update[k].params)
            out.push_back(&p);
    }
    return out;
}

GnnModel::GnnModel(int node_dim, int edge_dim, std::vector<GnnLayer> layers)
    : node_dim_(node_dim), edge_dim_(edge_dim), layers_(std::move(layers))
{
    if (layers_.empty())
        throw std::invalid_argument("gnn: at least one layer is required");
    int h = node_dim_;
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        const auto &m = layers_[k].message.spec();
        const auto &u = layers_[k].update.spec();
        const std::string tag = "gnn layer " + std::to_string(k + 1);
        if (m.input_dim() != h + edge_dim_)
            throw DimensionError(tag + ": message input must be hidden + edge width (" + std::to_string(h + edge_dim_) +
                                 "), got " + std::to_string(m.input_dim()));
        if (u.input_dim() != h + m.output_dim())
            throw DimensionError(tag + ": update input must be hidden + message width (" +
                                 std::to_string(h + m.output_dim()) + "), got " + std::to_string(u.input_dim()));
        h = u.output_dim();
    }
}

GnnModel GnnModel::from_specs(int node_dim, int edge_dim, const std::vector<std::pair<MlpSpec, MlpSpec>> &specs,
                              std::uint64_t seed)
{
    std::vector<GnnLayer> layers;
    for (std::size_t k = 0; k < specs.size(); ++k)
        layers.push_back({Mlp::initialized(specs[k].first, derive_seed(seed, {k, 0})),
                          Mlp::initialized(specs[k].second, derive_seed(seed, {k, 1}))});
    return GnnModel(node_dim, edge_dim, std::move(layers));
}

GnnModel GnnModel::power_control(std::uint64_t seed)
{
    const auto relu = Activation::kRelu;
    std::vector<std::pair<MlpSpec, MlpSpec>> specs = {
        {{{4, 16, 32}, relu, true}, {{34, 16, 32}, relu, true}},
        {{{34, 64, 32}, relu, true}, {{64, 64, 32}, relu, true}},
        {{{34, 64, 32}, relu, true}, {{64, 64, 16, 1}, Activation::kSigmoid, true}},
    };
    return from_specs(2, 2, specs, seed);
}

int GnnModel::hidden_dim(int k) const
{
    return k == 0 ? node_dim_ : layers_.at(k - 1).update.spec().output_dim();
}

std::vector<Eigen::MatrixXd *> GnnModel::parameters()
{
    std::vector<Eigen::MatrixXd *> out;
    for (auto &l : layers_) {
        for (auto *p : l.message.parameters())
            out.push_back(p);
        for (auto *p : l.update.parameters())
            out.push_back(p);
    }
    return out;
}

std::vector<const Eigen::MatrixXd *> GnnModel::parameters() const
{
    std::vector<const Eigen::MatrixXd *> out;
    for (const auto &l : layers_) {
        for (const auto *p : l.message.parameters())
            out.push_back(p);
        for (const auto *p : l.update.parameters())
            out.push_back(p);
    }
    return out;
}

GnnGradients GnnModel::zero_gradients() const
{
    GnnGradients g;
    for (const auto &l : layers_) {
        g.message.push_back(l.message.zero_gradients());
        g.update.push_back(l.update.zero_gradients());
    }
    return g;
}

std::size_t GnnModel::parameter_count() const
{
    std::size_t n = 0;
    for (const auto &l : layers_)
        n += l.message.parameter_count() + l.update.parameter_count();
    return n;
}

Eigen::MatrixXd GnnModel::messages(int k, const NetworkGraph &graph, const Eigen::MatrixXd &h_prev, Mode mode,
                                   std::span<const int> edge_segments, MlpCache *cache) const
{
    if (h_prev.rows() != graph.node_count || h_prev.cols() != hidden_dim(k - 1))
        throw DimensionError("gnn layer " + std::to_string(k) + ": hidden state has the wrong shape");
    if (graph.edge_dim() != edge_dim_ && graph.edge_count() > 0)
        throw DimensionError("gnn: graph edge features have width " + std::to_string(graph.edge_dim()) +
                             ", model expects " + std::to_string(edge_dim_));
    const Eigen::Index hd = h_prev.cols();
    Eigen::MatrixXd input(graph.edge_count(), hd + edge_dim_);
    for (int e = 0; e < graph.edge_count(); ++e) {
        input.row(e).head(hd) = h_prev.row(graph.edge_src[e]);
        input.row(e).tail(edge_dim_) = graph.edge_features.row(e);
    }
    return layer(k).message.forward(input, mode, edge_segments, cache);
}

Eigen::MatrixXd GnnModel::update(int k, const Eigen::MatrixXd &h_prev, const Eigen::MatrixXd &aggregated, Mode mode,
                                 std::span<const int> node_segments, MlpCache *cache) const
{
    if (aggregated.rows() != h_prev.rows() || aggregated.cols() != message_dim(k))
        throw DimensionError("gnn layer " + std::to_string(k) + ": aggregated message has the wrong shape");
    Eigen::MatrixXd input(h_prev.rows(), h_prev.cols() + aggregated.cols());
    input << h_prev, aggregated;
    return layer(k).update.forward(input, mode, node_segments, cache);
}

Eigen::VectorXd normalize_message(const Eigen::VectorXd &raw)
{
    if (raw.hasNaN())
        throw NumericError("normalize_message: NaN entry");
    const double n = raw.norm();
    if (!std::isfinite(n))
        throw NumericError("normalize_message: non-finite norm");
    if (n <= kNormFloor)
        return Eigen::VectorXd::Zero(raw.size());
    return raw / n;
}

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd &raw, Eigen::VectorXd *norms)
{
    if (raw.hasNaN())
        throw NumericError("normalize_rows: NaN entry");
    Eigen::VectorXd n = raw.rowwise().norm();
    Eigen::MatrixXd out(raw.rows(), raw.cols());
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
        if (n(i) <= kNormFloor)
            out.row(i).setZero();
        else
            out.row(i) = raw.row(i) / n(i);
    }
    if (norms)
        *norms = std::move(n);
    return out;
}

Eigen::MatrixXd aggregate(const NetworkGraph &graph, const Eigen::MatrixXd &edge_values)
{
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(graph.node_count, edge_values.cols());
    for (int v = 0; v < graph.node_count; ++v)
        for (int i = graph.in_offsets[v]; i < graph.in_offsets[v + 1]; ++i)
            out.row(v) += edge_values.row(graph.in_edges[i]);
    return out;
}

Eigen::MatrixXd gnn_forward(const GnnModel &model, const GraphBatch &batch, const ForwardOptions &options,
                            GnnTape *tape)
{
    const NetworkGraph &g = batch.graph;
    if (g.node_dim() != model.node_dim())
        throw DimensionError("gnn: graph node features have width " + std::to_string(g.node_dim()) +
                             ", model expects " + std::to_string(model.node_dim()));
    const bool train = options.mode == Mode::kTrain;
    if (tape && !train)
        throw ContractError("gnn_forward: a tape requires training mode");
    const int K = model.layer_count();
    if (!options.aggregate_noise.empty() && static_cast<int>(options.aggregate_noise.size()) != K)
        throw DimensionError("gnn_forward: expected one noise entry per layer");
    if (tape) {
        tape->layers.assign(K, {});
        tape->valid = true;
    }

    // Batch-norm statistics pool all nodes (edges) of the batch, matching the
    // running statistics used in eval mode.
    const std::span<const int> edge_segs, node_segs;

    Eigen::MatrixXd h = g.node_features;
    for (int k = 1; k <= K; ++k) {
        GnnTape::Layer *tl = tape ? &tape->layers[k - 1] : nullptr;
        Eigen::MatrixXd msg =
            model.messages(k, g, h, options.mode, edge_segs, tl ? &tl->message_cache : nullptr);
        const bool normalize = k == 1 && options.normalize_first_layer;
        if (tl) {
            tl->h_prev = h;
            tl->normalized = normalize;
        }
        if (normalize) {
            Eigen::VectorXd norms;
            Eigen::MatrixXd unit = normalize_rows(msg, &norms);
            if (tl) {
                tl->raw_messages = std::move(msg);
                tl->message_norms = std::move(norms);
            }
            msg = std::move(unit);
        }
        Eigen::MatrixXd agg = aggregate(g, msg);
        if (!options.aggregate_noise.empty() && options.aggregate_noise[k - 1].size() > 0) {
            const auto &noise = options.aggregate_noise[k - 1];
            if (noise.rows() != agg.rows() || noise.cols() != agg.cols())
                throw DimensionError("gnn_forward: noise for layer " + std::to_string(k) + " has the wrong shape");
            agg += noise;
        }
        h = model.update(k, h, agg, options.mode, node_segs, tl ? &tl->update_cache : nullptr);
    }
    return h;
}

Eigen::MatrixXd gnn_forward_clean(const GnnModel &model, const NetworkGraph &graph)
{
    GraphBatch b;
    b.graph = graph;
    return gnn_forward(model, b, {});
}

Eigen::MatrixXd gnn_backward(const GnnModel &model, const GraphBatch &batch, const GnnTape &tape,
                             const Eigen::MatrixXd &d_output, GnnGradients &grads)
{
    if (!tape.valid || static_cast<int>(tape.layers.size()) != model.layer_count())
        throw ContractError("gnn_backward: no training-mode tape available");
    if (grads.message.empty())
        grads = model.zero_gradients();
    const NetworkGraph &g = batch.graph;

    Eigen::MatrixXd dh = d_output;
    for (int k = model.layer_count(); k >= 1; --k) {
        const auto &tl = tape.layers[k - 1];
        const auto &L = model.layer(k);
        const Eigen::Index hd = tl.h_prev.cols();
        Eigen::MatrixXd d_in = L.update.backward(tl.update_cache, dh, grads.update[k - 1]);
        Eigen::MatrixXd dh_prev = d_in.leftCols(hd);
        const Eigen::MatrixXd d_agg = d_in.rightCols(d_in.cols() - hd);

        Eigen::MatrixXd d_msg(g.edge_count(), d_agg.cols());
        for (int e = 0; e < g.edge_count(); ++e)
            d_msg.row(e) = d_agg.row(g.edge_dst[e]);
        if (tl.normalized) {
            for (int e = 0; e < g.edge_count(); ++e) {
                const double n = tl.message_norms(e);
                if (n <= kNormFloor) {
                    d_msg.row(e).setZero();
                    continue;
                }
                Eigen::RowVectorXd unit = tl.raw_messages.row(e) / n;
                d_msg.row(e) = (d_msg.row(e) - unit * d_msg.row(e).dot(unit)) / n;
            }
        }
        Eigen::MatrixXd d_edge_in = L.message.backward(tl.message_cache, d_msg, grads.message[k - 1]);
        for (int e = 0; e < g.edge_count(); ++e)
            dh_prev.row(g.edge_src[e]) += d_edge_in.row(e).head(hd);
        dh = std::move(dh_prev);
    }
    return dh;
}

void update_running_stats(GnnModel &model, const GnnTape &tape)
{
    if (!tape.valid)
        throw ContractError("update_running_stats: no training-mode tape available");
    for (int k = 1; k <= model.layer_count(); ++k) {
        model.layer(k).message.update_running_stats(tape.layers[k - 1].message_cache);
        model.layer(k).update.update_running_stats(tape.layers[k - 1].update_cache);
    }
}

} // namespace airgnn
