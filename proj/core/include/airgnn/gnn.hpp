// SPDX-License-Identifier: Apache-2.0
//
// Message-passing GNN with sum aggregation. Layer k computes
//
//   msg_e    = f_M^(k)( [h_u^(k-1), e_vu] )      for every edge e = u->v
//   agg_v    = sum_{e into v} msg_e  (+ optional additive noise)
//   h_v^(k)  = f_U^(k)( [h_v^(k-1), agg_v] )
//
// with h^(0) the node features. Layer-1 messages can optionally be scaled to
// unit L2 norm before aggregation.

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "airgnn/mlp.hpp"
#include "airgnn/netgraph.hpp"

namespace airgnn {

struct GnnLayer {
    Mlp message;
    Mlp update;
};

struct GnnGradients {
    std::vector<MlpGradients> message;
    std::vector<MlpGradients> update;

    /// Same order as GnnModel::parameters().
    std::vector<const Eigen::MatrixXd *> flat() const;
    std::vector<Eigen::MatrixXd *> flat();
};

class GnnModel {
public:
    GnnModel() = default;

    /// Checks the dimension chaining between consecutive layers.
    GnnModel(int node_dim, int edge_dim, std::vector<GnnLayer> layers);

    /// Three-layer power-control model: message MLPs {4,16,32}, {34,64,32},
    /// {34,64,32}; update MLPs {34,16,32}, {64,64,32}, {64,64,16,1} with a
    /// sigmoid output. Batch norm on every hidden layer.
    static GnnModel power_control(std::uint64_t seed);

    /// Generic construction from (message, update) spec pairs, Xavier-initialized.
    static GnnModel from_specs(int node_dim, int edge_dim, const std::vector<std::pair<MlpSpec, MlpSpec>> &specs,
                               std::uint64_t seed);

    int layer_count() const noexcept { return static_cast<int>(layers_.size()); }
    int node_dim() const noexcept { return node_dim_; }
    int edge_dim() const noexcept { return edge_dim_; }
    int output_dim() const { return layers_.back().update.spec().output_dim(); }

    /// Hidden-state width after layer k (k = 0 is the node-feature width).
    int hidden_dim(int k) const;
    int message_dim(int k) const { return layers_[k - 1].message.spec().output_dim(); }

    /// Layers are 1-based, matching the iteration index.
    GnnLayer &layer(int k) { return layers_.at(k - 1); }
    const GnnLayer &layer(int k) const { return layers_.at(k - 1); }

    std::vector<Eigen::MatrixXd *> parameters();
    std::vector<const Eigen::MatrixXd *> parameters() const;
    GnnGradients zero_gradients() const;
    std::size_t parameter_count() const;

    /// Raw messages of layer k for every edge of the graph (edges x message_dim).
    Eigen::MatrixXd messages(int k, const NetworkGraph &graph, const Eigen::MatrixXd &h_prev, Mode mode,
                             std::span<const int> edge_segments = {}, MlpCache *cache = nullptr) const;

    /// Update step of layer k for every node (nodes x hidden_dim(k)).
    Eigen::MatrixXd update(int k, const Eigen::MatrixXd &h_prev, const Eigen::MatrixXd &aggregated, Mode mode,
                           std::span<const int> node_segments = {}, MlpCache *cache = nullptr) const;

private:
    int node_dim_ = 0;
    int edge_dim_ = 0;
    std::vector<GnnLayer> layers_;
};

/// raw / ||raw||_2, or the zero vector when the norm is at most 1e-12.
Eigen::VectorXd normalize_message(const Eigen::VectorXd &raw);

/// Row-wise normalize_message. `norms` receives the original row norms when given.
Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd &raw, Eigen::VectorXd *norms = nullptr);

/// Sum of edge rows into their destination nodes.
Eigen::MatrixXd aggregate(const NetworkGraph &graph, const Eigen::MatrixXd &edge_values);

struct ForwardOptions {
    Mode mode = Mode::kEval;
    bool normalize_first_layer = false;
    /// Optional additive term per layer (nodes x message_dim), index k-1; empty entries mean none.
    std::vector<Eigen::MatrixXd> aggregate_noise;
};

/// Intermediates needed to backpropagate through a training-mode forward pass.
struct GnnTape {
    struct Layer {
        Eigen::MatrixXd h_prev;
        Eigen::MatrixXd raw_messages;
        Eigen::VectorXd message_norms; // only with normalization
        bool normalized = false;
        MlpCache message_cache;
        MlpCache update_cache;
    };
    std::vector<Layer> layers;
    bool valid = false;
};

/// Forward pass over a batch; the tape is filled when non-null (training mode only).
Eigen::MatrixXd gnn_forward(const GnnModel &model, const GraphBatch &batch, const ForwardOptions &options,
                            GnnTape *tape = nullptr);

/// Eval-mode forward on one graph without normalization or noise.
Eigen::MatrixXd gnn_forward_clean(const GnnModel &model, const NetworkGraph &graph);

/// Accumulates parameter gradients for d(loss)/d(output); returns d(loss)/d(node features).
Eigen::MatrixXd gnn_backward(const GnnModel &model, const GraphBatch &batch, const GnnTape &tape,
                             const Eigen::MatrixXd &d_output, GnnGradients &grads);

/// Applies the running-statistics update of every batch-norm layer.
void update_running_stats(GnnModel &model, const GnnTape &tape);

/// JSON model file, format tag "airgnn-model-v1".
void save_model(const GnnModel &model, const std::filesystem::path &path);
GnnModel load_model(const std::filesystem::path &path);

} // namespace airgnn
