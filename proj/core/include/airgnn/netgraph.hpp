// SPDX-License-Identifier: Apache-2.0
//
// Network layouts of mutually interfering D2D pairs and their graph view.
//
// A layout with n pairs stores the complex gain from every transmitter j to
// every receiver i. The graph view has one node per pair and a directed edge
// u->v for every ordered pair u != v:
//
//   node i features  = [ |g_{i,i}|, sigma_i^2 ]
//   edge u->v        = [ |g_{u,v}|, |g_{v,u}| ]
//
// All powers are linear (mW); dBm values are converted once at ingestion.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace airgnn {

struct ComplexGain {
    double re = 0.0;
    double im = 0.0;

    double magnitude() const noexcept { return std::hypot(re, im); }
    double power() const noexcept { return re * re + im * im; }
    double phase() const noexcept { return std::atan2(im, re); }

    friend bool operator==(const ComplexGain &, const ComplexGain &) = default;
};

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

class Layout {
public:
    Layout() = default;

    /// Throws std::invalid_argument unless gains is n*n, noise_var has n
    /// strictly positive entries and p_max_mw > 0.
    Layout(int n_pairs, std::vector<ComplexGain> gains, std::vector<double> noise_var, double p_max_mw);

    int n_pairs() const noexcept { return n_; }

    /// Gain from transmitter `tx` to receiver `rx`.
    const ComplexGain &gain(int tx, int rx) const { return gains_[static_cast<std::size_t>(tx) * n_ + rx]; }
    ComplexGain &gain(int tx, int rx) { return gains_[static_cast<std::size_t>(tx) * n_ + rx]; }

    double noise_var(int rx) const { return noise_var_[rx]; }
    double p_max_mw() const noexcept { return p_max_mw_; }

    std::span<const ComplexGain> gains() const noexcept { return gains_; }
    std::span<const double> noise_vars() const noexcept { return noise_var_; }

    friend bool operator==(const Layout &, const Layout &) = default;

private:
    int n_ = 0;
    std::vector<ComplexGain> gains_; // row-major: tx * n + rx
    std::vector<double> noise_var_;
    double p_max_mw_ = 1.0;
};

/// One layout with i.i.d. CN(0,1) gains (per-component variance 1/2).
Layout generate_layout(int n_pairs, double p_max_dbm, double noise_var, std::uint64_t rng_seed);

/// `count` layouts; layout k is generated from derive_seed(rng_seed, {k}).
std::vector<Layout> generate_layouts(std::size_t count, int n_pairs, double p_max_dbm, double noise_var,
                                     std::uint64_t rng_seed);

/// Directed graph with dense node/edge feature matrices (one row per item).
struct NetworkGraph {
    int node_count = 0;
    Eigen::MatrixXd node_features; // node_count x node_dim
    Eigen::MatrixXd edge_features; // edge_count x edge_dim
    std::vector<int> edge_src;
    std::vector<int> edge_dst;

    /// CSR incoming-edge lists: edges into v are in_edges[in_offsets[v] .. in_offsets[v+1]).
    std::vector<int> in_offsets;
    std::vector<int> in_edges;

    int edge_count() const noexcept { return static_cast<int>(edge_src.size()); }
    int node_dim() const noexcept { return static_cast<int>(node_features.cols()); }
    int edge_dim() const noexcept { return static_cast<int>(edge_features.cols()); }

    /// Source nodes of the edges into v, i.e. N(v), in edge order.
    std::vector<int> neighbors(int v) const;

    /// Checks endpoint validity, feature row counts and CSR consistency.
    void validate() const;
};

/// Builds a graph from an explicit edge list; rebuilds the CSR index.
NetworkGraph make_graph(Eigen::MatrixXd node_features, Eigen::MatrixXd edge_features, std::vector<int> edge_src,
                        std::vector<int> edge_dst);

/// Fully connected graph; edges are grouped by destination, sources ascending.
NetworkGraph layout_to_graph(const Layout &layout);

/// Disjoint union of several graphs, with the row offsets of each member.
struct GraphBatch {
    NetworkGraph graph;
    std::vector<int> node_offsets; // size graphs + 1
    std::vector<int> edge_offsets; // size graphs + 1

    int graph_count() const noexcept { return static_cast<int>(node_offsets.size()) - 1; }
};

GraphBatch make_batch(std::span<const NetworkGraph *const> graphs);
GraphBatch make_batch(const NetworkGraph &graph);

/// JSON layout file; see README for the schema. Floats use 17 significant digits.
void save_layouts(std::span<const Layout> layouts, const std::filesystem::path &path);

/// Throws ParseError (with line number when known) on malformed content.
std::vector<Layout> load_layouts(const std::filesystem::path &path);

} // namespace airgnn
