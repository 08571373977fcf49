// SPDX-License-Identifier: Apache-2.0
//
// Multi-layer perceptron with optional batch normalization and exact
// reverse-mode gradients. Inputs are row-major batches (one sample per row).
//
// Hidden layer:  affine -> batch norm (optional) -> ReLU
// Output layer:  affine -> output activation (no batch norm)
//
// In training mode batch-norm statistics are computed per row segment, so
// several graphs can share one matrix without mixing their statistics.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace airgnn {

enum class Activation { kRelu, kSigmoid, kIdentity };

std::string to_string(Activation a);
Activation activation_from_string(const std::string &s);

enum class Mode { kTrain, kEval };

struct MlpSpec {
    std::vector<int> widths; // input, hidden..., output
    Activation output_activation = Activation::kRelu;
    bool batch_norm = true; // applies to every hidden layer

    int input_dim() const { return widths.front(); }
    int output_dim() const { return widths.back(); }
    int layer_count() const { return static_cast<int>(widths.size()) - 1; }

    friend bool operator==(const MlpSpec &, const MlpSpec &) = default;
};

struct DenseLayer {
    Eigen::MatrixXd weight; // in x out
    Eigen::MatrixXd bias;   // 1 x out
    bool batch_norm = false;
    Eigen::MatrixXd gamma;  // 1 x out (batch-norm scale)
    Eigen::MatrixXd beta;   // 1 x out (batch-norm shift)
    Eigen::RowVectorXd running_mean;
    Eigen::RowVectorXd running_var;
};

/// Per-layer intermediates recorded by a training-mode forward pass.
struct LayerCache {
    Eigen::MatrixXd xhat;     // normalized affine output (batch norm only)
    Eigen::MatrixXd inv_std;  // segments x out
    Eigen::MatrixXd seg_mean; // segments x out
    Eigen::MatrixXd seg_var;  // segments x out (biased)
    Eigen::MatrixXd output;   // after activation
};

struct MlpCache {
    Eigen::MatrixXd input; // input of layer 0; layer l > 0 reads layers[l-1].output
    std::vector<LayerCache> layers;
    std::vector<int> segments;
    bool valid = false;
};

/// Gradients in the same order as Mlp::parameters().
struct MlpGradients {
    std::vector<Eigen::MatrixXd> params;
};

class Mlp {
public:
    static constexpr double kBnEps = 1e-5;
    static constexpr double kBnMomentum = 0.1;

    Mlp() = default;
    explicit Mlp(MlpSpec spec);

    /// Uniform +-sqrt(6/(fan_in+fan_out)) weights, zero biases, unit BN scale.
    static Mlp initialized(MlpSpec spec, std::uint64_t seed);

    const MlpSpec &spec() const noexcept { return spec_; }
    std::span<DenseLayer> layers() noexcept { return layers_; }
    std::span<const DenseLayer> layers() const noexcept { return layers_; }

    /// `segments` holds row offsets {0, ..., rows}; empty means one segment.
    /// A non-null cache is filled in training mode.
    Eigen::MatrixXd forward(const Eigen::MatrixXd &input, Mode mode, std::span<const int> segments = {},
                            MlpCache *cache = nullptr) const;

    /// Returns d(loss)/d(input) and accumulates into `grads` (allocated if empty).
    Eigen::MatrixXd backward(const MlpCache &cache, const Eigen::MatrixXd &d_output, MlpGradients &grads) const;

    /// Exponential running-statistics update from the segment statistics of a training pass.
    void update_running_stats(const MlpCache &cache);

    /// Mutable views of weight, bias, gamma, beta per layer (BN terms only when enabled).
    std::vector<Eigen::MatrixXd *> parameters();
    std::vector<const Eigen::MatrixXd *> parameters() const;

    MlpGradients zero_gradients() const;

    std::size_t parameter_count() const;

private:
    MlpSpec spec_;
    std::vector<DenseLayer> layers_;
};

} // namespace airgnn
