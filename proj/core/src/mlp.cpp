// SPDX-License-Identifier: Apache-2.0
#include "airgnn/mlp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "airgnn/error.hpp"
#include "airgnn/rng.hpp"

namespace airgnn {

std::string to_string(Activation a)
{
    switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kIdentity: return "identity";
    }
    return "unknown";
}

Activation activation_from_string(const std::string &s)
{
    if (s == "relu")
        return Activation::kRelu;
    if (s == "sigmoid")
        return Activation::kSigmoid;
    if (s == "identity")
        return Activation::kIdentity;
    throw std::invalid_argument("unknown activation '" + s + "'");
}

namespace {

void apply_activation(Eigen::MatrixXd &x, Activation a)
{
    switch (a) {
    case Activation::kRelu: x.array() = x.array().max(0.0); break;
    case Activation::kSigmoid: x.array() = (1.0 + (-x.array()).exp()).inverse(); break;
    case Activation::kIdentity: break;
    }
}

// d(out)/d(in) expressed through the activation output.
void activation_backward(Eigen::MatrixXd &grad, const Eigen::MatrixXd &out, Activation a)
{
    switch (a) {
    case Activation::kRelu: grad.array() *= (out.array() > 0.0).cast<double>(); break;
    case Activation::kSigmoid: grad.array() *= out.array() * (1.0 - out.array()); break;
    case Activation::kIdentity: break;
    }
}

std::vector<int> normalize_segments(std::span<const int> segments, Eigen::Index rows)
{
    if (segments.empty())
        return {0, static_cast<int>(rows)};
    if (segments.size() < 2 || segments.front() != 0 || segments.back() != rows)
        throw DimensionError("mlp: segment offsets must start at 0 and end at the row count");
    return {segments.begin(), segments.end()};
}

} // namespace

Mlp::Mlp(MlpSpec spec) : spec_(std::move(spec))
{
    if (spec_.widths.size() < 2)
        throw std::invalid_argument("mlp: at least two widths (input, output) are required");
    for (int w : spec_.widths)
        if (w < 1)
            throw std::invalid_argument("mlp: widths must be positive");
    const int n_layers = spec_.layer_count();
    layers_.resize(n_layers);
    for (int l = 0; l < n_layers; ++l) {
        auto &L = layers_[l];
        const int in = spec_.widths[l], out = spec_.widths[l + 1];
        L.weight = Eigen::MatrixXd::Zero(in, out);
        L.bias = Eigen::MatrixXd::Zero(1, out);
        L.batch_norm = spec_.batch_norm && l + 1 < n_layers;
        if (L.batch_norm) {
            L.gamma = Eigen::MatrixXd::Ones(1, out);
            L.beta = Eigen::MatrixXd::Zero(1, out);
            L.running_mean = Eigen::RowVectorXd::Zero(out);
            L.running_var = Eigen::RowVectorXd::Ones(out);
        }
    }
}

Mlp Mlp::initialized(MlpSpec spec, std::uint64_t seed)
{
    Mlp m(std::move(spec));
    std::mt19937_64 rng(seed);
    for (auto &L : m.layers_) {
        const double limit = std::sqrt(6.0 / static_cast<double>(L.weight.rows() + L.weight.cols()));
        std::uniform_real_distribution<double> dist(-limit, limit);
        for (Eigen::Index i = 0; i < L.weight.rows(); ++i)
            for (Eigen::Index j = 0; j < L.weight.cols(); ++j)
                L.weight(i, j) = dist(rng);
    }
    return m;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd &input, Mode mode, std::span<const int> segments,
                             MlpCache *cache) const
{
    if (input.cols() != spec_.input_dim())
        throw DimensionError("mlp layer 0: expected input width " + std::to_string(spec_.input_dim()) + ", got " +
                             std::to_string(input.cols()));
    if (!input.allFinite())
        throw NumericError("mlp: non-finite input");

    const bool train = mode == Mode::kTrain;
    std::vector<int> segs;
    if (train)
        segs = normalize_segments(segments, input.rows());
    if (cache) {
        cache->layers.assign(layers_.size(), {});
        cache->segments = segs;
        cache->valid = train;
    }

    const int n_layers = static_cast<int>(layers_.size());
    if (cache)
        cache->input = input;
    Eigen::MatrixXd local;
    const Eigen::MatrixXd *x = &input;
    for (int l = 0; l < n_layers; ++l) {
        const auto &L = layers_[l];
        LayerCache *lc = cache ? &cache->layers[l] : nullptr;
        Eigen::MatrixXd z(x->rows(), L.weight.cols());
        if (train) {
            z.noalias() = *x * L.weight;
        } else {
            // Row by row so every sample takes the same arithmetic path: eval
            // outputs do not depend on batch size or row position.
            for (Eigen::Index i = 0; i < z.rows(); ++i)
                z.row(i).noalias() = x->row(i) * L.weight;
        }
        z.rowwise() += L.bias.row(0);

        if (L.batch_norm) {
            const Eigen::Index out = z.cols();
            if (train) {
                const Eigen::Index n_seg = static_cast<Eigen::Index>(segs.size()) - 1;
                Eigen::MatrixXd inv_std(n_seg, out), mean(n_seg, out), var(n_seg, out);
                for (Eigen::Index s = 0; s < n_seg; ++s) {
                    const int r0 = segs[s], rows = segs[s + 1] - segs[s];
                    if (rows <= 0) {
                        inv_std.row(s).setZero();
                        mean.row(s).setZero();
                        var.row(s).setZero();
                        continue;
                    }
                    auto block = z.middleRows(r0, rows);
                    const Eigen::RowVectorXd mu = block.colwise().mean();
                    block.rowwise() -= mu;
                    const Eigen::RowVectorXd v = block.array().square().colwise().sum() / static_cast<double>(rows);
                    const Eigen::RowVectorXd is = (v.array() + kBnEps).rsqrt();
                    block.array().rowwise() *= is.array();
                    inv_std.row(s) = is;
                    mean.row(s) = mu;
                    var.row(s) = v;
                }
                if (lc) {
                    lc->xhat = z;
                    lc->inv_std = std::move(inv_std);
                    lc->seg_mean = std::move(mean);
                    lc->seg_var = std::move(var);
                }
            } else {
                const Eigen::RowVectorXd is = (L.running_var.array() + kBnEps).rsqrt();
                z.rowwise() -= L.running_mean;
                z.array().rowwise() *= is.array();
            }
            z.array().rowwise() *= L.gamma.row(0).array();
            z.rowwise() += L.beta.row(0);
        }

        apply_activation(z, l + 1 < n_layers ? Activation::kRelu : spec_.output_activation);
        if (lc) {
            lc->output = std::move(z);
            x = &lc->output;
        } else {
            local = std::move(z);
            x = &local;
        }
    }
    return *x;
}

Eigen::MatrixXd Mlp::backward(const MlpCache &cache, const Eigen::MatrixXd &d_output, MlpGradients &grads) const
{
    if (!cache.valid || cache.layers.size() != layers_.size())
        throw ContractError("mlp backward: no training-mode forward cache available");
    if (grads.params.empty())
        grads = zero_gradients();

    const int n_layers = static_cast<int>(layers_.size());
    // Parameter slot of each layer's weight in the flat list.
    std::vector<int> slot(n_layers);
    for (int l = 0, p = 0; l < n_layers; ++l) {
        slot[l] = p;
        p += layers_[l].batch_norm ? 4 : 2;
    }

    Eigen::MatrixXd g = d_output;
    for (int l = n_layers - 1; l >= 0; --l) {
        const auto &L = layers_[l];
        const auto &lc = cache.layers[l];
        if (g.rows() != lc.output.rows() || g.cols() != lc.output.cols())
            throw DimensionError("mlp backward: gradient shape does not match layer " + std::to_string(l));
        activation_backward(g, lc.output, l + 1 < n_layers ? Activation::kRelu : spec_.output_activation);

        if (L.batch_norm) {
            grads.params[slot[l] + 2] += (g.array() * lc.xhat.array()).colwise().sum().matrix();
            grads.params[slot[l] + 3] += g.colwise().sum();
            // g becomes d(xhat), then d(affine output) segment by segment.
            g.array().rowwise() *= L.gamma.row(0).array();
            const auto &segs = cache.segments;
            for (std::size_t s = 0; s + 1 < segs.size(); ++s) {
                const int r0 = segs[s], rows = segs[s + 1] - segs[s];
                if (rows <= 0)
                    continue;
                auto dx = g.middleRows(r0, rows);
                auto xh = lc.xhat.middleRows(r0, rows);
                const Eigen::RowVectorXd sum_dx = dx.colwise().sum();
                const Eigen::RowVectorXd sum_dx_xh = (dx.array() * xh.array()).colwise().sum();
                const Eigen::RowVectorXd scale =
                    lc.inv_std.row(static_cast<Eigen::Index>(s)).array() / static_cast<double>(rows);
                dx.array() = ((static_cast<double>(rows) * dx.array()).rowwise() - sum_dx.array() -
                              xh.array().rowwise() * sum_dx_xh.array())
                                 .rowwise() *
                             scale.array();
            }
        }

        const Eigen::MatrixXd &input = l == 0 ? cache.input : cache.layers[l - 1].output;
        grads.params[slot[l]].noalias() += input.transpose() * g;
        grads.params[slot[l] + 1] += g.colwise().sum();
        Eigen::MatrixXd next(g.rows(), L.weight.rows());
        next.noalias() = g * L.weight.transpose();
        g = std::move(next);
    }
    return g;
}

void Mlp::update_running_stats(const MlpCache &cache)
{
    if (!cache.valid)
        throw ContractError("mlp: running statistics need a training-mode cache");
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        auto &L = layers_[l];
        if (!L.batch_norm)
            continue;
        const auto &lc = cache.layers[l];
        Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(L.weight.cols());
        Eigen::RowVectorXd var = Eigen::RowVectorXd::Zero(L.weight.cols());
        int used = 0;
        for (std::size_t s = 0; s + 1 < cache.segments.size(); ++s) {
            const int rows = cache.segments[s + 1] - cache.segments[s];
            if (rows <= 0)
                continue;
            const double unbias = rows > 1 ? static_cast<double>(rows) / (rows - 1) : 1.0;
            mean += lc.seg_mean.row(static_cast<Eigen::Index>(s));
            var += unbias * lc.seg_var.row(static_cast<Eigen::Index>(s));
            ++used;
        }
        if (used == 0)
            continue;
        mean /= used;
        var /= used;
        L.running_mean = (1.0 - kBnMomentum) * L.running_mean + kBnMomentum * mean;
        L.running_var = (1.0 - kBnMomentum) * L.running_var + kBnMomentum * var;
    }
}

std::vector<Eigen::MatrixXd *> Mlp::parameters()
{
    std::vector<Eigen::MatrixXd *> out;
    for (auto &L : layers_) {
        out.push_back(&L.weight);
        out.push_back(&L.bias);
        if (L.batch_norm) {
            out.push_back(&L.gamma);
            out.push_back(&L.beta);
        }
    }
    return out;
}

std::vector<const Eigen::MatrixXd *> Mlp::parameters() const
{
    std::vector<const Eigen::MatrixXd *> out;
    for (const auto &L : layers_) {
        out.push_back(&L.weight);
        out.push_back(&L.bias);
        if (L.batch_norm) {
            out.push_back(&L.gamma);
            out.push_back(&L.beta);
        }
    }
    return out;
}

MlpGradients Mlp::zero_gradients() const
{
    MlpGradients g;
    for (const auto *p : parameters())
        g.params.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
    return g;
}

std::size_t Mlp::parameter_count() const
{
    std::size_t n = 0;
    for (const auto *p : parameters())
        n += static_cast<std::size_t>(p->size());
    return n;
}

} // namespace airgnn
