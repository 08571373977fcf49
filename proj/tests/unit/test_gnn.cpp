// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "airgnn/error.hpp"
#include "airgnn/gnn.hpp"
#include "gradcheck.hpp"
#include "oracles.hpp"

using namespace airgnn;
namespace t = airgnn::testing;

namespace {

// One layer, node and edge width 1: message = a h_u + b e, update = c h_v + d agg.
GnnModel linear_model(double a, double b, double c, double d)
{
    Mlp msg({{2, 1}, Activation::kIdentity, false});
    Mlp upd({{2, 1}, Activation::kIdentity, false});
    msg.layers()[0].weight << a, b;
    upd.layers()[0].weight << c, d;
    return GnnModel(1, 1, {{std::move(msg), std::move(upd)}});
}

GnnModel trained_like(std::uint64_t seed)
{
    GnnModel m = GnnModel::power_control(seed);
    // Non-trivial running statistics so eval mode is exercised.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    for (int k = 1; k <= m.layer_count(); ++k)
        for (Mlp *mlp : {&m.layer(k).message, &m.layer(k).update})
            for (auto &L : mlp->layers())
                if (L.batch_norm)
                    for (Eigen::Index j = 0; j < L.running_var.size(); ++j) {
                        L.running_var(j) = u(rng);
                        L.running_mean(j) = u(rng) - 1.0;
                    }
    return m;
}

} // namespace

TEST(NormalizeMessage, Examples)
{
    EXPECT_TRUE(normalize_message(Eigen::Vector2d(3, 4)).isApprox(Eigen::Vector2d(0.6, 0.8), 1e-15));
    EXPECT_EQ(normalize_message(Eigen::Vector3d::Zero()), Eigen::Vector3d::Zero());
    EXPECT_EQ(normalize_message(Eigen::VectorXd::Constant(1, 5.0))(0), 1.0);
    EXPECT_THROW(normalize_message(Eigen::Vector2d(std::numeric_limits<double>::quiet_NaN(), 1.0)), NumericError);
}

TEST(NormalizeMessage, NormIsZeroOrOne)
{
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> scale(-20.0, 5.0);
    for (int trial = 0; trial < 1000; ++trial) {
        Eigen::VectorXd v(1 + trial % 7);
        for (Eigen::Index i = 0; i < v.size(); ++i)
            v(i) = n(rng) * std::pow(10.0, scale(rng));
        const double norm = normalize_message(v).norm();
        EXPECT_TRUE(norm == 0.0 || std::abs(norm - 1.0) <= 1e-12) << norm;
    }
}

TEST(GnnModel, PowerControlShapes)
{
    const GnnModel m = GnnModel::power_control(1);
    EXPECT_EQ(m.layer_count(), 3);
    EXPECT_EQ(m.hidden_dim(0), 2);
    EXPECT_EQ(m.hidden_dim(1), 32);
    EXPECT_EQ(m.hidden_dim(3), 1);
    EXPECT_EQ(m.message_dim(1), 32);
    EXPECT_EQ(m.layer(3).update.spec().output_activation, Activation::kSigmoid);
    EXPECT_EQ(m.layer(1).message.spec().widths, (std::vector<int>{4, 16, 32}));
    EXPECT_EQ(m.layer(3).update.spec().widths, (std::vector<int>{64, 64, 16, 1}));
}

TEST(GnnModel, RejectsBrokenChaining)
{
    Mlp msg({{3, 4}, Activation::kRelu, false});
    Mlp upd({{5, 2}, Activation::kRelu, false});
    EXPECT_THROW(GnnModel(2, 2, {{msg, upd}}), DimensionError);
}

TEST(GnnForward, IsolatedNodeAggregatesZero)
{
    const GnnModel m = linear_model(2.0, 3.0, 0.5, 7.0);
    const NetworkGraph g = make_graph(Eigen::MatrixXd::Constant(1, 1, 4.0), Eigen::MatrixXd(0, 1), {}, {});
    EXPECT_EQ(gnn_forward_clean(m, g)(0, 0), 2.0);
}

TEST(GnnForward, TwoNodeHandEvaluation)
{
    const GnnModel m = linear_model(2.0, 3.0, 0.5, 7.0);
    Eigen::MatrixXd x(2, 1), e(2, 1);
    x << 1.0, -2.0;
    e << 0.25, 4.0; // edge 0: 0 -> 1, edge 1: 1 -> 0
    const NetworkGraph g = make_graph(x, e, {0, 1}, {1, 0});
    // node 0 receives 2*(-2) + 3*4 = 8 -> 0.5*1 + 7*8 = 56.5
    // node 1 receives 2*1 + 3*0.25 = 2.75 -> 0.5*(-2) + 7*2.75 = 18.25
    const Eigen::MatrixXd y = gnn_forward_clean(m, g);
    EXPECT_DOUBLE_EQ(y(0, 0), 56.5);
    EXPECT_DOUBLE_EQ(y(1, 0), 18.25);
}

TEST(GnnForward, PermutationEquivariance)
{
    const GnnModel m = trained_like(3);
    const NetworkGraph g = layout_to_graph(generate_layout(7, 30.0, 1.0, 12));
    std::vector<int> perm(7);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(4);
    std::shuffle(perm.begin(), perm.end(), rng);

    // Relabel nodes, keep the edge list order, so per-node summation order is unchanged.
    Eigen::MatrixXd x(7, g.node_dim());
    for (int v = 0; v < 7; ++v)
        x.row(perm[v]) = g.node_features.row(v);
    std::vector<int> src, dst;
    for (int e = 0; e < g.edge_count(); ++e) {
        src.push_back(perm[g.edge_src[e]]);
        dst.push_back(perm[g.edge_dst[e]]);
    }
    const NetworkGraph gp = make_graph(x, g.edge_features, src, dst);
    const Eigen::MatrixXd y = gnn_forward_clean(m, g), yp = gnn_forward_clean(m, gp);
    for (int v = 0; v < 7; ++v)
        EXPECT_EQ(yp(perm[v], 0), y(v, 0));
}

TEST(GnnForward, LayoutPermutationEquivariance)
{
    const GnnModel m = trained_like(5);
    const Layout l = generate_layout(6, 30.0, 1.0, 8);
    const std::vector<int> perm = {3, 0, 5, 1, 4, 2};
    std::vector<ComplexGain> gains(36);
    for (int j = 0; j < 6; ++j)
        for (int i = 0; i < 6; ++i)
            gains[perm[j] * 6 + perm[i]] = l.gain(j, i);
    const Layout lp(6, gains, std::vector<double>(6, 1.0), l.p_max_mw());
    const Eigen::MatrixXd y = gnn_forward_clean(m, layout_to_graph(l));
    const Eigen::MatrixXd yp = gnn_forward_clean(m, layout_to_graph(lp));
    for (int v = 0; v < 6; ++v)
        EXPECT_NEAR(yp(perm[v], 0), y(v, 0), 1e-12);
}

TEST(GnnForward, EvalModeIsBatchIndependent)
{
    const GnnModel m = trained_like(6);
    const NetworkGraph a = layout_to_graph(generate_layout(4, 30.0, 1.0, 1));
    const NetworkGraph b = layout_to_graph(generate_layout(5, 30.0, 1.0, 2));
    const std::vector<const NetworkGraph *> members = {&a, &b};
    const Eigen::MatrixXd both = gnn_forward(m, make_batch(members), {});
    EXPECT_TRUE(both.topRows(4).isApprox(gnn_forward_clean(m, a), 1e-14));
    EXPECT_TRUE(both.bottomRows(5).isApprox(gnn_forward_clean(m, b), 1e-14));
}

TEST(GnnForward, NoiseShapeIsChecked)
{
    const GnnModel m = GnnModel::power_control(1);
    const GraphBatch b = make_batch(layout_to_graph(generate_layout(3, 30.0, 1.0, 1)));
    ForwardOptions opt;
    opt.aggregate_noise = {Eigen::MatrixXd::Zero(2, 32), {}, {}};
    EXPECT_THROW(gnn_forward(m, b, opt), DimensionError);
}

TEST(GnnBackward, MatchesFiniteDifferencesWithNormalizationAndNoise)
{
    GnnModel m = GnnModel::power_control(7);
    const NetworkGraph a = layout_to_graph(generate_layout(4, 30.0, 1.0, 21));
    const NetworkGraph b = layout_to_graph(generate_layout(5, 30.0, 1.0, 22));
    const std::vector<const NetworkGraph *> members = {&a, &b};
    const GraphBatch batch = make_batch(members);

    std::mt19937_64 rng(8);
    std::normal_distribution<double> n(0.0, 1.0);
    ForwardOptions opt;
    opt.mode = Mode::kTrain;
    opt.normalize_first_layer = true;
    for (int k = 1; k <= 3; ++k) {
        Eigen::MatrixXd z(9, m.message_dim(k));
        for (Eigen::Index i = 0; i < z.size(); ++i)
            z.data()[i] = 0.3 * n(rng);
        opt.aggregate_noise.push_back(z);
    }
    Eigen::MatrixXd w(9, 1);
    for (int i = 0; i < 9; ++i)
        w(i, 0) = n(rng);

    GnnTape tape;
    gnn_forward(m, batch, opt, &tape);
    GnnGradients grads;
    gnn_backward(m, batch, tape, w, grads);
    const auto flat = static_cast<const GnnGradients &>(grads).flat();
    auto params = m.parameters();
    ASSERT_EQ(flat.size(), params.size());

    auto loss = [&] { return (gnn_forward(m, batch, opt).array() * w.array()).sum(); };
    const t::ProbeReport r = t::probe_gradients(params, flat, loss, t::bias_before_batch_norm(m), 100, rng);
    EXPECT_EQ(r.failures, 0) << r.first_failure << " (worst " << r.worst << ")";
}

TEST(GnnBackward, RequiresTape)
{
    const GnnModel m = GnnModel::power_control(1);
    const GraphBatch b = make_batch(layout_to_graph(generate_layout(3, 30.0, 1.0, 1)));
    GnnGradients g;
    EXPECT_THROW(gnn_backward(m, b, GnnTape{}, Eigen::MatrixXd::Zero(3, 1), g), ContractError);
    GnnTape tape;
    EXPECT_THROW(gnn_forward(m, b, {}, &tape), ContractError);
}

TEST(ModelFile, RoundTripIsExact)
{
    const GnnModel m = trained_like(9);
    const auto path = std::filesystem::temp_directory_path() / "airgnn_unit_model.json";
    save_model(m, path);
    const GnnModel back = load_model(path);
    ASSERT_EQ(back.parameter_count(), m.parameter_count());
    const auto p0 = m.parameters(), p1 = back.parameters();
    for (std::size_t i = 0; i < p0.size(); ++i)
        EXPECT_EQ(*p0[i], *p1[i]);
    const NetworkGraph g = layout_to_graph(generate_layout(5, 30.0, 1.0, 3));
    EXPECT_EQ(gnn_forward_clean(m, g), gnn_forward_clean(back, g));
}

TEST(ModelFile, RejectsWrongFormat)
{
    const auto path = std::filesystem::temp_directory_path() / "airgnn_unit_badmodel.json";
    std::ofstream(path) << R"({"format": "something-else"})";
    EXPECT_THROW(load_model(path), std::runtime_error);
}
