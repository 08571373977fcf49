// SPDX-License-Identifier: Apache-2.0
//
// Random-probe comparison of analytic gradients against central differences.

#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "airgnn/gnn.hpp"
#include "airgnn/mlp.hpp"
#include "oracles.hpp"

namespace airgnn::testing {

/// Flags the bias slots that feed a batch-norm layer. Mean subtraction cancels
/// them, so their gradient is identically zero and a difference quotient only
/// measures rounding noise.
inline std::vector<bool> bias_before_batch_norm(const Mlp &mlp)
{
    std::vector<bool> out;
    for (const auto &L : mlp.layers()) {
        out.push_back(false);
        out.push_back(L.batch_norm);
        if (L.batch_norm) {
            out.push_back(false);
            out.push_back(false);
        }
    }
    return out;
}

inline std::vector<bool> bias_before_batch_norm(const GnnModel &model)
{
    std::vector<bool> out;
    for (int k = 1; k <= model.layer_count(); ++k)
        for (const Mlp *mlp : {&model.layer(k).message, &model.layer(k).update}) {
            const auto flags = bias_before_batch_norm(*mlp);
            out.insert(out.end(), flags.begin(), flags.end());
        }
    return out;
}

inline std::string format(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

struct ProbeReport {
    int probes = 0;
    int failures = 0;
    double worst = 0.0;
    std::string first_failure;
};

/// Probes random entries. Flagged slots must have an analytic gradient below
/// 1e-12 in magnitude; all others must match a central difference with step h
/// to `tol` relative error, where magnitudes below `floor` count as `floor`
/// (the difference quotient carries about 1e-16 |loss| / h of rounding noise).
/// Steps h/10 and h/100 are tried when h straddles a kink.
inline ProbeReport probe_gradients(const std::vector<Eigen::MatrixXd *> &params,
                                   const std::vector<const Eigen::MatrixXd *> &grads, const std::function<double()> &loss,
                                   const std::vector<bool> &structural_zero, int probes, std::mt19937_64 &rng,
                                   double h = 1e-5, double tol = 1e-4, double floor = 1e-5)
{
    ProbeReport rep;
    std::uniform_int_distribution<std::size_t> pick(0, params.size() - 1);
    for (int i = 0; i < probes; ++i) {
        const std::size_t p = pick(rng);
        const Eigen::Index e = std::uniform_int_distribution<Eigen::Index>(0, params[p]->size() - 1)(rng);
        const double analytic = grads[p]->data()[e];
        double err;
        if (p < structural_zero.size() && structural_zero[p]) {
            err = std::abs(analytic) <= 1e-12 ? 0.0 : std::abs(analytic);
        } else {
            // A ReLU kink inside [x - h, x + h] spoils the quotient; retry with
            // smaller steps before calling it a mismatch.
            double numeric = 0.0;
            err = std::numeric_limits<double>::infinity();
            for (double step : {h, h / 10, h / 100}) {
                numeric = central_difference(loss, params[p]->data() + e, step);
                err = std::min(err, relative_error(analytic, numeric, floor));
                if (err < tol)
                    break;
            }
            if (err >= tol && rep.first_failure.empty())
                rep.first_failure = "slot " + std::to_string(p) + " entry " + std::to_string(e) + ": analytic " +
                                    format(analytic) + ", numeric " + format(numeric);
        }
        ++rep.probes;
        rep.worst = std::max(rep.worst, err);
        rep.failures += err >= tol ? 1 : 0;
    }
    return rep;
}

} // namespace airgnn::testing
