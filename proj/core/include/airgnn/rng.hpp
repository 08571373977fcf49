// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Core>

namespace airgnn {

/// SplitMix64 finalizer; used to derive independent seeds from a root seed.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// Deterministically combine a root seed with a list of stream coordinates.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> coords) noexcept;

/// Seed of the noise substream for one (receiver, iteration) pair of one inference.
std::uint64_t substream_seed(std::uint64_t root, std::uint64_t receiver, std::uint64_t iteration) noexcept;

/// Stream of Gaussian draws backed by one engine and one distribution object.
///
/// Every draw goes through the same std::normal_distribution instance, so two
/// streams with the same seed produce the same values for the same sequence of
/// requests regardless of how those requests are grouped.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double standard() { return normal_(engine_); }

    double operator()(double stddev) { return stddev * normal_(engine_); }

    /// Fill `out` with i.i.d. N(0, stddev^2) entries, row-major order.
    void fill(Eigen::Ref<Eigen::MatrixXd> out, double stddev);

    Eigen::RowVectorXd row(Eigen::Index dim, double stddev);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace airgnn
