// SPDX-License-Identifier: Apache-2.0
#include "airgnn/rng.hpp"

namespace airgnn {

std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> coords) noexcept
{
    std::uint64_t h = mix_seed(root);
    for (auto c : coords)
        h = mix_seed(h ^ mix_seed(c + 0x632be59bd9b4e019ULL));
    return h;
}

std::uint64_t substream_seed(std::uint64_t root, std::uint64_t receiver, std::uint64_t iteration) noexcept
{
    return derive_seed(root, {0x5ULL, receiver, iteration});
}

void GaussianStream::fill(Eigen::Ref<Eigen::MatrixXd> out, double stddev)
{
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        for (Eigen::Index j = 0; j < out.cols(); ++j)
            out(i, j) = stddev * normal_(engine_);
}

Eigen::RowVectorXd GaussianStream::row(Eigen::Index dim, double stddev)
{
    Eigen::RowVectorXd r(dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        r(j) = stddev * normal_(engine_);
    return r;
}

} // namespace airgnn
