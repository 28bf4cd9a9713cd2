#pragma once

#include <cstdint>

#include "ramdiv/gaussian.hpp"

namespace ramdiv {

/// The linear-Gaussian test family
///   Z | X = x ~ N((A1/2 + lambda A0) x + lambda v, eps^2 I),  X ~ N(0, I_20),
/// where A1 has ones on its main diagonal, A0 is Gaussian noise scaled to unit
/// Frobenius norm and v is a uniform unit vector. The prior is N(0, I_d).
struct SyntheticFamily {
    int d = 1;
    Matrix A0;
    Matrix A1;
    Vector v;
    double eps = 0.5;
    std::uint64_t seed = 0;

    static constexpr int kInputDim = 20;
};

/// A0 and v are drawn once from a stream derived from (seed, d).
SyntheticFamily make_family(int d, std::uint64_t seed, double eps = 0.5);

LinearGaussianModel model_at(const SyntheticFamily& fam, double lambda);

/// N(0, I_d).
DiagonalGaussian standard_prior(Eigen::Index d);

}  // namespace ramdiv
