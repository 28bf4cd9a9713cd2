#include "ramdiv/synthetic.hpp"

#include "ramdiv/errors.hpp"

namespace ramdiv {

SyntheticFamily make_family(int d, std::uint64_t seed, double eps) {
    if (d < 1) throw DomainError("make_family: d must be >= 1");
    if (!(eps > 0.0)) throw DomainError("make_family: eps must be positive");
    constexpr int k = SyntheticFamily::kInputDim;
    SyntheticFamily fam;
    fam.d = d;
    fam.eps = eps;
    fam.seed = seed;

    RandomStream rng(derive_seed(seed, "synthetic-family", {static_cast<std::uint64_t>(d)}));
    fam.A0.resize(d, k);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < k; ++j) fam.A0(i, j) = rng.normal();
    fam.A0 /= fam.A0.norm();

    fam.v.resize(d);
    for (int i = 0; i < d; ++i) fam.v[i] = rng.normal();
    fam.v /= fam.v.norm();

    fam.A1 = Matrix::Zero(d, k);
    for (int i = 0; i < std::min(d, k); ++i) fam.A1(i, i) = 1.0;
    return fam;
}

LinearGaussianModel model_at(const SyntheticFamily& fam, double lambda) {
    return LinearGaussianModel(0.5 * fam.A1 + lambda * fam.A0, lambda * fam.v, fam.eps * fam.eps);
}

DiagonalGaussian standard_prior(Eigen::Index d) { return DiagonalGaussian(Vector::Zero(d), Vector::Ones(d)); }

}  // namespace ramdiv
