#include "ramdiv/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ramdiv/errors.hpp"

namespace ramdiv {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void require_dim(Eigen::Index expected, Eigen::Index got, const char* what) {
    if (expected != got) {
        throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                             ", got " + std::to_string(got));
    }
}

}  // namespace

DiagonalGaussian::DiagonalGaussian(Vector mean, Vector variances)
    : mean_(std::move(mean)), variances_(std::move(variances)) {
    if (mean_.size() < 1) throw DimensionError("DiagonalGaussian: dimension must be >= 1");
    require_dim(mean_.size(), variances_.size(), "DiagonalGaussian variances");
    for (Eigen::Index i = 0; i < variances_.size(); ++i) {
        if (!(variances_[i] > 0.0) || !std::isfinite(variances_[i])) {
            throw DomainError("DiagonalGaussian: variances must be positive and finite");
        }
    }
    inv_variances_ = variances_.cwiseInverse();
    log_norm_ = -0.5 * (static_cast<double>(dim()) * kLog2Pi + variances_.array().log().sum());
}

double DiagonalGaussian::log_density(const Eigen::Ref<const Vector>& z) const {
    require_dim(dim(), z.size(), "DiagonalGaussian::log_density");
    if (z.innerStride() == 1) return log_density_raw(z.data());
    Vector copy = z;
    return log_density_raw(copy.data());
}

double DiagonalGaussian::log_density_raw(const double* z) const {
    return detail::diag_log_density(z, mean_.data(), inv_variances_.data(), log_norm_, dim());
}

void DiagonalGaussian::sample_into(RandomStream& rng, double* out) const {
    for (Eigen::Index k = 0; k < dim(); ++k) {
        out[k] = mean_[k] + std::sqrt(variances_[k]) * rng.normal();
    }
}

Samples DiagonalGaussian::sample(RandomStream& rng, Eigen::Index count) const {
    if (count < 1) throw DomainError("sample: count must be >= 1");
    Samples out(count, dim());
    for (Eigen::Index i = 0; i < count; ++i) sample_into(rng, out.row(i).data());
    return out;
}

FullGaussian::FullGaussian(Vector mean, Matrix covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
    if (mean_.size() < 1) throw DimensionError("FullGaussian: dimension must be >= 1");
    if (covariance_.rows() != mean_.size() || covariance_.cols() != mean_.size()) {
        throw DimensionError("FullGaussian: covariance must be d x d with d = mean size");
    }
    const double scale = covariance_.cwiseAbs().maxCoeff();
    if (!std::isfinite(scale) || (covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw NumericalError("FullGaussian: covariance is not symmetric");
    }
    Eigen::LLT<Matrix> llt(covariance_);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("FullGaussian: covariance is not positive definite");
    }
    chol_ = llt.matrixL();
    log_det_ = 2.0 * chol_.diagonal().array().log().sum();
}

double FullGaussian::log_density(const Eigen::Ref<const Vector>& z) const {
    require_dim(dim(), z.size(), "FullGaussian::log_density");
    const Vector white = chol_.triangularView<Eigen::Lower>().solve(z - mean_);
    return -0.5 * (static_cast<double>(dim()) * kLog2Pi + log_det_ + white.squaredNorm());
}

Samples FullGaussian::sample(RandomStream& rng, Eigen::Index count) const {
    if (count < 1) throw DomainError("sample: count must be >= 1");
    Samples out(count, dim());
    Vector u(dim());
    for (Eigen::Index i = 0; i < count; ++i) {
        for (Eigen::Index k = 0; k < dim(); ++k) u[k] = rng.normal();
        out.row(i) = (mean_ + chol_.triangularView<Eigen::Lower>() * u).transpose();
    }
    return out;
}

Eigen::Index dim(const Gaussian& g) {
    return std::visit([](const auto& d) { return d.dim(); }, g);
}

Vector mean_of(const Gaussian& g) {
    return std::visit([](const auto& d) -> Vector { return d.mean(); }, g);
}

Matrix covariance_of(const Gaussian& g) {
    if (const auto* diag = std::get_if<DiagonalGaussian>(&g)) {
        return diag->variances().asDiagonal();
    }
    return std::get<FullGaussian>(g).covariance();
}

double log_density(const Gaussian& g, const Eigen::Ref<const Vector>& z) {
    return std::visit([&](const auto& d) { return d.log_density(z); }, g);
}

Samples sample(const Gaussian& g, RandomStream& rng, Eigen::Index count) {
    return std::visit([&](const auto& d) { return d.sample(rng, count); }, g);
}

FullGaussian to_full(const Gaussian& g) {
    if (const auto* full = std::get_if<FullGaussian>(&g)) return *full;
    return FullGaussian(mean_of(g), covariance_of(g));
}

LinearGaussianModel::LinearGaussianModel(Matrix A_, Vector b_, double noise_var_)
    : A(std::move(A_)), b(std::move(b_)), noise_var(noise_var_) {
    if (A.rows() < 1 || A.cols() < 1) throw DimensionError("LinearGaussianModel: empty A");
    require_dim(A.rows(), b.size(), "LinearGaussianModel offset");
    if (!(noise_var > 0.0) || !std::isfinite(noise_var)) {
        throw DomainError("LinearGaussianModel: noise_var must be positive");
    }
}

DiagonalGaussian conditional(const LinearGaussianModel& model, const Eigen::Ref<const Vector>& x) {
    require_dim(model.input_dim(), x.size(), "conditional");
    return DiagonalGaussian(model.A * x + model.b, Vector::Constant(model.latent_dim(), model.noise_var));
}

FullGaussian marginal(const LinearGaussianModel& model) {
    Matrix cov = model.A * model.A.transpose();
    cov.diagonal().array() += model.noise_var;
    // A A^T can come out asymmetric in the last bit.
    cov = 0.5 * (cov + cov.transpose()).eval();
    return FullGaussian(model.b, std::move(cov));
}

Samples sample_inputs(const LinearGaussianModel& model, RandomStream& rng, Eigen::Index count) {
    Samples xs(count, model.input_dim());
    for (Eigen::Index i = 0; i < count; ++i)
        for (Eigen::Index k = 0; k < model.input_dim(); ++k) xs(i, k) = rng.normal();
    return xs;
}

}  // namespace ramdiv
