#pragma once

#include <Eigen/Dense>
#include <variant>

#include "ramdiv/random.hpp"

namespace ramdiv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
/// One sample per row, contiguous rows.
using Samples = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace detail {

/// Shared by DiagonalGaussian and FiniteMixture so both produce bit-identical values.
inline double diag_log_density(const double* z, const double* mu, const double* inv_var, double log_norm,
                               Eigen::Index d) {
    double quad = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        const double r = z[k] - mu[k];
        quad += r * r * inv_var[k];
    }
    return log_norm - 0.5 * quad;
}

}  // namespace detail

/// N(mean, diag(variances)).
class DiagonalGaussian {
public:
    DiagonalGaussian(Vector mean, Vector variances);

    Eigen::Index dim() const { return mean_.size(); }
    const Vector& mean() const { return mean_; }
    const Vector& variances() const { return variances_; }
    const Vector& inv_variances() const { return inv_variances_; }
    double log_norm() const { return log_norm_; }

    double log_density(const Eigen::Ref<const Vector>& z) const;
    /// No shape check; `z` must point at dim() contiguous doubles.
    double log_density_raw(const double* z) const;

    Samples sample(RandomStream& rng, Eigen::Index count) const;
    /// Writes one draw into `out` (dim() doubles).
    void sample_into(RandomStream& rng, double* out) const;

private:
    Vector mean_;
    Vector variances_;
    Vector inv_variances_;
    double log_norm_;
};

/// N(mean, covariance) with the Cholesky factor computed once at construction.
class FullGaussian {
public:
    /// Throws NumericalError if `covariance` is not symmetric positive-definite.
    FullGaussian(Vector mean, Matrix covariance);

    Eigen::Index dim() const { return mean_.size(); }
    const Vector& mean() const { return mean_; }
    const Matrix& covariance() const { return covariance_; }
    /// Lower-triangular L with L * L^T == covariance.
    const Matrix& cholesky() const { return chol_; }
    double log_det() const { return log_det_; }

    double log_density(const Eigen::Ref<const Vector>& z) const;
    Samples sample(RandomStream& rng, Eigen::Index count) const;

private:
    Vector mean_;
    Matrix covariance_;
    Matrix chol_;
    double log_det_;
};

using Gaussian = std::variant<DiagonalGaussian, FullGaussian>;

Eigen::Index dim(const Gaussian& g);
Vector mean_of(const Gaussian& g);
Matrix covariance_of(const Gaussian& g);
double log_density(const Gaussian& g, const Eigen::Ref<const Vector>& z);
Samples sample(const Gaussian& g, RandomStream& rng, Eigen::Index count);
FullGaussian to_full(const Gaussian& g);

/// Z | X = x  ~  N(A x + b, noise_var * I).
struct LinearGaussianModel {
    Matrix A;
    Vector b;
    double noise_var;

    /// Validates shapes and noise_var > 0.
    LinearGaussianModel(Matrix A, Vector b, double noise_var);

    Eigen::Index latent_dim() const { return A.rows(); }
    Eigen::Index input_dim() const { return A.cols(); }
};

DiagonalGaussian conditional(const LinearGaussianModel& model, const Eigen::Ref<const Vector>& x);

/// Law of Z when X ~ N(0, I): N(b, A A^T + noise_var I).
FullGaussian marginal(const LinearGaussianModel& model);

/// Draws `count` inputs X ~ N(0, I) of the model's input dimension.
Samples sample_inputs(const LinearGaussianModel& model, RandomStream& rng, Eigen::Index count);

}  // namespace ramdiv
