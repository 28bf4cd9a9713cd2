#pragma once

#include "ramdiv/divergence.hpp"
#include "ramdiv/gaussian.hpp"

namespace ramdiv {

/// Gaussian KDE with a shared full kernel covariance
/// (bandwidth_factor^2 times the sample covariance, Scott's factor n^(-1/(d+4))).
class KdeModel {
public:
    const Samples& points() const { return points_; }
    double bandwidth_factor() const { return factor_; }
    const Matrix& kernel_cov() const { return kernel_cov_; }
    Eigen::Index dim() const { return points_.cols(); }

    double log_density(const Eigen::Ref<const Vector>& z) const;

private:
    friend KdeModel kde_fit(const Samples& samples);
    KdeModel() = default;

    Samples points_;
    double factor_ = 0.0;
    Matrix kernel_cov_;
    Matrix chol_;
    Samples whitened_;  // L^-1 x_i per row
    double log_norm_ = 0.0;
};

/// Throws NumericalError when fewer than d+1 samples are given or the sample
/// covariance is singular.
KdeModel kde_fit(const Samples& samples);

double kde_log_density(const KdeModel& k, const Eigen::Ref<const Vector>& z);

/// Plug-in divergence: fit KDEs q^ and p^, then average f0(r)/r with
/// r = q^(z)/p^(z) over `eval_samples_from_q`, which estimates
/// \int f0(q^/p^) p^ when the evaluation points come from q. The result can
/// be negative. Throws NonFiniteError on overflow.
double plugin_estimate(const DivergenceSpec& spec, const Samples& q_samples, const Samples& p_samples,
                       const Samples& eval_samples_from_q);

}  // namespace ramdiv
