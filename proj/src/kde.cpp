#include "ramdiv/kde.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "ramdiv/errors.hpp"
#include "ramdiv/numerics.hpp"

namespace ramdiv {

KdeModel kde_fit(const Samples& samples) {
    const Eigen::Index n = samples.rows();
    const Eigen::Index d = samples.cols();
    if (d < 1) throw DimensionError("kde_fit: samples have no columns");
    if (n < d + 1) {
        throw NumericalError("kde_fit: " + std::to_string(n) + " samples cannot give a nonsingular " +
                             std::to_string(d) + "-dimensional covariance");
    }
    KdeModel k;
    k.points_ = samples;
    k.factor_ = std::pow(static_cast<double>(n), -1.0 / static_cast<double>(d + 4));

    const Eigen::RowVectorXd centre = samples.colwise().mean();
    const Matrix centred = samples.rowwise() - centre;
    Matrix cov = centred.transpose() * centred / static_cast<double>(n - 1);
    k.kernel_cov_ = k.factor_ * k.factor_ * cov;

    Eigen::LLT<Matrix> llt(k.kernel_cov_);
    if (llt.info() != Eigen::Success || !(k.kernel_cov_.diagonal().minCoeff() > 0.0)) {
        throw NumericalError("kde_fit: sample covariance is singular");
    }
    k.chol_ = llt.matrixL();
    k.whitened_ = k.chol_.triangularView<Eigen::Lower>().solve(samples.transpose()).transpose();
    const double log_det = 2.0 * k.chol_.diagonal().array().log().sum();
    k.log_norm_ = -0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) + log_det) -
                  std::log(static_cast<double>(n));
    return k;
}

double KdeModel::log_density(const Eigen::Ref<const Vector>& z) const {
    if (z.size() != dim()) throw DimensionError("kde_log_density: dimension mismatch");
    const Vector y = chol_.triangularView<Eigen::Lower>().solve(z);
    std::vector<double> terms(static_cast<std::size_t>(whitened_.rows()));
    for (Eigen::Index i = 0; i < whitened_.rows(); ++i) {
        terms[static_cast<std::size_t>(i)] = -0.5 * (whitened_.row(i).transpose() - y).squaredNorm();
    }
    return log_norm_ + log_sum_exp(terms);
}

double kde_log_density(const KdeModel& k, const Eigen::Ref<const Vector>& z) { return k.log_density(z); }

double plugin_estimate(const DivergenceSpec& spec, const Samples& q_samples, const Samples& p_samples,
                       const Samples& eval_samples_from_q) {
    if (eval_samples_from_q.rows() < 1) throw DomainError("plugin_estimate: need at least one evaluation point");
    if (q_samples.cols() != p_samples.cols() || q_samples.cols() != eval_samples_from_q.cols()) {
        throw DimensionError("plugin_estimate: sample dimensions differ");
    }
    const KdeModel q_hat = kde_fit(q_samples);
    const KdeModel p_hat = kde_fit(p_samples);
    double sum = 0.0;
    for (Eigen::Index m = 0; m < eval_samples_from_q.rows(); ++m) {
        const Vector z = eval_samples_from_q.row(m).transpose();
        const double l = q_hat.log_density(z) - p_hat.log_density(z);
        if (!(l < std::numeric_limits<double>::infinity())) {
            throw NonFiniteError("plugin_estimate: density ratio overflowed");
        }
        sum += f0_over_ratio_at_log_ratio(spec, l);
    }
    const double value = sum / static_cast<double>(eval_samples_from_q.rows());
    if (!std::isfinite(value)) throw NonFiniteError("plugin_estimate: estimate overflowed");
    return value;
}

}  // namespace ramdiv
