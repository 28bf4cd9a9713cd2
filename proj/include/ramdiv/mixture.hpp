#pragma once

#include <vector>

#include "ramdiv/gaussian.hpp"

namespace ramdiv {

/// Equal-weight mixture (1/N) sum_i Q_i of diagonal Gaussians.
///
/// Components keep their insertion order; density evaluation walks them in a
/// canonical order (sorted by mean, then variances) so that the value of
/// log_density does not depend on how the components were listed.
class FiniteMixture {
public:
    explicit FiniteMixture(std::vector<DiagonalGaussian> components);

    Eigen::Index dim() const { return dim_; }
    std::size_t size() const { return components_.size(); }
    const std::vector<DiagonalGaussian>& components() const { return components_; }
    const DiagonalGaussian& component(std::size_t i) const { return components_[i]; }

    double log_density(const Eigen::Ref<const Vector>& z) const;
    /// Unchecked; `scratch` is resized as needed and reused across calls.
    double log_density_raw(const double* z, std::vector<double>& scratch) const;

    /// Mixture of the coordinate-`k` slices of every component (a 1-D mixture).
    FiniteMixture marginal(Eigen::Index k) const;

private:
    std::vector<DiagonalGaussian> components_;
    Eigen::Index dim_;
    // Packed copies in canonical order.
    Samples means_;
    Samples inv_vars_;
    std::vector<double> log_norms_;
    double log_count_;
};

/// Component i is conditional(model, xs.row(i)).
FiniteMixture build_mixture(const LinearGaussianModel& model, const Samples& xs);

double mixture_log_density(const FiniteMixture& m, const Eigen::Ref<const Vector>& z);

/// Per row: a uniform component index, then a draw from that component.
Samples sample_mixture(const FiniteMixture& m, RandomStream& rng, Eigen::Index count);

/// `m_sub` components chosen uniformly without replacement, in original order.
FiniteMixture subsample_mixture(const FiniteMixture& m, std::size_t m_sub, RandomStream& rng);

}  // namespace ramdiv
