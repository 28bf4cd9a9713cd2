#include "ramdiv/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ramdiv/errors.hpp"
#include "ramdiv/numerics.hpp"

namespace ramdiv {
namespace {

bool canonical_less(const DiagonalGaussian& a, const DiagonalGaussian& b) {
    for (Eigen::Index k = 0; k < a.dim(); ++k) {
        if (a.mean()[k] != b.mean()[k]) return a.mean()[k] < b.mean()[k];
    }
    for (Eigen::Index k = 0; k < a.dim(); ++k) {
        if (a.variances()[k] != b.variances()[k]) return a.variances()[k] < b.variances()[k];
    }
    return false;
}

}  // namespace

FiniteMixture::FiniteMixture(std::vector<DiagonalGaussian> components) : components_(std::move(components)) {
    if (components_.empty()) throw DimensionError("FiniteMixture: needs at least one component");
    dim_ = components_.front().dim();
    for (const auto& c : components_) {
        if (c.dim() != dim_) throw DimensionError("FiniteMixture: components differ in dimension");
    }
    std::stable_sort(components_.begin(), components_.end(), canonical_less);
    const auto n = static_cast<Eigen::Index>(components_.size());
    means_.resize(n, dim_);
    inv_vars_.resize(n, dim_);
    log_norms_.resize(components_.size());
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& c = components_[static_cast<std::size_t>(r)];
        means_.row(r) = c.mean().transpose();
        inv_vars_.row(r) = c.inv_variances().transpose();
        log_norms_[static_cast<std::size_t>(r)] = c.log_norm();
    }
    log_count_ = std::log(static_cast<double>(components_.size()));
}

double FiniteMixture::log_density_raw(const double* z, std::vector<double>& scratch) const {
    const std::size_t n = components_.size();
    scratch.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        scratch[i] = detail::diag_log_density(z, means_.row(r).data(), inv_vars_.row(r).data(), log_norms_[i], dim_);
    }
    if (n == 1) return scratch[0];
    return log_sum_exp(scratch) - log_count_;
}

double FiniteMixture::log_density(const Eigen::Ref<const Vector>& z) const {
    if (z.size() != dim_) {
        throw DimensionError("FiniteMixture::log_density: expected dimension " + std::to_string(dim_));
    }
    const Vector copy = z;
    std::vector<double> scratch;
    return log_density_raw(copy.data(), scratch);
}

FiniteMixture FiniteMixture::marginal(Eigen::Index k) const {
    if (k < 0 || k >= dim_) throw DimensionError("FiniteMixture::marginal: coordinate out of range");
    std::vector<DiagonalGaussian> slices;
    slices.reserve(components_.size());
    for (const auto& c : components_) {
        slices.emplace_back(Vector::Constant(1, c.mean()[k]), Vector::Constant(1, c.variances()[k]));
    }
    return FiniteMixture(std::move(slices));
}

FiniteMixture build_mixture(const LinearGaussianModel& model, const Samples& xs) {
    if (xs.rows() < 1) throw DimensionError("build_mixture: need at least one input row");
    if (xs.cols() != model.input_dim()) {
        throw DimensionError("build_mixture: inputs have " + std::to_string(xs.cols()) + " columns, model expects " +
                             std::to_string(model.input_dim()));
    }
    std::vector<DiagonalGaussian> comps;
    comps.reserve(static_cast<std::size_t>(xs.rows()));
    for (Eigen::Index i = 0; i < xs.rows(); ++i) comps.push_back(conditional(model, xs.row(i).transpose()));
    return FiniteMixture(std::move(comps));
}

double mixture_log_density(const FiniteMixture& m, const Eigen::Ref<const Vector>& z) { return m.log_density(z); }

Samples sample_mixture(const FiniteMixture& m, RandomStream& rng, Eigen::Index count) {
    if (count < 1) throw DomainError("sample_mixture: count must be >= 1");
    Samples out(count, m.dim());
    for (Eigen::Index r = 0; r < count; ++r) {
        const std::size_t idx = rng.uniform_index(m.size());
        m.component(idx).sample_into(rng, out.row(r).data());
    }
    return out;
}

FiniteMixture subsample_mixture(const FiniteMixture& m, std::size_t m_sub, RandomStream& rng) {
    const std::size_t n = m.size();
    if (m_sub < 1 || m_sub > n) {
        throw DomainError("subsample_mixture: size must be in [1, " + std::to_string(n) + "]");
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < m_sub; ++i) {
        const std::size_t j = i + rng.uniform_index(n - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(m_sub);
    std::sort(idx.begin(), idx.end());
    std::vector<DiagonalGaussian> picked;
    picked.reserve(m_sub);
    for (std::size_t i : idx) picked.push_back(m.component(i));
    return FiniteMixture(std::move(picked));
}

}  // namespace ramdiv
