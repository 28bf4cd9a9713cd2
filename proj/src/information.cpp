#include "ramdiv/information.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "ramdiv/errors.hpp"

namespace ramdiv {

double entropy_estimate(const FiniteMixture& m, std::int64_t m_samples, RandomStream& rng) {
    if (m_samples < 1) throw DomainError("entropy_estimate: M must be >= 1");
    const Samples z = sample_mixture(m, rng, m_samples);
    std::vector<double> scratch;
    double sum = 0.0;
    for (Eigen::Index r = 0; r < z.rows(); ++r) sum += m.log_density_raw(z.row(r).data(), scratch);
    return -sum / static_cast<double>(m_samples);
}

double mi_tcpc_estimate(const LinearGaussianModel& model, const Samples& xs, std::int64_t m_inner,
                        RandomStream& rng) {
    if (m_inner < 1) throw DomainError("mi_tcpc_estimate: M_inner must be >= 1");
    const FiniteMixture mixture = build_mixture(model, xs);
    std::vector<double> scratch;
    Vector z(mixture.dim());
    double total = 0.0;
    for (std::size_t i = 0; i < mixture.size(); ++i) {
        const DiagonalGaussian& q = mixture.component(i);
        double acc = 0.0;
        for (std::int64_t m = 0; m < m_inner; ++m) {
            q.sample_into(rng, z.data());
            acc += q.log_density_raw(z.data()) - mixture.log_density_raw(z.data(), scratch);
        }
        total += acc / static_cast<double>(m_inner);
    }
    return total / static_cast<double>(mixture.size());
}

double total_correlation_estimate(const FiniteMixture& m, std::int64_t m_samples, RandomStream& rng) {
    if (m_samples < 1) throw DomainError("total_correlation_estimate: M must be >= 1");
    const Samples z = sample_mixture(m, rng, m_samples);
    std::vector<FiniteMixture> marginals;
    marginals.reserve(static_cast<std::size_t>(m.dim()));
    for (Eigen::Index k = 0; k < m.dim(); ++k) marginals.push_back(m.marginal(k));

    std::vector<double> scratch;
    double sum = 0.0;
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
        const double* row = z.row(r).data();
        double marginal_sum = 0.0;
        for (Eigen::Index k = 0; k < m.dim(); ++k) {
            marginal_sum += marginals[static_cast<std::size_t>(k)].log_density_raw(row + k, scratch);
        }
        sum += m.log_density_raw(row, scratch) - marginal_sum;
    }
    return sum / static_cast<double>(m_samples);
}

double gaussian_entropy(const FullGaussian& g) {
    const double d = static_cast<double>(g.dim());
    return 0.5 * (d * std::log(2.0 * std::numbers::pi * std::numbers::e) + g.log_det());
}

double linear_gaussian_mutual_information(const LinearGaussianModel& model) {
    const FullGaussian q = marginal(model);
    return 0.5 * (q.log_det() - static_cast<double>(model.latent_dim()) * std::log(model.noise_var));
}

}  // namespace ramdiv
