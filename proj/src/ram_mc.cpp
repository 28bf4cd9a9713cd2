#include "ramdiv/ram_mc.hpp"

#include <cmath>
#include <limits>
#include <type_traits>
#include <vector>

#include "ramdiv/errors.hpp"

namespace ramdiv {
namespace {

// log p(z) from a raw row, with the diagonal case kept on the shared fast path.
template <class G>
double prior_log_density(const G& g, const double* z) {
    if constexpr (std::is_same_v<G, DiagonalGaussian>) {
        return g.log_density_raw(z);
    } else {
        return g.log_density(Eigen::Map<const Vector>(z, g.dim()));
    }
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
    if (a != b) throw DimensionError(std::string(what) + ": mixture and prior dimensions differ");
}

}  // namespace

std::string to_string(Proposal p) { return p == Proposal::Prior ? "prior" : "mixture"; }

Proposal parse_proposal(std::string_view text) {
    if (text == "prior") return Proposal::Prior;
    if (text == "mixture") return Proposal::Mixture;
    throw UsageError("unknown proposal '" + std::string(text) + "' (expected prior or mixture)");
}

McEstimate ram_mc(const DivergenceSpec& spec, const FiniteMixture& mixture, const Gaussian& prior,
                  std::int64_t m_samples, Proposal proposal, RandomStream& rng) {
    if (m_samples < 1) throw DomainError("ram_mc: M must be >= 1");
    require_same_dim(mixture.dim(), dim(prior), "ram_mc");

    McEstimate est;
    est.m_samples = m_samples;
    est.n_components = static_cast<std::int64_t>(mixture.size());
    est.proposal = proposal;
    est.seed = rng.seed();

    std::visit(
        [&](const auto& p) {
            const Eigen::Index d = mixture.dim();
            std::vector<double> scratch;
            Vector z(d);
            double sum = 0.0;
            bool finite = true;
            for (std::int64_t m = 0; m < m_samples; ++m) {
                if (proposal == Proposal::Prior) {
                    if constexpr (std::is_same_v<std::decay_t<decltype(p)>, DiagonalGaussian>) {
                        p.sample_into(rng, z.data());
                    } else {
                        z = p.sample(rng, 1).row(0).transpose();
                    }
                } else {
                    mixture.component(rng.uniform_index(mixture.size())).sample_into(rng, z.data());
                }
                const double log_ratio = mixture.log_density_raw(z.data(), scratch) - prior_log_density(p, z.data());
                double term;
                if (!(log_ratio < std::numeric_limits<double>::infinity())) {
                    term = std::numeric_limits<double>::infinity();
                } else if (proposal == Proposal::Prior) {
                    term = f0_at_log_ratio(spec, log_ratio);
                } else {
                    term = f0_over_ratio_at_log_ratio(spec, log_ratio);
                }
                if (!std::isfinite(term)) finite = false;
                sum += term;
            }
            est.value = sum / static_cast<double>(m_samples);
            if (!finite || !std::isfinite(est.value)) est.outcome = Outcome::NonFinite;
        },
        prior);
    return est;
}

double assumption_chi2_bound(const LinearGaussianModel& model, const Samples& xs, const Gaussian& prior) {
    if (xs.rows() < 1) throw DimensionError("assumption_chi2_bound: no inputs");
    double worst = 0.0;
    const auto spec = DivergenceSpec::chi_sq();
    for (Eigen::Index i = 0; i < xs.rows(); ++i) {
        const double v = closed_form(spec, conditional(model, xs.row(i).transpose()), prior);
        if (v > worst) worst = v;
        if (std::isinf(worst)) break;
    }
    return worst;
}

double assumption_fourth_moment(const LinearGaussianModel& model, const Samples& xs, const Gaussian& prior,
                                std::int64_t m_samples, RandomStream& rng) {
    if (m_samples < 1) throw DomainError("assumption_fourth_moment: M must be >= 1");
    const FiniteMixture conditionals = build_mixture(model, xs);
    require_same_dim(conditionals.dim(), dim(prior), "assumption_fourth_moment");
    double sum = 0.0;
    for (std::int64_t m = 0; m < m_samples; ++m) {
        const auto& q = conditionals.component(rng.uniform_index(conditionals.size()));
        const Samples z = sample(prior, rng, 1);
        const Vector zr = z.row(0).transpose();
        sum += std::exp(4.0 * (q.log_density(zr) - log_density(prior, zr)));
    }
    const double value = sum / static_cast<double>(m_samples);
    if (!std::isfinite(value)) throw NonFiniteError("assumption_fourth_moment: fourth moment overflowed");
    return value;
}

}  // namespace ramdiv
