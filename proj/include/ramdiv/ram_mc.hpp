#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "ramdiv/divergence.hpp"
#include "ramdiv/mixture.hpp"

namespace ramdiv {

/// Importance-sampling proposal for RAM-MC: the prior p(z) or the mixture q_N(z).
enum class Proposal { Prior, Mixture };

std::string to_string(Proposal p);
/// "prior" or "mixture".
Proposal parse_proposal(std::string_view text);

enum class Outcome { Finite, NonFinite };

struct McEstimate {
    double value = 0.0;
    std::int64_t m_samples = 0;
    std::int64_t n_components = 0;
    Proposal proposal = Proposal::Prior;
    std::uint64_t seed = 0;
    Outcome outcome = Outcome::Finite;

    bool finite() const { return outcome == Outcome::Finite; }
};

/// RAM-MC: (1/M) sum_m f0(q_N(Z_m) / p(Z_m)) p(Z_m) / pi(Z_m), Z_m ~ pi.
///
/// All ratios are formed in log space. For the prior proposal the weight is
/// identically one and never computed. Any non-finite term marks the result
/// NonFinite; nothing is clipped.
McEstimate ram_mc(const DivergenceSpec& spec, const FiniteMixture& mixture, const Gaussian& prior,
                  std::int64_t m_samples, Proposal proposal, RandomStream& rng);

/// max_i chi^2(Q_{Z|x_i} || prior); +inf if any component is too wide for the prior.
double assumption_chi2_bound(const LinearGaussianModel& model, const Samples& xs, const Gaussian& prior);

/// Monte-Carlo estimate of E_{X ~ uniform(xs), Z ~ prior}[(q(Z|X) / p(Z))^4].
/// Throws NonFiniteError when the average overflows.
double assumption_fourth_moment(const LinearGaussianModel& model, const Samples& xs, const Gaussian& prior,
                                std::int64_t m_samples, RandomStream& rng);

}  // namespace ramdiv
