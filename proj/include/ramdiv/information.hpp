#pragma once

#include <cstdint>

#include "ramdiv/mixture.hpp"

namespace ramdiv {

/// -E_{Z ~ Q_N}[log q_N(Z)] from `m_samples` draws of the mixture.
double entropy_estimate(const FiniteMixture& m, std::int64_t m_samples, RandomStream& rng);

/// (1/N) sum_i KL(Q_{Z|x_i} || Q_N), each term from `m_inner` draws of
/// Q_{Z|x_i}. In expectation a lower bound on I(Z; X).
double mi_tcpc_estimate(const LinearGaussianModel& model, const Samples& xs, std::int64_t m_inner,
                        RandomStream& rng);

/// sum_k H(Q_N,k) - H(Q_N) where Q_N,k is the k-th coordinate marginal of the
/// mixture. One set of joint draws feeds every term.
double total_correlation_estimate(const FiniteMixture& m, std::int64_t m_samples, RandomStream& rng);

/// Differential entropy 0.5 log((2 pi e)^d det S).
double gaussian_entropy(const FullGaussian& g);

/// I(Z; X) = E_X KL(Q_{Z|X} || Q_Z) for the linear-Gaussian model with X ~ N(0, I):
/// 0.5 (log det(A A^T + s I) - d log s), s = noise_var.
double linear_gaussian_mutual_information(const LinearGaussianModel& model);

}  // namespace ramdiv
