#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ramdiv/divergence.hpp"
#include "ramdiv/ram_mc.hpp"
#include "ramdiv/synthetic.hpp"

namespace ramdiv {

struct SweepConfig {
    std::vector<DivergenceSpec> divergences;
    std::vector<int> dims;
    std::vector<double> lambdas;
    std::vector<std::int64_t> Ns;
    std::vector<std::int64_t> Ms;
    std::vector<Proposal> proposals;
    int trials = 1;
    std::uint64_t master_seed = 0;
    double eps = 0.5;

    /// Throws UsageError on an empty grid axis or trials < 1.
    void validate() const;
};

/// One RAM-MC run. `truth` is empty when no reference value exists and +inf
/// when the divergence is infinite.
struct EstimateRecord {
    std::string divergence;
    int d = 0;
    double lambda = 0.0;
    std::int64_t N = 0;
    std::int64_t M = 0;
    Proposal proposal = Proposal::Prior;
    int trial = 0;
    std::uint64_t seed = 0;
    double estimate = 0.0;
    std::optional<double> truth;

    bool operator==(const EstimateRecord&) const = default;
};

/// Reference value of D_f(Q_Z || P_Z) for the synthetic model: closed form for
/// KL, chi^2 and H^2, trapezoid quadrature in d = 1 for the other kinds,
/// otherwise empty.
std::optional<double> synthetic_truth(const DivergenceSpec& spec, const LinearGaussianModel& model,
                                      const Gaussian& prior);

/// Seed of one (cell, trial). Depends on the cell's contents, not its position
/// in the grid, so growing a grid leaves existing cells unchanged.
std::uint64_t trial_seed(std::uint64_t master_seed, const DivergenceSpec& spec, int d, double lambda,
                         std::int64_t N, std::int64_t M, Proposal proposal, int trial);

/// Runs every (divergence, d, lambda, N, M, proposal) cell `trials` times.
/// Output order is the grid order with trial innermost and does not depend on
/// `threads`.
std::vector<EstimateRecord> run_sweep(const SweepConfig& cfg, int threads = 1);

struct BiasPoint {
    std::int64_t N = 0;
    double bias = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
};

/// Mean(estimate) - truth per N, ascending in N. All records must share
/// divergence, d, lambda, M and proposal and carry a finite truth.
std::vector<BiasPoint> bias_curve(const std::vector<EstimateRecord>& records);

/// Least-squares slope of log(value) against log(N).
double fit_log_slope(const std::vector<double>& ns, const std::vector<double>& values);

/// Exact bias law of RAM for chi^2:
///   E chi^2(Q_N || P) - chi^2(Q || P) = (E_X chi^2(Q_{Z|X} || P) - chi^2(Q || P)) / N.
struct Chi2BiasLaw {
    double coefficient = 0.0;  ///< +inf if any term is infinite
    double operator()(double N) const { return coefficient / N; }
};

/// E_X chi^2(Q_{Z|X} || P) is averaged over `n_x` >= 1000 draws X ~ N(0, I).
Chi2BiasLaw chi2_bias_prediction(const LinearGaussianModel& model, const Gaussian& prior, int n_x,
                                 RandomStream& rng);

}  // namespace ramdiv
