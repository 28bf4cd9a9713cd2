#include "ramdiv/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>

#include "ramdiv/errors.hpp"
#include "ramdiv/mixture.hpp"
#include "ramdiv/numerics.hpp"

namespace ramdiv {
namespace {

struct Cell {
    DivergenceSpec spec;
    int d;
    double lambda;
    std::int64_t N;
    std::int64_t M;
    Proposal proposal;
    const LinearGaussianModel* model;
    std::optional<double> truth;
};

}  // namespace

void SweepConfig::validate() const {
    if (divergences.empty() || dims.empty() || lambdas.empty() || Ns.empty() || Ms.empty() || proposals.empty()) {
        throw UsageError("sweep grid axes must all be nonempty");
    }
    if (trials < 1) throw UsageError("trials must be >= 1");
    for (int d : dims)
        if (d < 1) throw UsageError("dims must be >= 1");
    for (auto n : Ns)
        if (n < 1) throw UsageError("N must be >= 1");
    for (auto m : Ms)
        if (m < 1) throw UsageError("M must be >= 1");
}

std::optional<double> synthetic_truth(const DivergenceSpec& spec, const LinearGaussianModel& model,
                                      const Gaussian& prior) {
    const FullGaussian q = marginal(model);
    if (has_closed_form(spec)) return closed_form(spec, q, prior);
    if (q.dim() != 1) return std::nullopt;

    const double q_mu = q.mean()[0];
    const double q_sd = std::sqrt(q.covariance()(0, 0));
    const double p_mu = mean_of(prior)[0];
    const double p_sd = std::sqrt(covariance_of(prior)(0, 0));
    const double lo = std::min(q_mu - 14.0 * q_sd, p_mu - 14.0 * p_sd);
    const double hi = std::max(q_mu + 14.0 * q_sd, p_mu + 14.0 * p_sd);
    try {
        return quadrature_divergence(
            spec, [&](double z) { return q.log_density(Vector::Constant(1, z)); },
            [&](double z) { return log_density(prior, Vector::Constant(1, z)); }, lo, hi, 40001);
    } catch (const NumericalError&) {
        return std::nullopt;
    }
}

std::uint64_t trial_seed(std::uint64_t master_seed, const DivergenceSpec& spec, int d, double lambda,
                         std::int64_t N, std::int64_t M, Proposal proposal, int trial) {
    const std::string key = spec.label() + "|" + std::to_string(d) + "|" + format_shortest(lambda) + "|" +
                            std::to_string(N) + "|" + std::to_string(M) + "|" + to_string(proposal);
    return derive_seed(master_seed, key, {static_cast<std::uint64_t>(trial)});
}

std::vector<EstimateRecord> run_sweep(const SweepConfig& cfg, int threads) {
    cfg.validate();
    if (threads < 1) throw UsageError("threads must be >= 1");

    std::map<std::pair<int, double>, LinearGaussianModel> models;
    std::map<int, DiagonalGaussian> priors;
    for (int d : cfg.dims) {
        const SyntheticFamily fam = make_family(d, cfg.master_seed, cfg.eps);
        priors.emplace(d, standard_prior(d));
        for (double lambda : cfg.lambdas) models.emplace(std::make_pair(d, lambda), model_at(fam, lambda));
    }

    std::vector<Cell> cells;
    for (const auto& spec : cfg.divergences) {
        for (int d : cfg.dims) {
            for (double lambda : cfg.lambdas) {
                const LinearGaussianModel& model = models.at({d, lambda});
                const std::optional<double> truth = synthetic_truth(spec, model, priors.at(d));
                for (auto N : cfg.Ns)
                    for (auto M : cfg.Ms)
                        for (auto prop : cfg.proposals) cells.push_back(Cell{spec, d, lambda, N, M, prop, &model, truth});
            }
        }
    }

    const auto trials = static_cast<std::int64_t>(cfg.trials);
    const auto jobs = static_cast<std::int64_t>(cells.size()) * trials;
    std::vector<EstimateRecord> out(static_cast<std::size_t>(jobs));
    std::exception_ptr failure;
    std::mutex failure_mutex;

#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
    for (std::int64_t job = 0; job < jobs; ++job) {
        try {
            const Cell& c = cells[static_cast<std::size_t>(job / trials)];
            const int trial = static_cast<int>(job % trials);
            const std::uint64_t seed =
                trial_seed(cfg.master_seed, c.spec, c.d, c.lambda, c.N, c.M, c.proposal, trial);
            RandomStream rng(seed);
            const Samples xs = sample_inputs(*c.model, rng, c.N);
            const FiniteMixture mixture = build_mixture(*c.model, xs);
            const McEstimate est = ram_mc(c.spec, mixture, priors.at(c.d), c.M, c.proposal, rng);

            EstimateRecord& r = out[static_cast<std::size_t>(job)];
            r.divergence = c.spec.label();
            r.d = c.d;
            r.lambda = c.lambda;
            r.N = c.N;
            r.M = c.M;
            r.proposal = c.proposal;
            r.trial = trial;
            r.seed = seed;
            r.estimate = est.value;
            r.truth = c.truth;
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<BiasPoint> bias_curve(const std::vector<EstimateRecord>& records) {
    if (records.empty()) return {};
    const EstimateRecord& ref = records.front();
    std::map<std::int64_t, std::vector<double>> by_n;
    for (const auto& r : records) {
        if (r.divergence != ref.divergence || r.d != ref.d || r.lambda != ref.lambda || r.M != ref.M ||
            r.proposal != ref.proposal) {
            throw UsageError("bias_curve: records mix different (divergence, d, lambda, M, proposal) groups");
        }
        if (!r.truth || !std::isfinite(*r.truth)) throw UsageError("bias_curve: records need a finite truth");
        if (r.truth != ref.truth) throw UsageError("bias_curve: records disagree on truth");
        if (!std::isfinite(r.estimate)) throw UsageError("bias_curve: non-finite estimate in input");
        by_n[r.N].push_back(r.estimate);
    }
    std::vector<BiasPoint> curve;
    for (const auto& [n, values] : by_n) {
        const SampleStats s = sample_stats(values);
        curve.push_back(BiasPoint{n, s.mean - *ref.truth, s.std_error, values.size()});
    }
    return curve;
}

double fit_log_slope(const std::vector<double>& ns, const std::vector<double>& values) {
    if (ns.size() != values.size()) throw UsageError("fit_log_slope: ns and values differ in length");
    if (ns.size() < 3) throw UsageError("fit_log_slope: need at least 3 points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!(ns[i] > 0.0)) throw DomainError("fit_log_slope: N must be positive");
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            throw DomainError("fit_log_slope: values must be positive and finite");
        }
        lx.push_back(std::log(ns[i]));
        ly.push_back(std::log(values[i]));
    }
    const double mx = sample_stats(lx).mean;
    const double my = sample_stats(ly).mean;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx == 0.0) throw DomainError("fit_log_slope: all N are equal");
    return sxy / sxx;
}

Chi2BiasLaw chi2_bias_prediction(const LinearGaussianModel& model, const Gaussian& prior, int n_x,
                                 RandomStream& rng) {
    if (n_x < 1000) throw DomainError("chi2_bias_prediction: n_x must be >= 1000");
    const auto spec = DivergenceSpec::chi_sq();
    const double marginal_chi2 = closed_form(spec, marginal(model), prior);
    Chi2BiasLaw law;
    if (std::isinf(marginal_chi2)) {
        law.coefficient = std::numeric_limits<double>::infinity();
        return law;
    }
    const Samples xs = sample_inputs(model, rng, n_x);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < xs.rows(); ++i) {
        sum += closed_form(spec, conditional(model, xs.row(i).transpose()), prior);
    }
    const double mean_conditional = sum / static_cast<double>(n_x);
    law.coefficient = std::isinf(mean_conditional) ? mean_conditional : mean_conditional - marginal_chi2;
    return law;
}

}  // namespace ramdiv
