#include "ramdiv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ramdiv/errors.hpp"
#include "ramdiv/numerics.hpp"
#include "ramdiv/rates.hpp"
#include "ramdiv/records_io.hpp"
#include "ramdiv/sweep.hpp"

namespace ramdiv::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("RAMDIV_SEED")) {
        std::uint64_t v = 0;
        const std::string_view s(env);
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return v;
        throw UsageError("RAMDIV_SEED is not an unsigned integer: '" + std::string(s) + "'");
    }
    return 0;
}

std::vector<double> default_lambdas() {
    std::vector<double> out;
    for (int i = 0; i < 9; ++i) out.push_back(-2.0 + 0.5 * i);
    return out;
}

std::string truth_text(const std::optional<double>& t) { return t ? format_17g(*t) : std::string(); }

ordered_json real_json(double x) {
    if (std::isfinite(x)) return x;
    return format_17g(x);
}

struct EstimateOptions {
    std::string divergence;
    int d = 1;
    double lambda = 0.0;
    std::int64_t N = 1;
    std::int64_t M = 128;
    std::string proposal = "mixture";
    int trials = 10;
    std::optional<std::uint64_t> seed;
    double eps = 0.5;
    int threads = 1;
};

int cmd_estimate(const EstimateOptions& o, std::ostream& out) {
    SweepConfig cfg;
    cfg.divergences = {DivergenceSpec::parse(o.divergence)};
    cfg.dims = {o.d};
    cfg.lambdas = {o.lambda};
    cfg.Ns = {o.N};
    cfg.Ms = {o.M};
    cfg.proposals = {parse_proposal(o.proposal)};
    cfg.trials = o.trials;
    cfg.master_seed = o.seed.value_or(default_seed());
    cfg.eps = o.eps;
    const auto records = run_sweep(cfg, o.threads);

    out << "trial,seed,estimate\n";
    std::vector<double> values;
    bool non_finite = false;
    for (const auto& r : records) {
        out << r.trial << ',' << r.seed << ',' << format_17g(r.estimate) << '\n';
        values.push_back(r.estimate);
        non_finite = non_finite || !std::isfinite(r.estimate);
    }
    const SampleStats s = sample_stats(values);
    out << "mean," << format_17g(s.mean) << '\n';
    out << "sd," << format_17g(std::sqrt(s.variance)) << '\n';
    out << "truth," << truth_text(records.front().truth) << '\n';
    out << "status," << (non_finite ? "NonFinite" : "Finite") << '\n';
    return non_finite ? kExitNonFinite : kExitOk;
}

struct SyntheticOptions {
    std::vector<std::string> divergences = {"kl", "chisq", "sqhellinger"};
    std::vector<int> dims = {1, 4, 16};
    std::vector<double> lambdas = default_lambdas();
    std::vector<std::int64_t> Ns = {1, 500};
    std::vector<std::int64_t> Ms = {128};
    std::vector<std::string> proposals = {"mixture"};
    int trials = 10;
    std::optional<std::uint64_t> seed;
    double eps = 0.5;
    int threads = 1;
    std::string format = "csv";
    std::string output = "-";
};

int cmd_synthetic(const SyntheticOptions& o, std::ostream& out, std::ostream& err) {
    SweepConfig cfg;
    for (const auto& s : o.divergences) cfg.divergences.push_back(DivergenceSpec::parse(s));
    for (const auto& s : o.proposals) cfg.proposals.push_back(parse_proposal(s));
    cfg.dims = o.dims;
    cfg.lambdas = o.lambdas;
    cfg.Ns = o.Ns;
    cfg.Ms = o.Ms;
    cfg.trials = o.trials;
    cfg.master_seed = o.seed.value_or(default_seed());
    cfg.eps = o.eps;
    cfg.validate();

    std::ofstream file;
    std::ostream* sink = &out;
    if (o.output != "-") {
        file.open(o.output, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "error: cannot open '" << o.output << "' for writing\n";
            return kExitUsage;
        }
        sink = &file;
    }

    const auto records = run_sweep(cfg, o.threads);
    if (o.format == "json") {
        write_json(*sink, records);
    } else {
        write_csv(*sink, records);
    }
    sink->flush();
    if (!*sink) {
        err << "error: failed writing '" << o.output << "'\n";
        return kExitUsage;
    }
    const bool non_finite =
        std::any_of(records.begin(), records.end(), [](const auto& r) { return !std::isfinite(r.estimate); });
    return non_finite ? kExitNonFinite : kExitOk;
}

struct RatesOptions {
    std::string divergence = "chisq";
    int d = 1;
    double lambda = 0.5;
    std::vector<std::int64_t> Ns = {1, 2, 4, 8, 16, 32, 64};
    std::int64_t M = 4096;
    int trials = 400;
    std::string proposal = "prior";
    std::optional<std::uint64_t> seed;
    int n_x = 200000;
    int threads = 1;
    bool self_test = false;
};

int cmd_rates(const RatesOptions& o, std::ostream& out) {
    if (o.Ns.size() < 3) throw UsageError("rates: need at least 3 values in --Ns");
    const DivergenceSpec spec = DivergenceSpec::parse(o.divergence);
    const std::uint64_t seed = o.seed.value_or(default_seed());

    ordered_json doc;
    doc["divergence"] = spec.label();
    doc["self_test"] = o.self_test;

    std::vector<BiasPoint> curve;
    std::optional<double> truth;
    const SyntheticFamily fam = make_family(o.d, seed);
    const LinearGaussianModel model = model_at(fam, o.lambda);
    const DiagonalGaussian prior = standard_prior(o.d);
    bool non_finite = false;

    if (o.self_test) {
        for (auto n : o.Ns) curve.push_back(BiasPoint{n, 1.0 / static_cast<double>(n), 0.0, 0});
    } else {
        SweepConfig cfg;
        cfg.divergences = {spec};
        cfg.dims = {o.d};
        cfg.lambdas = {o.lambda};
        cfg.Ns = o.Ns;
        cfg.Ms = {o.M};
        cfg.proposals = {parse_proposal(o.proposal)};
        cfg.trials = o.trials;
        cfg.master_seed = seed;
        const auto records = run_sweep(cfg, o.threads);
        non_finite = std::any_of(records.begin(), records.end(),
                                 [](const auto& r) { return !std::isfinite(r.estimate); });
        truth = records.front().truth;
        doc["d"] = o.d;
        doc["lambda"] = o.lambda;
        doc["M"] = o.M;
        doc["trials"] = o.trials;
        doc["proposal"] = o.proposal;
        doc["seed"] = seed;
        doc["truth"] = truth ? real_json(*truth) : ordered_json(nullptr);
        if (!non_finite && truth && std::isfinite(*truth)) curve = bias_curve(records);
    }

    ordered_json bias = ordered_json::array();
    std::vector<double> ns, values;
    bool all_positive = !curve.empty();
    for (const auto& p : curve) {
        bias.push_back({{"N", p.N}, {"bias", p.bias}, {"std_error", p.std_error}});
        ns.push_back(static_cast<double>(p.N));
        values.push_back(p.bias);
        all_positive = all_positive && p.bias > 0.0;
    }
    doc["bias"] = bias;

    std::optional<double> slope;
    if (all_positive) slope = fit_log_slope(ns, values);
    doc["slope"] = slope ? ordered_json(*slope) : ordered_json(nullptr);

    const RateColumn column = rate_column(spec);
    doc["reference_rates"] = reference_bias_rates(spec);
    doc["rate_table"] = {{"column", column.column},
                         {"bias_chi2_assumption", column.bias_chi2_assumption.text},
                         {"bias_fourth_moment", column.bias_fourth_moment.text},
                         {"psi", column.psi.text}};

    // The self-test data is an exact N^-1 decay; check it against the chi^2 band.
    const auto band = bias_slope_band(o.self_test ? DivergenceSpec::chi_sq() : spec);
    if (band) {
        doc["band"] = {real_json(band->lo), real_json(band->hi)};
        doc["pass"] = slope.has_value() && band->contains(*slope);
    } else {
        doc["band"] = nullptr;
        doc["pass"] = nullptr;
    }

    if (!o.self_test && spec.kind() == DivergenceKind::ChiSq && !curve.empty()) {
        RandomStream rng(derive_seed(seed, "chi2-prediction"));
        const Chi2BiasLaw law = chi2_bias_prediction(model, prior, o.n_x, rng);
        ordered_json pts = ordered_json::array();
        double worst = 0.0;
        for (const auto& p : curve) {
            const double predicted = law(static_cast<double>(p.N));
            const double rel = std::abs(p.bias - predicted) / std::abs(predicted);
            worst = std::max(worst, rel);
            pts.push_back({{"N", p.N}, {"predicted", real_json(predicted)}, {"measured", p.bias},
                           {"relative_error", real_json(rel)}});
        }
        doc["chi2_prediction"] = {{"coefficient", real_json(law.coefficient)},
                                  {"points", pts},
                                  {"max_relative_error", real_json(worst)},
                                  {"within_10_percent", worst <= 0.10}};
    }

    out << doc.dump(2) << '\n';
    return non_finite ? kExitNonFinite : kExitOk;
}

struct LemmaOptions {
    std::vector<double> deltas = {0.1, 0.01};
    int grid_points = 10000;
    double corrupt_scale = 1.0;
};

int cmd_check_lemmas(const LemmaOptions& o, std::ostream& out) {
    if (o.grid_points < 2) throw UsageError("check-lemmas: --grid-points must be >= 2");
    const std::vector<DivergenceSpec> specs = {
        DivergenceSpec::kl(),           DivergenceSpec::sq_hellinger(), DivergenceSpec::js(),
        DivergenceSpec::f_beta(0.75),   DivergenceSpec::f_beta(2.0),    DivergenceSpec::f_alpha(-0.5),
        DivergenceSpec::f_alpha(0.0),   DivergenceSpec::f_alpha(0.5),
    };
    constexpr double kTolerance = -1e-12;
    constexpr double kUpper = 100.0;
    bool ok = true;
    out << "divergence,delta,min_margin,argmin_x,status\n";
    for (const auto& spec : specs) {
        for (double delta : o.deltas) {
            if (!(delta > 0.0 && delta < 1.0)) throw UsageError("check-lemmas: deltas must lie in (0, 1)");
            const double log_lo = std::log(delta);
            const double step = (std::log(kUpper) - log_lo) / static_cast<double>(o.grid_points - 1);
            double worst = std::numeric_limits<double>::infinity();
            double worst_x = delta;
            for (int i = 0; i < o.grid_points; ++i) {
                const double x = (i == 0) ? delta : std::exp(log_lo + step * i);
                const double g = f0_prime_normalized(spec, x);
                const double margin = o.corrupt_scale * lemma_bound_h(spec, delta, x) - g * g;
                if (margin < worst) {
                    worst = margin;
                    worst_x = x;
                }
            }
            const bool pass = worst >= kTolerance;
            ok = ok && pass;
            out << spec.label() << ',' << format_shortest(delta) << ',' << format_17g(worst) << ','
                << format_17g(worst_x) << ',' << (pass ? "ok" : "VIOLATED") << '\n';
        }
    }
    return ok ? kExitOk : kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"RAM / RAM-MC f-divergence estimation", "ramdiv"};
    app.require_subcommand(1);

    EstimateOptions est;
    auto* sub_est = app.add_subcommand("estimate", "Repeated RAM-MC estimates on the synthetic model");
    sub_est->add_option("--divergence", est.divergence, "kl, tv, chisq, sqhellinger, js, fbeta:<b>, falpha:<a>")
        ->required();
    sub_est->add_option("--d", est.d, "latent dimension");
    sub_est->add_option("--lambda", est.lambda, "model parameter");
    sub_est->add_option("--N", est.N, "mixture size");
    sub_est->add_option("--M", est.M, "Monte-Carlo samples");
    sub_est->add_option("--proposal", est.proposal, "prior or mixture");
    sub_est->add_option("--trials", est.trials);
    sub_est->add_option("--seed", est.seed, "master seed (default: $RAMDIV_SEED or 0)");
    sub_est->add_option("--eps", est.eps, "conditional noise std");
    sub_est->add_option("--threads", est.threads);

    SyntheticOptions syn;
    auto* sub_syn = app.add_subcommand("synthetic", "Grid sweep over the synthetic model");
    sub_syn->add_option("--divergences", syn.divergences)->delimiter(',');
    sub_syn->add_option("--dims", syn.dims)->delimiter(',');
    sub_syn->add_option("--lambdas", syn.lambdas)->delimiter(',');
    sub_syn->add_option("--Ns", syn.Ns)->delimiter(',');
    sub_syn->add_option("--Ms", syn.Ms)->delimiter(',');
    sub_syn->add_option("--proposals", syn.proposals)->delimiter(',');
    sub_syn->add_option("--trials", syn.trials);
    sub_syn->add_option("--seed", syn.seed, "master seed (default: $RAMDIV_SEED or 0)");
    sub_syn->add_option("--eps", syn.eps);
    sub_syn->add_option("--threads", syn.threads);
    sub_syn->add_option("--format", syn.format)->check(CLI::IsMember({"csv", "json"}));
    sub_syn->add_option("--output", syn.output, "file path, - for stdout");

    RatesOptions rates;
    auto* sub_rates = app.add_subcommand("rates", "Empirical bias rate against the reference table");
    sub_rates->add_option("--divergence", rates.divergence);
    sub_rates->add_option("--d", rates.d);
    sub_rates->add_option("--lambda", rates.lambda);
    sub_rates->add_option("--Ns", rates.Ns)->delimiter(',');
    sub_rates->add_option("--M", rates.M);
    sub_rates->add_option("--trials", rates.trials);
    sub_rates->add_option("--proposal", rates.proposal);
    sub_rates->add_option("--seed", rates.seed);
    sub_rates->add_option("--n-x", rates.n_x, "inputs averaged by the chi^2 bias prediction");
    sub_rates->add_option("--threads", rates.threads);
    sub_rates->add_flag("--self-test", rates.self_test, "fit synthetic 1/N data instead of running RAM-MC");

    LemmaOptions lemmas;
    auto* sub_lem = app.add_subcommand("check-lemmas", "Grid check of the h_delta derivative bounds");
    sub_lem->add_option("--deltas", lemmas.deltas)->delimiter(',');
    sub_lem->add_option("--grid-points", lemmas.grid_points);
    sub_lem->add_option("--corrupt-scale", lemmas.corrupt_scale)->group("");  // test hook

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sub_est) return cmd_estimate(est, out);
        if (*sub_syn) return cmd_synthetic(syn, out, err);
        if (*sub_rates) return cmd_rates(rates, out);
        if (*sub_lem) return cmd_check_lemmas(lemmas, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace ramdiv::cli
