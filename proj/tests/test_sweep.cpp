#include <cmath>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "ramdiv/errors.hpp"
#include "ramdiv/rates.hpp"
#include "ramdiv/records_io.hpp"
#include "ramdiv/sweep.hpp"
#include "ramdiv/synthetic.hpp"

using namespace ramdiv;

namespace {

SweepConfig small_config() {
    SweepConfig cfg;
    cfg.divergences = {DivergenceSpec::kl(), DivergenceSpec::js()};
    cfg.dims = {1, 3};
    cfg.lambdas = {-1.0, 0.5};
    cfg.Ns = {1, 8};
    cfg.Ms = {16};
    cfg.proposals = {Proposal::Prior, Proposal::Mixture};
    cfg.trials = 2;
    cfg.master_seed = 99;
    return cfg;
}

EstimateRecord record(std::int64_t n, double estimate, double truth) {
    EstimateRecord r;
    r.divergence = "chisq";
    r.d = 1;
    r.lambda = 0.5;
    r.N = n;
    r.M = 8;
    r.estimate = estimate;
    r.truth = truth;
    return r;
}

}  // namespace

TEST(Synthetic, FamilyIsDeterministicAndNormalized) {
    const auto a = make_family(4, 3);
    const auto b = make_family(4, 3);
    EXPECT_EQ(a.A0, b.A0);
    EXPECT_EQ(a.v, b.v);
    EXPECT_NEAR(a.A0.norm(), 1.0, 1e-14);
    EXPECT_NEAR(a.v.norm(), 1.0, 1e-14);
    EXPECT_NE(make_family(4, 4).A0, a.A0);
    const auto one = make_family(1, 3);
    Matrix e1 = Matrix::Zero(1, 20);
    e1(0, 0) = 1.0;
    EXPECT_EQ(one.A1, e1);
}

TEST(Synthetic, ModelAtLambda) {
    const auto fam = make_family(1, 5);
    const auto m0 = model_at(fam, 0.0);
    EXPECT_EQ(m0.A, 0.5 * fam.A1);
    EXPECT_EQ(m0.b, Vector::Zero(1));
    EXPECT_DOUBLE_EQ(model_at(fam, 1.0).A(0, 0), 0.5 + fam.A0(0, 0));
    EXPECT_EQ(model_at(fam, 1.5).b, -model_at(fam, -1.5).b);
    EXPECT_DOUBLE_EQ(m0.noise_var, 0.25);
}

TEST(Sweep, SingleCellSingleRecord) {
    SweepConfig cfg;
    cfg.divergences = {DivergenceSpec::kl()};
    cfg.dims = {2};
    cfg.lambdas = {0.0};
    cfg.Ns = {4};
    cfg.Ms = {8};
    cfg.proposals = {Proposal::Mixture};
    const auto recs = run_sweep(cfg);
    ASSERT_EQ(recs.size(), 1u);
    ASSERT_TRUE(recs[0].truth.has_value());
    const auto fam = make_family(2, 0);
    EXPECT_NEAR(*recs[0].truth, closed_form(DivergenceSpec::kl(), marginal(model_at(fam, 0.0)), standard_prior(2)),
                1e-15);
}

TEST(Sweep, DeterministicAcrossRunsAndThreads) {
    const auto cfg = small_config();
    const auto a = run_sweep(cfg, 1);
    EXPECT_EQ(a.size(), 2u * 2 * 2 * 2 * 1 * 2 * 2);
    EXPECT_EQ(a, run_sweep(cfg, 1));
    EXPECT_EQ(a, run_sweep(cfg, 4));
}

TEST(Sweep, AddingCellsKeepsExistingRecords) {
    auto cfg = small_config();
    const auto base = run_sweep(cfg);
    cfg.lambdas.push_back(2.0);
    cfg.Ns.insert(cfg.Ns.begin(), 3);
    const auto wider = run_sweep(cfg);
    for (const auto& r : base) {
        EXPECT_NE(std::find(wider.begin(), wider.end(), r), wider.end());
    }
}

TEST(Sweep, TruthAvailability) {
    const auto fam1 = make_family(1, 1);
    const auto fam3 = make_family(3, 1);
    EXPECT_TRUE(synthetic_truth(DivergenceSpec::js(), model_at(fam1, 1.0), standard_prior(1)).has_value());
    EXPECT_FALSE(synthetic_truth(DivergenceSpec::js(), model_at(fam3, 1.0), standard_prior(3)).has_value());
    EXPECT_TRUE(synthetic_truth(DivergenceSpec::sq_hellinger(), model_at(fam3, 1.0), standard_prior(3)).has_value());
}

TEST(Sweep, InvalidConfig) {
    auto cfg = small_config();
    cfg.Ns.clear();
    EXPECT_THROW(run_sweep(cfg), UsageError);
    cfg = small_config();
    cfg.trials = 0;
    EXPECT_THROW(run_sweep(cfg), UsageError);
}

TEST(BiasCurve, ZeroAndExactDecay) {
    std::vector<EstimateRecord> zero = {record(1, 2.0, 2.0), record(1, 2.0, 2.0), record(4, 2.0, 2.0)};
    for (const auto& p : bias_curve(zero)) EXPECT_EQ(p.bias, 0.0);
    std::vector<EstimateRecord> decay;
    for (std::int64_t n : {1, 2, 4, 8}) decay.push_back(record(n, 1.0 + 3.0 / n, 1.0));
    const auto curve = bias_curve(decay);
    ASSERT_EQ(curve.size(), 4u);
    for (const auto& p : curve) EXPECT_NEAR(p.bias, 3.0 / p.N, 1e-15);
    auto mixed = decay;
    mixed[1].divergence = "kl";
    EXPECT_THROW(bias_curve(mixed), UsageError);
}

TEST(Slope, Examples) {
    const std::vector<double> ns = {1, 2, 4, 8, 16};
    std::vector<double> inv, root, flat;
    for (double n : ns) {
        inv.push_back(2.5 / n);
        root.push_back(2.5 / std::sqrt(n));
        flat.push_back(2.5);
    }
    EXPECT_NEAR(fit_log_slope(ns, inv), -1.0, 1e-12);
    EXPECT_NEAR(fit_log_slope(ns, root), -0.5, 1e-12);
    EXPECT_NEAR(fit_log_slope(ns, flat), 0.0, 1e-12);
    EXPECT_THROW(fit_log_slope({1, 2, 4}, {1, -1, 1}), DomainError);
    EXPECT_THROW(fit_log_slope({1, 2}, {1, 1}), UsageError);
}

TEST(Chi2Law, ZeroWhenConditionalIsPrior) {
    const LinearGaussianModel m(Matrix::Zero(1, 20), Vector::Zero(1), 1.0);
    RandomStream rng(1);
    EXPECT_EQ(chi2_bias_prediction(m, standard_prior(1), 1000, rng).coefficient, 0.0);
}

TEST(Chi2Law, PositiveOnSyntheticModel) {
    const auto fam = make_family(1, 2);
    RandomStream rng(1);
    const auto law = chi2_bias_prediction(model_at(fam, 0.5), standard_prior(1), 5000, rng);
    EXPECT_GT(law.coefficient, 0.0);
    EXPECT_NEAR(law(4.0), law.coefficient / 4.0, 1e-15);
}

TEST(Records, CsvRoundTrip) {
    auto recs = run_sweep(small_config());
    recs[0].estimate = std::numeric_limits<double>::infinity();
    recs[1].truth.reset();
    std::stringstream ss;
    write_csv(ss, recs);
    EXPECT_EQ(ss.str().substr(0, kCsvHeader.size()), kCsvHeader);
    const auto back = read_csv(ss);
    EXPECT_EQ(back, recs);
}

TEST(Records, JsonFields) {
    auto recs = run_sweep(small_config());
    recs[1].truth.reset();
    std::stringstream ss;
    write_json(ss, recs);
    const auto doc = nlohmann::json::parse(ss.str());
    ASSERT_EQ(doc.size(), recs.size());
    EXPECT_EQ(doc[0]["divergence"], recs[0].divergence);
    EXPECT_EQ(doc[0]["seed"].get<std::uint64_t>(), recs[0].seed);
    EXPECT_TRUE(doc[1]["truth"].is_null());
}

TEST(Rates, TableShapes) {
    EXPECT_EQ(reference_bias_rates(DivergenceSpec::kl()), "N^-1 (Thm 1) / N^-1/3 log N (Thm 2)");
    const auto chi = rate_column(DivergenceSpec::chi_sq());
    EXPECT_FALSE(chi.bias_chi2_assumption.known());
    EXPECT_EQ(chi.bias_fourth_moment.exponent, -1.0);
    const auto a = rate_column(DivergenceSpec::f_alpha(0.5));
    ASSERT_TRUE(a.bias_fourth_moment.exponent.has_value());
    EXPECT_NEAR(*a.bias_fourth_moment.exponent, -1.5 / 5.5, 1e-15);
    ASSERT_TRUE(a.psi.exponent.has_value());
    EXPECT_NEAR(*a.psi.exponent, -0.5 / 5.5, 1e-15);
    EXPECT_EQ(rate_table().size(), 8u);
    EXPECT_TRUE(bias_slope_band(DivergenceSpec::chi_sq())->contains(-1.0));
    EXPECT_FALSE(bias_slope_band(DivergenceSpec::kl())->contains(-0.4));
    EXPECT_FALSE(bias_slope_band(DivergenceSpec::js()).has_value());
}
