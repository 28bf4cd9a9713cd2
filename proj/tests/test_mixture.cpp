#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "ramdiv/divergence.hpp"
#include "ramdiv/errors.hpp"
#include "ramdiv/mixture.hpp"
#include "ramdiv/numerics.hpp"
#include "ramdiv/ram_mc.hpp"

using namespace ramdiv;

namespace {

DiagonalGaussian g1(double mu, double var) { return DiagonalGaussian(Vector::Constant(1, mu), Vector::Constant(1, var)); }

double normal_logpdf(double x, double mu, double var) {
    return -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * (x - mu) * (x - mu) / var;
}

LinearGaussianModel random_model(RandomStream& rng, int d, int k, double eps2) {
    Matrix a(d, k);
    Vector b(d);
    for (int i = 0; i < d; ++i) {
        b[i] = 0.3 * rng.normal();
        for (int j = 0; j < k; ++j) a(i, j) = 0.3 * rng.normal();
    }
    return LinearGaussianModel(a, b, eps2);
}

}  // namespace

TEST(Mixture, SingleInputIsConditional) {
    RandomStream rng(1);
    const auto model = random_model(rng, 2, 4, 0.25);
    const Samples xs = sample_inputs(model, rng, 1);
    const auto mix = build_mixture(model, xs);
    const auto c = conditional(model, xs.row(0).transpose());
    ASSERT_EQ(mix.size(), 1u);
    EXPECT_EQ(mix.component(0).mean(), c.mean());
    const Vector z = Vector::Constant(2, 0.3);
    EXPECT_EQ(mix.log_density(z), c.log_density(z));
}

TEST(Mixture, IdenticalRowsCollapse) {
    RandomStream rng(2);
    const auto model = random_model(rng, 2, 3, 0.5);
    Samples xs(3, 3);
    xs.rowwise() = Vector::LinSpaced(3, -1, 1).transpose();
    const auto mix = build_mixture(model, xs);
    const auto c = conditional(model, xs.row(0).transpose());
    for (double t : {-2.0, 0.0, 1.5}) {
        const Vector z = Vector::Constant(2, t);
        EXPECT_NEAR(mix.log_density(z), c.log_density(z), 1e-13);
    }
}

TEST(Mixture, ComponentMeansMatchNaiveMatvec) {
    RandomStream rng(3);
    const auto model = random_model(rng, 3, 6, 0.25);
    const Samples xs = sample_inputs(model, rng, 5);
    const auto mix = build_mixture(model, xs);
    std::vector<std::vector<double>> expected, got;
    for (Eigen::Index i = 0; i < 5; ++i) {
        std::vector<double> m(3, 0.0);
        for (int r = 0; r < 3; ++r) {
            m[r] = model.b[r];
            for (int c = 0; c < 6; ++c) m[r] += model.A(r, c) * xs(i, c);
        }
        expected.push_back(m);
        const Vector& gm = mix.component(static_cast<std::size_t>(i)).mean();
        got.push_back({gm[0], gm[1], gm[2]});
    }
    // Components are held in canonical order, compare as multisets.
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    for (std::size_t i = 0; i < 5; ++i)
        for (int r = 0; r < 3; ++r) EXPECT_NEAR(got[i][r], expected[i][r], 1e-12);
}

TEST(Mixture, DensityMatchesNaiveSum) {
    RandomStream rng(4);
    std::vector<DiagonalGaussian> comps;
    for (int i = 0; i < 4; ++i) {
        Vector m(2), v(2);
        m << rng.normal(), rng.normal();
        v << 0.3 + rng.uniform(), 0.3 + rng.uniform();
        comps.emplace_back(m, v);
    }
    const FiniteMixture mix(comps);
    for (int t = 0; t < 20; ++t) {
        Vector z(2);
        z << 2 * rng.normal(), 2 * rng.normal();
        double sum = 0.0;
        for (const auto& c : comps) {
            double lp = 0.0;
            for (int k = 0; k < 2; ++k) lp += normal_logpdf(z[k], c.mean()[k], c.variances()[k]);
            sum += std::exp(lp);
        }
        const double naive = std::log(sum / 4.0);
        EXPECT_NEAR(mix.log_density(z), naive, 1e-12 * std::abs(naive) + 1e-14);
    }
}

TEST(Mixture, SymmetricPair) {
    const FiniteMixture mix({g1(-1.3, 1.0), g1(1.3, 1.0)});
    EXPECT_NEAR(mix.log_density(Vector::Zero(1)), g1(1.3, 1.0).log_density(Vector::Zero(1)), 1e-15);
}

TEST(Mixture, PermutationInvariant) {
    const std::vector<DiagonalGaussian> a = {g1(0.1, 1), g1(-2, 0.5), g1(3, 2)};
    const std::vector<DiagonalGaussian> b = {a[2], a[0], a[1]};
    const FiniteMixture ma(a), mb(b);
    for (double z : {-3.0, 0.0, 0.7, 5.0}) {
        EXPECT_EQ(ma.log_density(Vector::Constant(1, z)), mb.log_density(Vector::Constant(1, z)));
    }
    RandomStream r1(9), r2(9);
    EXPECT_EQ(ram_mc(DivergenceSpec::kl(), ma, g1(0, 1), 64, Proposal::Mixture, r1).value,
              ram_mc(DivergenceSpec::kl(), mb, g1(0, 1), 64, Proposal::Mixture, r2).value);
}

TEST(Mixture, FarTailsStayFinite) {
    const FiniteMixture mix({g1(0, 0.01), g1(1, 0.01)});
    EXPECT_TRUE(std::isfinite(mix.log_density(Vector::Constant(1, 60.0))));
}

TEST(Mixture, InvalidConstruction) {
    EXPECT_THROW(FiniteMixture({}), std::invalid_argument);
    EXPECT_THROW(FiniteMixture({g1(0, 1), DiagonalGaussian(Vector::Zero(2), Vector::Ones(2))}), DimensionError);
}

TEST(Mixture, MarginalSlices) {
    Vector m0(2), m1(2), v(2);
    m0 << 1, 2;
    m1 << -1, 5;
    v << 0.5, 2;
    const FiniteMixture mix({DiagonalGaussian(m0, v), DiagonalGaussian(m1, v)});
    const FiniteMixture second = mix.marginal(1);
    const FiniteMixture expected({g1(2, 2), g1(5, 2)});
    EXPECT_EQ(second.dim(), 1);
    EXPECT_NEAR(second.log_density(Vector::Constant(1, 3.0)), expected.log_density(Vector::Constant(1, 3.0)), 1e-15);
}

TEST(Sampling, SingleComponentMatchesComponentSampler) {
    const auto c = g1(0.5, 2.0);
    const FiniteMixture mix({c});
    RandomStream a(77), b(77);
    EXPECT_EQ(sample_mixture(mix, a, 5), c.sample(b, 5));
    RandomStream r(1);
    EXPECT_EQ(sample_mixture(mix, r, 1).rows(), 1);
}

TEST(Sampling, ComponentProportions) {
    const FiniteMixture mix({g1(-50, 1), g1(50, 1)});
    RandomStream rng(5);
    const int count = 20000;
    const Samples s = sample_mixture(mix, rng, count);
    const double frac = (s.col(0).array() > 0).cast<double>().mean();
    EXPECT_LT(std::abs(frac - 0.5), 3.0 * std::sqrt(0.25 / count));
}

TEST(Subsample, FullAndSingle) {
    const FiniteMixture mix({g1(0, 1), g1(1, 1)});
    RandomStream rng(8);
    const auto full = subsample_mixture(mix, 2, rng);
    EXPECT_EQ(full.component(0).mean(), mix.component(0).mean());
    EXPECT_EQ(full.component(1).mean(), mix.component(1).mean());
    int first = 0;
    const int seeds = 10000;
    for (int s = 0; s < seeds; ++s) {
        RandomStream r(derive_seed(3, "sub", {static_cast<std::uint64_t>(s)}));
        first += subsample_mixture(mix, 1, r).component(0).mean()[0] == 0.0;
    }
    EXPECT_NEAR(first / static_cast<double>(seeds), 0.5, 0.02);
    EXPECT_THROW(subsample_mixture(mix, 0, rng), DomainError);
    EXPECT_THROW(subsample_mixture(mix, 3, rng), DomainError);
}

TEST(RamMc, MixtureEqualToPriorIsExactlyZero) {
    const DiagonalGaussian p(Vector::Zero(3), Vector::Ones(3));
    const FiniteMixture mix({p});
    for (const auto& spec : {DivergenceSpec::kl(), DivergenceSpec::chi_sq(), DivergenceSpec::js(),
                             DivergenceSpec::f_alpha(0.3)}) {
        for (std::int64_t m : {1, 17, 256}) {
            RandomStream rng(2);
            const auto est = ram_mc(spec, mix, p, m, Proposal::Prior, rng);
            EXPECT_EQ(est.value, 0.0);
            EXPECT_TRUE(est.finite());
            EXPECT_EQ(est.m_samples, m);
            EXPECT_EQ(est.n_components, 1);
        }
    }
}

TEST(RamMc, UnbiasedAtNOne) {
    const FiniteMixture mix({g1(1, 1)});
    for (Proposal prop : {Proposal::Prior, Proposal::Mixture}) {
        RandomStream rng(derive_seed(1, "unbiased", {static_cast<std::uint64_t>(prop)}));
        std::vector<double> v;
        for (int r = 0; r < 2000; ++r) v.push_back(ram_mc(DivergenceSpec::kl(), mix, g1(0, 1), 1024, prop, rng).value);
        const auto s = sample_stats(v);
        EXPECT_LT(std::abs(s.mean - 0.5), 3.0 * s.std_error) << to_string(prop);
    }
}

TEST(RamMc, ProposalsAgreeForChiSquare) {
    const FiniteMixture mix({g1(0.4, 0.8), g1(-0.3, 0.9), g1(0.1, 1.1)});
    std::vector<double> a, b;
    RandomStream rng(6);
    for (int r = 0; r < 200; ++r) {
        a.push_back(ram_mc(DivergenceSpec::chi_sq(), mix, g1(0, 1), 256, Proposal::Prior, rng).value);
        b.push_back(ram_mc(DivergenceSpec::chi_sq(), mix, g1(0, 1), 256, Proposal::Mixture, rng).value);
    }
    const auto sa = sample_stats(a), sb = sample_stats(b);
    EXPECT_LT(std::abs(sa.mean - sb.mean), 3.0 * std::hypot(sa.std_error, sb.std_error));
}

TEST(RamMc, FixedMixtureConvergesToReference) {
    RandomStream rng(12);
    std::vector<DiagonalGaussian> comps;
    for (int i = 0; i < 8; ++i) comps.push_back(g1(0.5 * rng.normal(), 0.5));
    const FiniteMixture mix(comps);
    const Gaussian p = g1(0, 1);
    RandomStream ref_rng(13);
    const double reference = ram_mc(DivergenceSpec::kl(), mix, p, 1 << 21, Proposal::Prior, ref_rng).value;
    for (Proposal prop : {Proposal::Prior, Proposal::Mixture}) {
        std::vector<double> v;
        for (int r = 0; r < 500; ++r) v.push_back(ram_mc(DivergenceSpec::kl(), mix, p, 128, prop, rng).value);
        const auto s = sample_stats(v);
        EXPECT_LT(std::abs(s.mean - reference), 3.0 * s.std_error + 1e-3) << to_string(prop);
    }
}

TEST(RamMc, OverflowIsReportedNonFinite) {
    // Components far narrower than the prior and far out: q/p overflows for chi^2.
    const FiniteMixture mix({DiagonalGaussian(Vector::Constant(16, 40.0), Vector::Constant(16, 1e-4))});
    const DiagonalGaussian p(Vector::Zero(16), Vector::Ones(16));
    RandomStream rng(4);
    const auto est = ram_mc(DivergenceSpec::chi_sq(), mix, p, 64, Proposal::Mixture, rng);
    EXPECT_EQ(est.outcome, Outcome::NonFinite);
    EXPECT_FALSE(est.finite());
}

TEST(RamMc, RejectsBadArguments) {
    const FiniteMixture mix({g1(0, 1)});
    RandomStream rng(1);
    EXPECT_THROW(ram_mc(DivergenceSpec::kl(), mix, g1(0, 1), 0, Proposal::Prior, rng), DomainError);
    EXPECT_THROW(ram_mc(DivergenceSpec::kl(), mix, DiagonalGaussian(Vector::Zero(2), Vector::Ones(2)), 4,
                        Proposal::Prior, rng),
                 DimensionError);
    EXPECT_EQ(parse_proposal("prior"), Proposal::Prior);
    EXPECT_EQ(parse_proposal(to_string(Proposal::Mixture)), Proposal::Mixture);
    EXPECT_THROW(parse_proposal("uniform"), UsageError);
}

TEST(Assumptions, Chi2BoundExamples) {
    const LinearGaussianModel zero(Matrix::Zero(1, 3), Vector::Zero(1), 0.25);
    const Samples xs = Samples::Zero(4, 3);
    const double expected = closed_form(DivergenceSpec::chi_sq(), g1(0, 0.25), g1(0, 1));
    EXPECT_NEAR(assumption_chi2_bound(zero, xs, g1(0, 1)), expected, 1e-14);
    const LinearGaussianModel wide(Matrix::Zero(1, 3), Vector::Zero(1), 3.0);
    EXPECT_EQ(assumption_chi2_bound(wide, xs, g1(0, 1)), std::numeric_limits<double>::infinity());
    const LinearGaussianModel same(Matrix::Zero(1, 3), Vector::Zero(1), 1.0);
    EXPECT_EQ(assumption_chi2_bound(same, xs, g1(0, 1)), 0.0);
}

TEST(Assumptions, FourthMoment) {
    const Samples xs = Samples::Zero(3, 2);
    const LinearGaussianModel same(Matrix::Zero(1, 2), Vector::Zero(1), 1.0);
    RandomStream rng(3);
    EXPECT_EQ(assumption_fourth_moment(same, xs, g1(0, 1), 100, rng), 1.0);

    const LinearGaussianModel half(Matrix::Zero(1, 2), Vector::Zero(1), 0.5);
    // Direct trapezoid of q^4 / p^3.
    double acc = 0.0;
    const double h = 40.0 / 100000;
    for (int i = 0; i <= 100000; ++i) {
        const double z = -20.0 + h * i;
        acc += std::exp(4 * normal_logpdf(z, 0, 0.5) - 3 * normal_logpdf(z, 0, 1)) * ((i == 0 || i == 100000) ? 0.5 : 1);
    }
    acc *= h;
    RandomStream r2(5);
    EXPECT_NEAR(assumption_fourth_moment(half, xs, g1(0, 1), 400000, r2), acc, 0.02 * acc);
}
