#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "ramdiv/gaussian.hpp"

namespace ramdiv {

enum class DivergenceKind { KL, TV, ChiSq, SqHellinger, JS, FBeta, FAlpha };

/// Which f-divergence, with its parameter for the f_beta and alpha families.
///
/// The generator f0 of each kind is convex on (0, inf), vanishes at 1, and is
/// the normalized form f(x) - f'(1)(x - 1) except for the squared Hellinger
/// generator 2(1 - sqrt(x)), whose slope at 1 is -1. Both give the same
/// divergence; see f0_prime_normalized for the slope-free derivative.
class DivergenceSpec {
public:
    static DivergenceSpec kl() { return DivergenceSpec(DivergenceKind::KL, 0.0); }
    static DivergenceSpec tv() { return DivergenceSpec(DivergenceKind::TV, 0.0); }
    static DivergenceSpec chi_sq() { return DivergenceSpec(DivergenceKind::ChiSq, 0.0); }
    static DivergenceSpec sq_hellinger() { return DivergenceSpec(DivergenceKind::SqHellinger, 0.0); }
    static DivergenceSpec js() { return DivergenceSpec(DivergenceKind::JS, 0.0); }
    /// beta in (1/2, inf), beta != 1.
    static DivergenceSpec f_beta(double beta);
    /// alpha in (-1, 1).
    static DivergenceSpec f_alpha(double alpha);

    /// Accepts kl, tv, chisq, sqhellinger (alias h2), js, fbeta:<beta>, falpha:<alpha>.
    static DivergenceSpec parse(std::string_view text);

    DivergenceKind kind() const { return kind_; }
    double beta() const;
    double alpha() const;
    /// Inverse of parse().
    std::string label() const;

    bool operator==(const DivergenceSpec&) const = default;

private:
    DivergenceSpec(DivergenceKind kind, double param) : kind_(kind), param_(param) {}

    DivergenceKind kind_;
    double param_;
};

/// Generator f0(x), x >= 0. Limits are used at x = 0; f0(1) == 0 exactly.
double f0(const DivergenceSpec& spec, double x);

/// Derivative of f0 at x > 0. TV uses the sub-gradient 0 at x = 1.
double f0_prime(const DivergenceSpec& spec, double x);

/// f0'(x) - f0'(1): the derivative of the normalized generator, zero at 1.
double f0_prime_normalized(const DivergenceSpec& spec, double x);

/// f0(exp(log_ratio)), accurate for |log_ratio| in the hundreds.
/// log_ratio == -inf gives the x = 0 limit; +inf is rejected.
double f0_at_log_ratio(const DivergenceSpec& spec, double log_ratio);

/// f0(x) / x at x = exp(log_ratio): the importance-weighted term when
/// sampling from the numerator density.
double f0_over_ratio_at_log_ratio(const DivergenceSpec& spec, double log_ratio);

/// True for KL, ChiSq and SqHellinger.
bool has_closed_form(const DivergenceSpec& spec);

/// D_f(q || p) for two Gaussians. ChiSq returns +inf when 2 Sq^-1 - Sp^-1 is
/// not positive definite. Throws UnsupportedError for kinds without a closed
/// form and DimensionError on mismatched dimensions.
double closed_form(const DivergenceSpec& spec, const Gaussian& q, const Gaussian& p);

/// Trapezoid rule for \int f0(q/p) p dz over [lo, hi] with n_points nodes
/// (n_points >= 1000). Throws NumericalError on a non-finite integrand.
double quadrature_divergence(const DivergenceSpec& spec, const std::function<double(double)>& q_logpdf,
                             const std::function<double(double)>& p_logpdf, double lo, double hi,
                             int n_points);

/// True when lemma_bound_h is defined for the kind.
bool has_lemma_bound(const DivergenceSpec& spec);

/// Upper bound h_delta(x) of the squared normalized derivative on [delta, inf):
///   KL           log^2(delta) + 2x/e on [0, e], log^2(delta) + 1 + log^2(x) beyond
///   SqHellinger  (x - 1)^2 / delta
///   FAlpha       4 (delta^((a-1)/2) - 1)^2 / ((a-1)^2 (delta-1)^2) * (x - 1)^2
///   JS           g(delta) + 4 log^2 2
///   FBeta        g(delta) + lim_{x->inf} g   for beta < 1,
///                max(lim_{x->0} g, lim_{x->inf} g) for beta > 1
/// where g = f0_prime_normalized^2. Throws UnsupportedError for TV and ChiSq.
double lemma_bound_h(const DivergenceSpec& spec, double delta, double x);

}  // namespace ramdiv
