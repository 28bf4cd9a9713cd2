#include "ramdiv/divergence.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ramdiv/errors.hpp"
#include "ramdiv/numerics.hpp"

namespace ramdiv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = std::numbers::ln2;

double softplus(double l) { return l > 0.0 ? l + std::log1p(std::exp(-l)) : std::log1p(std::exp(l)); }

// 1 / (1 - 1/beta) and 2^(1/beta - 1), the f_beta constants.
double fbeta_scale(double beta) { return beta / (beta - 1.0); }
double fbeta_shift(double beta) { return std::exp2(1.0 / beta - 1.0); }

double fbeta_f0(double beta, double x) {
    const double c = fbeta_scale(beta);
    const double s = fbeta_shift(beta);
    if (x > 1.0) {
        // (1 + x^b)^(1/b) = x (1 + x^-b)^(1/b), no overflow for large x.
        return c * (x * std::pow(1.0 + std::pow(x, -beta), 1.0 / beta) - s * (1.0 + x));
    }
    return c * (std::pow(1.0 + std::pow(x, beta), 1.0 / beta) - s * (1.0 + x));
}

double falpha_f0(double alpha, double x) {
    return 4.0 / (1.0 - alpha * alpha) * (1.0 - std::pow(x, 0.5 * (1.0 + alpha))) -
           2.0 * (x - 1.0) / (alpha - 1.0);
}

// Squared normalized derivative, the g of the bound lemmas.
double g_sq(const DivergenceSpec& spec, double x) {
    const double d = f0_prime_normalized(spec, x);
    return d * d;
}

struct Moments {
    FullGaussian q;
    FullGaussian p;
};

Moments as_full_pair(const Gaussian& q, const Gaussian& p) {
    if (dim(q) != dim(p)) {
        throw DimensionError("closed_form: q has dimension " + std::to_string(dim(q)) + ", p has " +
                             std::to_string(dim(p)));
    }
    return Moments{to_full(q), to_full(p)};
}

double kl_closed_form(const FullGaussian& q, const FullGaussian& p) {
    const auto Lp = p.cholesky().triangularView<Eigen::Lower>();
    const double trace = Lp.solve(q.cholesky()).squaredNorm();
    const double maha = Lp.solve(p.mean() - q.mean()).squaredNorm();
    const double d = static_cast<double>(q.dim());
    return std::max(0.0, 0.5 * (trace + maha - d + p.log_det() - q.log_det()));
}

double hellinger_closed_form(const FullGaussian& q, const FullGaussian& p) {
    Matrix avg = 0.5 * (q.covariance() + p.covariance());
    Eigen::LLT<Matrix> llt(avg);
    if (llt.info() != Eigen::Success) throw NumericalError("closed_form: averaged covariance not SPD");
    const Matrix L = llt.matrixL();
    const double log_det_avg = 2.0 * L.diagonal().array().log().sum();
    const Vector diff = q.mean() - p.mean();
    const double maha = L.triangularView<Eigen::Lower>().solve(diff).squaredNorm();
    const double log_bc = 0.25 * q.log_det() + 0.25 * p.log_det() - 0.5 * log_det_avg - 0.125 * maha;
    // Generator 2(1 - sqrt x) integrates to 2(1 - BC).
    return std::clamp(-2.0 * std::expm1(log_bc), 0.0, 2.0);
}

double chi_sq_closed_form(const FullGaussian& q, const FullGaussian& p) {
    const Eigen::Index d = q.dim();
    const Matrix I = Matrix::Identity(d, d);
    const Matrix q_prec = Eigen::LLT<Matrix>(q.covariance()).solve(I);
    const Matrix p_prec = Eigen::LLT<Matrix>(p.covariance()).solve(I);
    Matrix lambda = 2.0 * q_prec - p_prec;
    lambda = 0.5 * (lambda + lambda.transpose()).eval();
    Eigen::LLT<Matrix> llt(lambda);
    if (llt.info() != Eigen::Success) return kInf;
    const Matrix L = llt.matrixL();
    const double log_det_lambda = 2.0 * L.diagonal().array().log().sum();
    const Vector eta = 2.0 * q_prec * q.mean() - p_prec * p.mean();
    const double log_integral = -q.log_det() - 0.5 * log_det_lambda + 0.5 * p.log_det() +
                                0.5 * p.mean().dot(p_prec * p.mean()) - q.mean().dot(q_prec * q.mean()) +
                                0.5 * eta.dot(llt.solve(eta));
    return std::max(0.0, std::expm1(log_integral));
}

}  // namespace

DivergenceSpec DivergenceSpec::f_beta(double beta) {
    if (!(beta > 0.5) || beta == 1.0 || !std::isfinite(beta)) {
        throw DomainError("f_beta requires beta in (1/2, inf) and beta != 1");
    }
    return DivergenceSpec(DivergenceKind::FBeta, beta);
}

DivergenceSpec DivergenceSpec::f_alpha(double alpha) {
    if (!(alpha > -1.0 && alpha < 1.0)) throw DomainError("f_alpha requires alpha in (-1, 1)");
    return DivergenceSpec(DivergenceKind::FAlpha, alpha);
}

double DivergenceSpec::beta() const {
    if (kind_ != DivergenceKind::FBeta) throw UsageError("beta() on a non-f_beta divergence");
    return param_;
}

double DivergenceSpec::alpha() const {
    if (kind_ != DivergenceKind::FAlpha) throw UsageError("alpha() on a non-alpha divergence");
    return param_;
}

DivergenceSpec DivergenceSpec::parse(std::string_view text) {
    if (text == "kl") return kl();
    if (text == "tv") return tv();
    if (text == "chisq") return chi_sq();
    if (text == "sqhellinger" || text == "h2") return sq_hellinger();
    if (text == "js") return js();
    const auto colon = text.find(':');
    if (colon != std::string_view::npos) {
        const auto head = text.substr(0, colon);
        const auto tail = text.substr(colon + 1);
        double value = 0.0;
        const auto res = std::from_chars(tail.data(), tail.data() + tail.size(), value);
        if (res.ec == std::errc() && res.ptr == tail.data() + tail.size()) {
            if (head == "fbeta") return f_beta(value);
            if (head == "falpha") return f_alpha(value);
        }
    }
    throw UsageError("unknown divergence '" + std::string(text) + "'");
}

std::string DivergenceSpec::label() const {
    switch (kind_) {
        case DivergenceKind::KL: return "kl";
        case DivergenceKind::TV: return "tv";
        case DivergenceKind::ChiSq: return "chisq";
        case DivergenceKind::SqHellinger: return "sqhellinger";
        case DivergenceKind::JS: return "js";
        case DivergenceKind::FBeta: return "fbeta:" + format_shortest(param_);
        case DivergenceKind::FAlpha: return "falpha:" + format_shortest(param_);
    }
    return "?";
}

double f0(const DivergenceSpec& spec, double x) {
    if (!(x >= 0.0)) throw DomainError("f0: ratio must be nonnegative");
    if (x == 1.0) return 0.0;
    switch (spec.kind()) {
        case DivergenceKind::KL: return x == 0.0 ? 1.0 : x * std::log(x) - x + 1.0;
        case DivergenceKind::TV: return 0.5 * std::abs(1.0 - x);
        case DivergenceKind::ChiSq: return (x - 1.0) * (x - 1.0);
        case DivergenceKind::SqHellinger: return 2.0 * (1.0 - std::sqrt(x));
        case DivergenceKind::JS:
            if (x == 0.0) return kLn2;
            return (1.0 + x) * std::log(2.0 / (1.0 + x)) + x * std::log(x);
        case DivergenceKind::FBeta: return fbeta_f0(spec.beta(), x);
        case DivergenceKind::FAlpha: return falpha_f0(spec.alpha(), x);
    }
    return 0.0;
}

double f0_prime(const DivergenceSpec& spec, double x) {
    if (!(x > 0.0)) throw DomainError("f0_prime: ratio must be positive");
    switch (spec.kind()) {
        case DivergenceKind::KL: return std::log(x);
        case DivergenceKind::TV: return x < 1.0 ? -0.5 : (x > 1.0 ? 0.5 : 0.0);
        case DivergenceKind::ChiSq: return 2.0 * (x - 1.0);
        case DivergenceKind::SqHellinger: return -1.0 / std::sqrt(x);
        case DivergenceKind::JS: return std::log(2.0 * x / (1.0 + x));
        case DivergenceKind::FBeta: {
            const double b = spec.beta();
            return fbeta_scale(b) * (std::pow(1.0 + std::pow(x, -b), (1.0 - b) / b) - fbeta_shift(b));
        }
        case DivergenceKind::FAlpha: {
            const double a = spec.alpha();
            return 2.0 / (1.0 - a) * (1.0 - std::pow(x, 0.5 * (a - 1.0)));
        }
    }
    return 0.0;
}

double f0_prime_normalized(const DivergenceSpec& spec, double x) {
    if (spec.kind() == DivergenceKind::SqHellinger) {
        if (!(x > 0.0)) throw DomainError("f0_prime: ratio must be positive");
        return 1.0 - 1.0 / std::sqrt(x);
    }
    return f0_prime(spec, x);
}

double f0_at_log_ratio(const DivergenceSpec& spec, double l) {
    if (std::isnan(l) || l == kInf) throw DomainError("f0_at_log_ratio: log ratio must be < +inf");
    if (l == 0.0) return 0.0;
    if (l == -kInf) return f0(spec, 0.0);
    const double x = std::exp(l);
    switch (spec.kind()) {
        case DivergenceKind::KL: return x * (l - 1.0) + 1.0;
        case DivergenceKind::ChiSq: return std::expm1(l) * std::expm1(l);
        case DivergenceKind::SqHellinger: return -2.0 * std::expm1(0.5 * l);
        case DivergenceKind::JS:
            if (l > 0.0) return (1.0 + x) * kLn2 - l - (1.0 + x) * std::log1p(std::exp(-l));
            return (1.0 + x) * (kLn2 - std::log1p(x)) + x * l;
        default: return f0(spec, x);
    }
}

double f0_over_ratio_at_log_ratio(const DivergenceSpec& spec, double l) {
    if (std::isnan(l) || l == kInf) throw DomainError("f0_over_ratio_at_log_ratio: log ratio must be < +inf");
    if (l == 0.0) return 0.0;
    if (l == -kInf) return kInf;
    const double inv = std::exp(-l);
    switch (spec.kind()) {
        case DivergenceKind::KL: return l - 1.0 + inv;
        case DivergenceKind::TV: return 0.5 * std::abs(1.0 - inv);
        case DivergenceKind::ChiSq: return std::exp(l) - 2.0 + inv;
        case DivergenceKind::SqHellinger: return 2.0 * (inv - std::exp(-0.5 * l));
        case DivergenceKind::JS:
            if (l > 0.0) return (1.0 + inv) * (kLn2 - std::log1p(inv)) - l * inv;
            return (1.0 + inv) * (kLn2 - softplus(l)) + l;
        case DivergenceKind::FBeta: {
            const double b = spec.beta();
            return fbeta_scale(b) *
                   (std::pow(1.0 + std::exp(-b * l), 1.0 / b) - fbeta_shift(b) * (1.0 + inv));
        }
        case DivergenceKind::FAlpha: {
            const double a = spec.alpha();
            return 4.0 / (1.0 - a * a) * (inv - std::exp(0.5 * (a - 1.0) * l)) -
                   2.0 * (1.0 - inv) / (a - 1.0);
        }
    }
    return 0.0;
}

bool has_closed_form(const DivergenceSpec& spec) {
    const auto k = spec.kind();
    return k == DivergenceKind::KL || k == DivergenceKind::ChiSq || k == DivergenceKind::SqHellinger;
}

double closed_form(const DivergenceSpec& spec, const Gaussian& q, const Gaussian& p) {
    if (!has_closed_form(spec)) {
        throw UnsupportedError("closed_form: no closed form for " + spec.label());
    }
    const auto pair = as_full_pair(q, p);
    switch (spec.kind()) {
        case DivergenceKind::KL: return kl_closed_form(pair.q, pair.p);
        case DivergenceKind::ChiSq: return chi_sq_closed_form(pair.q, pair.p);
        case DivergenceKind::SqHellinger: return hellinger_closed_form(pair.q, pair.p);
        default: break;
    }
    throw UnsupportedError("closed_form: unreachable");
}

double quadrature_divergence(const DivergenceSpec& spec, const std::function<double(double)>& q_logpdf,
                             const std::function<double(double)>& p_logpdf, double lo, double hi,
                             int n_points) {
    if (n_points < 1000) throw DomainError("quadrature_divergence: n_points must be >= 1000");
    if (!(lo < hi)) throw DomainError("quadrature_divergence: need lo < hi");
    const double h = (hi - lo) / static_cast<double>(n_points - 1);
    double acc = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double z = (i == n_points - 1) ? hi : lo + h * static_cast<double>(i);
        const double lq = q_logpdf(z);
        const double lp = p_logpdf(z);
        double term = 0.0;
        if (lp == -kInf) {
            // p vanishes: only the q-mass term survives, f(x)/x -> f'(inf).
            if (lq != -kInf) throw NumericalError("quadrature_divergence: q not absolutely continuous w.r.t. p");
        } else if (lq > lp && spec.kind() == DivergenceKind::ChiSq) {
            term = std::exp(2.0 * lq - lp) - 2.0 * std::exp(lq) + std::exp(lp);
        } else if (lq > lp) {
            term = f0_over_ratio_at_log_ratio(spec, lq - lp) * std::exp(lq);
        } else {
            term = f0_at_log_ratio(spec, lq - lp) * std::exp(lp);
        }
        if (!std::isfinite(term)) {
            throw NumericalError("quadrature_divergence: non-finite integrand at z = " + format_shortest(z));
        }
        acc += (i == 0 || i == n_points - 1) ? 0.5 * term : term;
    }
    return acc * h;
}

bool has_lemma_bound(const DivergenceSpec& spec) {
    const auto k = spec.kind();
    return k != DivergenceKind::TV && k != DivergenceKind::ChiSq;
}

double lemma_bound_h(const DivergenceSpec& spec, double delta, double x) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("lemma_bound_h: delta must be in (0, 1)");
    if (!(x >= 0.0)) throw DomainError("lemma_bound_h: x must be nonnegative");
    switch (spec.kind()) {
        case DivergenceKind::KL: {
            const double base = std::log(delta) * std::log(delta);
            constexpr double e = std::numbers::e;
            if (x <= e) return base + 2.0 * x / e;
            const double lx = std::log(x);
            return base + 2.0 + lx * lx - 1.0;
        }
        case DivergenceKind::SqHellinger: return (x - 1.0) * (x - 1.0) / delta;
        case DivergenceKind::FAlpha: {
            const double a = spec.alpha();
            const double num = std::pow(delta, 0.5 * (a - 1.0)) - 1.0;
            const double den = (a - 1.0) * (delta - 1.0);
            return 4.0 * num * num / (den * den) * (x - 1.0) * (x - 1.0);
        }
        case DivergenceKind::JS: return g_sq(spec, delta) + 4.0 * kLn2 * kLn2;
        case DivergenceKind::FBeta: {
            const double b = spec.beta();
            const double c = fbeta_scale(b);
            const double s = fbeta_shift(b);
            const double lim_inf = c * c * (1.0 - s) * (1.0 - s);
            if (b < 1.0) return g_sq(spec, delta) + lim_inf;
            const double lim_zero = c * c * s * s;
            return std::max(lim_zero, lim_inf);
        }
        default: break;
    }
    throw UnsupportedError("lemma_bound_h: no bound for " + spec.label());
}

}  // namespace ramdiv
