#include "ramdiv/rates.hpp"

#include <cmath>
#include <limits>

#include "ramdiv/numerics.hpp"

namespace ramdiv {
namespace {

RateShape none() { return RateShape{"-", std::nullopt, false}; }
RateShape pow_rate(std::string text, double e, bool log_factor = false) {
    return RateShape{std::move(text), e, log_factor};
}

}  // namespace

const std::vector<RateColumn>& rate_table() {
    static const std::vector<RateColumn> table = {
        {"KL", pow_rate("N^-1", -1.0), pow_rate("N^-1/3 log N", -1.0 / 3.0, true),
         pow_rate("N^-1/6 log N", -1.0 / 6.0, true)},
        {"TV", pow_rate("N^-1/2", -0.5), pow_rate("N^-1/2", -0.5), pow_rate("N^-1/2", -0.5)},
        {"chisq", none(), pow_rate("N^-1", -1.0), pow_rate("N^-1/2", -0.5)},
        {"H2", pow_rate("N^-1/2", -0.5), pow_rate("N^-1/5", -0.2), none()},
        {"JS", pow_rate("N^-1/4", -0.25), pow_rate("N^-1/3 log N", -1.0 / 3.0, true),
         pow_rate("N^-1/6 log N", -1.0 / 6.0, true)},
        {"fbeta(1/2<beta<1)", pow_rate("N^-1/4", -0.25), pow_rate("N^-1/3", -1.0 / 3.0),
         pow_rate("N^-1/6", -1.0 / 6.0)},
        {"fbeta(1<beta<inf)", pow_rate("N^-1/4", -0.25), pow_rate("N^-1/2", -0.5), pow_rate("N^-1/2", -0.5)},
        {"falpha(-1<alpha<1)", none(), RateShape{"N^-(alpha+1)/(alpha+5)", std::nullopt, false},
         RateShape{"N^((1-3alpha)/(alpha+5)) for 1/3<alpha<1", std::nullopt, false}},
    };
    return table;
}

RateColumn rate_column(const DivergenceSpec& spec) {
    const auto& t = rate_table();
    switch (spec.kind()) {
        case DivergenceKind::KL: return t[0];
        case DivergenceKind::TV: return t[1];
        case DivergenceKind::ChiSq: return t[2];
        case DivergenceKind::SqHellinger: return t[3];
        case DivergenceKind::JS: return t[4];
        case DivergenceKind::FBeta: return spec.beta() < 1.0 ? t[5] : t[6];
        case DivergenceKind::FAlpha: {
            const double a = spec.alpha();
            RateColumn c = t[7];
            const double bias_e = -(a + 1.0) / (a + 5.0);
            c.bias_fourth_moment = pow_rate("N^" + format_shortest(bias_e), bias_e);
            if (a > 1.0 / 3.0) {
                const double psi_e = (1.0 - 3.0 * a) / (a + 5.0);
                c.psi = pow_rate("N^" + format_shortest(psi_e), psi_e);
            } else {
                c.psi = none();
            }
            return c;
        }
    }
    return t[0];
}

std::string reference_bias_rates(const DivergenceSpec& spec) {
    const RateColumn c = rate_column(spec);
    return c.bias_chi2_assumption.text + " (Thm 1) / " + c.bias_fourth_moment.text + " (Thm 2)";
}

std::optional<SlopeBand> bias_slope_band(const DivergenceSpec& spec) {
    switch (spec.kind()) {
        case DivergenceKind::ChiSq: return SlopeBand{-1.15, -0.85};
        case DivergenceKind::KL: return SlopeBand{-std::numeric_limits<double>::infinity(), -0.5};
        default: return std::nullopt;
    }
}

}  // namespace ramdiv
