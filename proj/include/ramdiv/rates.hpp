#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ramdiv/divergence.hpp"

namespace ramdiv {

/// A rate of the form N^exponent, optionally times log N. Empty `text` means
/// no rate is known for that cell.
struct RateShape {
    std::string text;
    std::optional<double> exponent;
    bool log_factor = false;

    bool known() const { return exponent.has_value(); }
};

/// Published rates for one divergence column: the bias under the chi^2
/// assumption, the bias under the fourth-moment assumption, and the
/// concentration rate psi(N).
struct RateColumn {
    std::string column;
    RateShape bias_chi2_assumption;
    RateShape bias_fourth_moment;
    RateShape psi;
};

/// The eight columns: KL, TV, chisq, H2, JS, fbeta(1/2<b<1), fbeta(1<b<inf), falpha.
/// The falpha entries depend on alpha and are left symbolic here.
const std::vector<RateColumn>& rate_table();

/// The column for `spec`, with the alpha-dependent exponents evaluated.
RateColumn rate_column(const DivergenceSpec& spec);

/// Human-readable pair "<chi2-assumption rate> (Thm 1) / <fourth-moment rate> (Thm 2)".
std::string reference_bias_rates(const DivergenceSpec& spec);

/// Acceptance band for a fitted bias slope. Kinds without an asserted band
/// return nullopt (their slopes are recorded only).
struct SlopeBand {
    double lo;
    double hi;
    bool contains(double s) const { return s >= lo && s <= hi; }
};
std::optional<SlopeBand> bias_slope_band(const DivergenceSpec& spec);

}  // namespace ramdiv
