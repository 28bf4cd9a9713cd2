#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "ramdiv/sweep.hpp"

namespace ramdiv {

inline constexpr std::string_view kCsvHeader = "divergence,d,lambda,N,M,proposal,trial,seed,estimate,truth";

/// One header line then one line per record. Reals use 17 significant digits
/// with '.' decimals; an unavailable truth is an empty field, non-finite
/// values are written as inf / -inf / nan.
void write_csv(std::ostream& os, const std::vector<EstimateRecord>& records);

/// Inverse of write_csv. Throws UsageError on malformed input.
std::vector<EstimateRecord> read_csv(std::istream& is);

/// JSON array of objects with the CSV field names. Finite reals are numbers in
/// shortest round-trip form; non-finite reals are the strings "inf", "-inf",
/// "nan"; an unavailable truth is null.
void write_json(std::ostream& os, const std::vector<EstimateRecord>& records);

}  // namespace ramdiv
