#include "ramdiv/records_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ramdiv/errors.hpp"
#include "ramdiv/numerics.hpp"

namespace ramdiv {
namespace {

template <class T>
T parse_number(std::string_view field, const char* name) {
    T value{};
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw UsageError(std::string("read_csv: bad ") + name + " field '" + std::string(field) + "'");
    }
    return value;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

nlohmann::ordered_json real_to_json(double x) {
    if (std::isfinite(x)) return x;
    return format_17g(x);
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<EstimateRecord>& records) {
    os << kCsvHeader << '\n';
    for (const auto& r : records) {
        os << r.divergence << ',' << r.d << ',' << format_17g(r.lambda) << ',' << r.N << ',' << r.M << ','
           << to_string(r.proposal) << ',' << r.trial << ',' << r.seed << ',' << format_17g(r.estimate) << ',';
        if (r.truth) os << format_17g(*r.truth);
        os << '\n';
    }
}

std::vector<EstimateRecord> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) throw UsageError("read_csv: missing or wrong header");
    std::vector<EstimateRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_commas(line);
        if (f.size() != 10) throw UsageError("read_csv: expected 10 fields, got " + std::to_string(f.size()));
        EstimateRecord r;
        r.divergence = std::string(f[0]);
        r.d = parse_number<int>(f[1], "d");
        r.lambda = parse_number<double>(f[2], "lambda");
        r.N = parse_number<std::int64_t>(f[3], "N");
        r.M = parse_number<std::int64_t>(f[4], "M");
        r.proposal = parse_proposal(f[5]);
        r.trial = parse_number<int>(f[6], "trial");
        r.seed = parse_number<std::uint64_t>(f[7], "seed");
        r.estimate = parse_number<double>(f[8], "estimate");
        if (!f[9].empty()) r.truth = parse_number<double>(f[9], "truth");
        out.push_back(std::move(r));
    }
    return out;
}

void write_json(std::ostream& os, const std::vector<EstimateRecord>& records) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json o;
        o["divergence"] = r.divergence;
        o["d"] = r.d;
        o["lambda"] = real_to_json(r.lambda);
        o["N"] = r.N;
        o["M"] = r.M;
        o["proposal"] = to_string(r.proposal);
        o["trial"] = r.trial;
        o["seed"] = r.seed;
        o["estimate"] = real_to_json(r.estimate);
        o["truth"] = r.truth ? real_to_json(*r.truth) : nlohmann::ordered_json(nullptr);
        arr.push_back(std::move(o));
    }
    os << arr.dump(1) << '\n';
}

}  // namespace ramdiv
