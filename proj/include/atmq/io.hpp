#pragma once

// Text formats: empirical PDT files and locale-independent number output.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "atmq/errors.hpp"
#include "atmq/pdt.hpp"

namespace atmq {

struct IngestResult {
    TransmittanceDistribution dist;
    std::size_t bin_count = 0;
    /// Factor applied to the raw weights so that they sum to one.
    double renormalization_factor = 1.0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline bool parse_double(std::string_view text, double& out) {
    text = trim(text);
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

}  // namespace detail

/// Reads `eta,weight` rows. The header line is optional; blank lines and
/// lines starting with '#' are skipped.
inline IngestResult ingest_pdt(std::istream& in) {
    std::vector<EmpiricalBin> bins;
    std::string line;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = detail::trim(line);
        if (row.empty() || row.front() == '#') continue;
        const bool first = !seen_content;
        seen_content = true;
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError("expected two comma-separated fields", line_no);
        }
        const auto lhs = detail::trim(row.substr(0, comma));
        const auto rhs = detail::trim(row.substr(comma + 1));
        if (first && lhs == "eta" && rhs == "weight") continue;
        EmpiricalBin bin{};
        if (!detail::parse_double(lhs, bin.eta)) throw ParseError("malformed eta '" + std::string(lhs) + "'", line_no);
        if (!detail::parse_double(rhs, bin.weight)) {
            throw ParseError("malformed weight '" + std::string(rhs) + "'", line_no);
        }
        if (bin.eta < 0.0 || bin.eta > 1.0) throw ParseError("eta outside [0, 1]", line_no);
        if (bin.weight < 0.0) throw ParseError("negative weight", line_no);
        bins.push_back(bin);
    }
    if (bins.empty()) throw ParseError("no bins", line_no);
    double total = 0.0;
    for (const auto& b : bins) total += b.weight;
    if (!(total > 0.0)) throw ParseError("weights sum to zero", line_no);
    const std::size_t count = bins.size();
    return {TransmittanceDistribution::empirical(std::move(bins)), count, 1.0 / total};
}

inline IngestResult ingest_pdt_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open PDT file '" + path + "'");
    return ingest_pdt(in);
}

/// Shortest-round-trip is not used on purpose: every value is written with
/// 17 significant digits so files diff cleanly across platforms.
inline std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

}  // namespace atmq
