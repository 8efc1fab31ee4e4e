#pragma once

// Wrench trajectories in the tabular text format
//
//   t,fx,fy,fz,taux,tauy,tauz
//   0.00,0,0,600,1.5,-3.0,0.2
//   ...
//
// One record per line, comma-separated decimals, strictly increasing t.
// Blank lines and lines starting with '#' are ignored. Wrenches must already
// be expressed at the patch center in the surface frame.

#include <charconv>
#include <cmath>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "cwc/contact_model.hpp"
#include "cwc/errors.hpp"

namespace cwc {

inline constexpr std::string_view kTrajectoryHeader = "t,fx,fy,fz,taux,tauy,tauz";

struct TrajectoryRecord {
  double t = 0.0;
  Wrench wrench;
  std::size_t line = 0;
};

struct SkippedLine {
  std::size_t line;
  std::string reason;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  /// Lines dropped in lenient mode.
  std::vector<SkippedLine> skipped;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Strict decimal parse of the whole field; throws InvalidArgument.
inline double parse_number(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw InvalidArgument("not a number: '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) throw InvalidArgument("non-finite value: '" + std::string(field) + "'");
  return value;
}

/// Splits on commas and parses exactly `count` numbers.
inline std::vector<double> parse_number_list(std::string_view text, std::size_t count) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number(text.substr(start, comma == std::string_view::npos
                                                      ? std::string_view::npos
                                                      : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.size() != count) {
    throw InvalidArgument("expected " + std::to_string(count) + " comma-separated values, got " +
                          std::to_string(out.size()));
  }
  return out;
}

}  // namespace detail

/// Parses "fx,fy,fz,taux,tauy,tauz".
inline Wrench parse_wrench(std::string_view text) {
  const auto v = detail::parse_number_list(text, 6);
  return Wrench(v[0], v[1], v[2], v[3], v[4], v[5]);
}

/// Reads a trajectory. In strict mode the first bad line throws ParseError;
/// otherwise bad lines are recorded in `skipped` and parsing continues. A
/// missing or wrong header is always fatal.
inline Trajectory parse_trajectory(std::istream& in, bool strict = true) {
  Trajectory out;
  std::string line;
  std::size_t number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (!header_seen) {
      std::string compact;
      for (char c : text) {
        if (c != ' ' && c != '\t') compact.push_back(c);
      }
      if (compact != kTrajectoryHeader) {
        throw ParseError(number, "expected header '" + std::string(kTrajectoryHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    try {
      const auto v = detail::parse_number_list(text, 7);
      if (!out.records.empty() && !(v[0] > out.records.back().t)) {
        throw InvalidArgument("timestamp " + std::to_string(v[0]) + " does not increase");
      }
      out.records.push_back({v[0], Wrench(v[1], v[2], v[3], v[4], v[5], v[6]), number});
    } catch (const InvalidArgument& e) {
      if (strict) throw ParseError(number, e.what());
      out.skipped.push_back({number, e.what()});
    }
  }
  if (!header_seen) throw ParseError(number, "empty trajectory (no header)");
  return out;
}

}  // namespace cwc
