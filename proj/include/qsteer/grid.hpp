#pragma once

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qsteer {

// A parsed numeric CLI argument: a single scalar, or the inclusive grid
// "start:stop:step". was_grid distinguishes the two so callers can apply
// laxer domain policies to grids (drop out-of-range points) than to scalars
// (hard error).
struct GridSpec {
  std::vector<double> values;
  bool was_grid = false;
};

namespace detail {

inline double parse_double_strict(const std::string& s, const std::string& what) {
  if (s.empty()) throw invalid_input_error(what + ": empty number");
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + s.size())
    throw invalid_input_error(what + ": could not parse '" + s + "' as a number");
  if (!std::isfinite(v)) throw invalid_input_error(what + ": '" + s + "' is not finite");
  return v;
}

}  // namespace detail

// Grid points are start + i*step (not a running sum), kept while they stay
// within half a step of stop, so "0:1:0.05" includes 1.0 exactly despite
// accumulated binary round-off in 20 * 0.05.
inline GridSpec parse_grid(const std::string& text) {
  GridSpec spec;
  const std::size_t c1 = text.find(':');
  if (c1 == std::string::npos) {
    spec.values.push_back(detail::parse_double_strict(text, "grid"));
    return spec;
  }
  const std::size_t c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos)
    throw invalid_input_error("grid: expected 'start:stop:step', got '" + text + "'");
  const double start = detail::parse_double_strict(text.substr(0, c1), "grid start");
  const double stop = detail::parse_double_strict(text.substr(c1 + 1, c2 - c1 - 1), "grid stop");
  const double step = detail::parse_double_strict(text.substr(c2 + 1), "grid step");
  if (!(step > 0.0)) throw invalid_input_error("grid: step must be > 0, got '" + text + "'");
  if (stop < start)
    throw invalid_input_error("grid: stop must be >= start, got '" + text + "'");
  if ((stop - start) / step > 1e7)
    throw invalid_input_error("grid: '" + text + "' describes more than 1e7 points");
  spec.was_grid = true;
  for (std::size_t i = 0;; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v > stop + step / 2) break;
    spec.values.push_back(v);
  }
  return spec;
}

}  // namespace qsteer
