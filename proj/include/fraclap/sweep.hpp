#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace fraclap {

/// Arithmetic progression lo, lo + step, ..., hi (inclusive, snapped to 1e-9
/// so that decimal grids such as 0.05:1.95:0.05 hit their nominal values).
[[nodiscard]] std::vector<double> progression(double lo, double hi, double step);

/// Parses "a:b:step" (or a single number) into a progression.
/// Throws std::invalid_argument on malformed input or a non-positive step.
[[nodiscard]] std::vector<double> parse_progression(std::string_view text);

/// Parses "a:b" into a closed interval.
[[nodiscard]] std::pair<double, double> parse_interval(std::string_view text);

/// Drops alpha = 1 from a grid.
[[nodiscard]] std::vector<double> without_one(std::vector<double> grid);

}  // namespace fraclap
