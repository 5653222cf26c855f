#pragma once

#include <vector>

namespace fraclap {

/// Continuation of u(s) from [0, pi] to [0, 2pi].
enum class Extension { even, odd };

/// Branch of arccot used when mapping x back to s.
/// lower: s in (0, pi), upper: s in (pi, 2pi).
enum class Branch { lower, upper };

/// Discretization of the line through x = x_c + L cot(s).
///
/// The grid carries 2N half-shifted nodes s_j = pi (2j + 1) / (2N) on
/// [0, 2pi]; the first N of them cover the real line once, in decreasing x.
struct GridConfig {
    int n = 0;
    double l_scale = 1.0;
    double x_center = 0.0;
    Extension extension = Extension::even;

    /// Throws std::invalid_argument unless n >= 2, n even, l_scale > 0.
    void validate() const;

    [[nodiscard]] int size() const { return 2 * n; }

    friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

/// Builds and validates a grid.
[[nodiscard]] GridConfig make_grid(int n, double l_scale, double x_center = 0.0,
                                   Extension extension = Extension::even);

[[nodiscard]] double node(const GridConfig& cfg, int j);

/// All 2N nodes s_j.
[[nodiscard]] std::vector<double> nodes(const GridConfig& cfg);

/// x = x_c + L cot(s). Throws std::domain_error when s is a multiple of pi.
[[nodiscard]] double s_to_x(const GridConfig& cfg, double s);

/// Inverse of s_to_x on the requested branch.
[[nodiscard]] double x_to_s(const GridConfig& cfg, double x, Branch branch = Branch::lower);

/// x_j = x_c + L cot(s_j) for all 2N nodes (x_{j+N} = x_j).
[[nodiscard]] std::vector<double> physical_nodes(const GridConfig& cfg);

[[nodiscard]] Extension parse_extension(const char* name);
[[nodiscard]] const char* to_string(Extension e);

}  // namespace fraclap
