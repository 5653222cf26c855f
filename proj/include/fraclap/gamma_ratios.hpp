#pragma once

#include <vector>

namespace fraclap {

/// Gamma function by a Lanczos approximation (g = 7, 9 terms) with the
/// reflection formula below 1/2. Throws std::domain_error at the poles
/// z = 0, -1, -2, ...
[[nodiscard]] double gamma_fn(double z);

/// Offsets (a, b) of a ratio family Gamma(a + m) / Gamma(b + m).
struct RatioOffsets {
    double num;
    double den;
};

/// Gamma((-1+alpha)/2 + m) / Gamma((3-alpha)/2 + m), indexed by |l|.
[[nodiscard]] RatioOffsets offsets_a(double alpha);
/// Gamma((-1-alpha)/2 + m) / Gamma((3+alpha)/2 + m), indexed by |k/2 - l| (k even).
[[nodiscard]] RatioOffsets offsets_b(double alpha);
/// Gamma(-alpha/2 + m) / Gamma(2+alpha/2 + m), indexed by |k/2 - l| - 1/2 (k odd).
[[nodiscard]] RatioOffsets offsets_c(double alpha);

/// Precomputed gamma ratios feeding the symbol sums. Every family is built
/// from a single ratio of gamma values and then advanced with
/// vec[m+1] = vec[m] (a+m)/(b+m), so nothing overflows however long the
/// tables get.
struct GammaRatioTables {
    double alpha = 0.0;
    int n = 0;
    int l_lim = 0;
    std::vector<double> vec_a;
    std::vector<double> vec_b;
    std::vector<double> vec_c;
};

/// Smallest lengths that cover every index touched by an N x l_lim assembly.
[[nodiscard]] size_t required_length_a(int n, int l_lim);
[[nodiscard]] size_t required_length_bc(int n, int l_lim);

/// Builds the three families. Each table gets N extra entries past its
/// required length. Throws std::invalid_argument for alpha outside (0, 2),
/// for alpha == 1 (no tables needed there), or for a bad n / l_lim.
[[nodiscard]] GammaRatioTables build_tables(double alpha, int n, int l_lim);

}  // namespace fraclap
