#include "fraclap/gamma_ratios.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fraclap {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// sin(pi z) with the argument reduced exactly, so that values near the
// integers keep their relative accuracy.
double sin_pi(double z) {
    const double r = z - 2.0 * std::round(0.5 * z);  // r in [-1, 1], exact
    if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
    if (r > 0.5) return std::sin(std::numbers::pi * (1.0 - r));
    if (r < -0.5) return -std::sin(std::numbers::pi * (1.0 + r));
    return std::sin(std::numbers::pi * r);
}

double lanczos(double z) {
    // Gamma(z) for z >= 1/2.
    const double x = z - 1.0;
    double acc = kLanczosCoeffs[0];
    for (size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
        acc += kLanczosCoeffs[i] / (x + static_cast<double>(i));
    }
    const double t = x + kLanczosG + 0.5;
    // t^(x+1/2) e^{-t} split in two halves to postpone overflow.
    const double half_pow = std::pow(t, 0.5 * (x + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half_pow * (half_pow * std::exp(-t)) * acc;
}

std::vector<double> ratio_table(RatioOffsets off, size_t length) {
    // running product in long double; in double the rounding piles up to
    // about m ulps by entry m
    std::vector<double> v(length);
    long double acc = static_cast<long double>(gamma_fn(off.num)) / gamma_fn(off.den);
    v[0] = static_cast<double>(acc);
    for (size_t m = 0; m + 1 < length; ++m) {
        const long double md = static_cast<long double>(m);
        acc *= (off.num + md) / (off.den + md);
        v[m + 1] = static_cast<double>(acc);
    }
    return v;
}

}  // namespace

double gamma_fn(double z) {
    if (!std::isfinite(z)) {
        throw std::domain_error("gamma_fn: non-finite argument");
    }
    if (z <= 0.0 && z == std::floor(z)) {
        throw std::domain_error("gamma_fn: pole at non-positive integer");
    }
    if (z < 0.5) {
        return std::numbers::pi / (sin_pi(z) * lanczos(1.0 - z));
    }
    return lanczos(z);
}

RatioOffsets offsets_a(double alpha) { return {(-1.0 + alpha) / 2.0, (3.0 - alpha) / 2.0}; }
RatioOffsets offsets_b(double alpha) { return {(-1.0 - alpha) / 2.0, (3.0 + alpha) / 2.0}; }
RatioOffsets offsets_c(double alpha) { return {-alpha / 2.0, 2.0 + alpha / 2.0}; }

size_t required_length_a(int n, int l_lim) {
    // max |l1 N + l2| = l_lim N + N/2
    return static_cast<size_t>(l_lim) * n + n / 2 + 1;
}

size_t required_length_bc(int n, int l_lim) {
    return static_cast<size_t>(l_lim + 1) * n;
}

GammaRatioTables build_tables(double alpha, int n, int l_lim) {
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw std::invalid_argument("build_tables: alpha must lie in (0, 2)");
    }
    if (alpha == 1.0) {
        throw std::invalid_argument("build_tables: alpha = 1 uses the closed Hilbert form");
    }
    if (n < 2 || n % 2 != 0 || l_lim < 0) {
        throw std::invalid_argument("build_tables: need even n >= 2 and l_lim >= 0");
    }
    const auto margin = static_cast<size_t>(n);
    GammaRatioTables t;
    t.alpha = alpha;
    t.n = n;
    t.l_lim = l_lim;
    t.vec_a = ratio_table(offsets_a(alpha), required_length_a(n, l_lim) + margin);
    t.vec_b = ratio_table(offsets_b(alpha), required_length_bc(n, l_lim) + margin);
    t.vec_c = ratio_table(offsets_c(alpha), required_length_bc(n, l_lim) + margin);
    return t;
}

}  // namespace fraclap
