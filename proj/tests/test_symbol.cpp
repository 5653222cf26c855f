#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fraclap/oracles.hpp"
#include "fraclap/symbol_kernel.hpp"
#include "reference.hpp"

using namespace fraclap;
using std::numbers::pi;

TEST_CASE("c_alpha") {
    CHECK(c_alpha(1.0) == doctest::Approx(1.0 / pi).epsilon(1e-14));
    const double a = 0.7;
    const double want = a * std::pow(2.0, a - 1) * ref::tgamma50(0.5 + a / 2) /
                        (std::sqrt(pi) * ref::tgamma50(1 - a / 2));
    CHECK(c_alpha(a) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("symbol params validation") {
    const auto cfg = make_grid(8, 1.0);
    CHECK_THROWS_AS((void)make_symbol_params(0.0, 2, cfg, 10), std::invalid_argument);
    CHECK_THROWS_AS((void)make_symbol_params(2.0, 2, cfg, 10), std::invalid_argument);
    CHECK_THROWS_AS((void)make_symbol_params(0.5, 2, cfg, -1), std::invalid_argument);
    CHECK_THROWS_AS((void)make_symbol_params(0.5, 9, cfg, 10), std::invalid_argument);
    CHECK_THROWS_AS((void)SymbolKernel(0.5, GridConfig{7, 1.0}, 10), std::invalid_argument);
}

TEST_CASE("alpha = 1, even k is exact") {
    for (const int n : {4, 16, 64}) {
        const auto cfg = make_grid(n, 1.0);
        const SymbolKernel kernel(1.0, cfg, 0);
        for (int k = 2; k <= n - 2; k += 2) {
            const auto v = kernel.samples(k);
            double worst = 0.0;
            for (int j = 0; j < 2 * n; ++j) {
                const long double s = std::numbers::pi_v<long double> * (2 * j + 1) / (2.0L * n);
                const long double mag = k * std::sin(s) * std::sin(s);
                const std::complex<long double> want(mag * std::cos(k * s), mag * std::sin(k * s));
                worst = std::max(worst, static_cast<double>(std::abs(
                                            std::complex<long double>(v[j].real(), v[j].imag()) - want)));
            }
            CHECK(worst <= 1e-13);
        }
    }
}

TEST_CASE("alpha = 1 scales with 1/L") {
    const auto a = SymbolKernel(1.0, make_grid(8, 1.0), 200).samples(3);
    const auto b = SymbolKernel(1.0, make_grid(8, 4.0), 200).samples(3);
    for (int j = 0; j < 16; ++j) CHECK(std::abs(b[j] - a[j] / 4.0) < 1e-15);
}

TEST_CASE("alpha = 1, odd k against quadrature") {
    const auto cfg = make_grid(16, 1.0);
    const SymbolKernel kernel(1.0, cfg, 500);
    const auto x = physical_nodes(cfg);
    for (const int k : {1, 3}) {
        const auto v = kernel.samples(k);
        for (const int j : {2, 7, 12}) {
            const Complex q = quadrature_fraclap(TestFunction::mode(k, 1.0), x[j], 1.0);
            CHECK(std::abs(v[j] - q) < 1e-8);
        }
    }
}

TEST_CASE("k = 2 against the closed form") {
    ref::Gen gen(41);
    for (int trial = 0; trial < 10; ++trial) {
        const double alpha = gen.alpha();
        const auto cfg = make_grid(16, 1.0);
        const SymbolKernel kernel(alpha, cfg, 360);
        const auto v = kernel.samples(2);
        const auto s = nodes(cfg);
        double worst = 0.0;
        for (int j = 0; j < 32; ++j) worst = std::max(worst, std::abs(v[j] - closed_form_mode2(s[j], alpha)));
        CHECK(worst < 1.5e-12);
    }
}

TEST_CASE("odd k against quadrature") {
    const auto cfg = make_grid(16, 1.0);
    const auto x = physical_nodes(cfg);
    for (const double alpha : {0.45, 1.55}) {
        const SymbolKernel kernel(alpha, cfg, 500);
        for (const int k : {1, 5}) {
            const auto v = kernel.samples(k);
            for (const int j : {3, 8}) {
                const Complex q = quadrature_fraclap(TestFunction::mode(k, 1.0), x[j], alpha);
                CHECK(std::abs(v[j] - q) < 1e-8);
            }
        }
    }
}

TEST_CASE("symbol structure") {
    ref::Gen gen(42);
    for (int trial = 0; trial < 6; ++trial) {
        const double alpha = trial == 0 ? 1.0 : gen.alpha();
        const int n = gen.even(2, 40);
        const SymbolKernel kernel(alpha, make_grid(n, gen.uniform(0.5, 3.0)), 40);
        for (const auto& z : kernel.samples(0)) CHECK(z == Complex(0.0));
        for (const auto& z : kernel.samples(-n)) CHECK(z == Complex(0.0));
        for (int k = 1; k < n; ++k) {
            const auto p = kernel.samples(k);
            const auto m = kernel.samples(-k);
            for (int j = 0; j < 2 * n; ++j) {
                CHECK(m[j] == std::conj(p[j]));
                if (j < n) CHECK(p[j + n] == p[j]);
            }
        }
        CHECK_THROWS_AS((void)kernel.samples(n), std::out_of_range);
        CHECK_THROWS_AS((void)kernel.samples(-n - 1), std::out_of_range);
    }
}

TEST_CASE("symmetry fill matches FFT fill") {
    ref::Gen gen(43);
    for (int trial = 0; trial < 6; ++trial) {
        const double alpha = trial == 0 ? 1.0 : gen.alpha();
        const int n = gen.even(2, 64);
        const auto cfg = make_grid(n, 1.0);
        const SymbolKernel sym(alpha, cfg, 60, NodeFill::symmetry);
        const SymbolKernel fft(alpha, cfg, 60, NodeFill::fft);
        for (int k = 1; k < n; ++k) {
            const auto a = sym.samples(k);
            const auto b = fft.samples(k);
            const double scale = std::max(1.0, ref::max_abs(a));
            CHECK(ref::max_abs_diff(a, b) / scale < 1e-13);
        }
    }
}

TEST_CASE("single-mode wrappers") {
    const auto cfg = make_grid(8, 1.0);
    const auto tables = build_tables(0.8, 8, 30);
    const auto p = make_symbol_params(0.8, 3, cfg, 30);
    CHECK(ref::max_abs_diff(symbol_samples(p, tables), SymbolKernel(0.8, cfg, 30).samples(3)) == 0.0);
    CHECK_THROWS_AS((void)symbol_samples(p), std::invalid_argument);
    const auto p1 = make_symbol_params(1.0, 4, cfg, 30);
    CHECK(ref::max_abs_diff(symbol_samples(p1), SymbolKernel(1.0, cfg, 30).samples(4)) == 0.0);
}

TEST_CASE("a_coeff bounds") {
    const auto tables = build_tables(0.5, 8, 2);
    CHECK_NOTHROW((void)a_coeff(2, 2, 3, tables, 0.5, 8));
    CHECK_THROWS_AS((void)a_coeff(2, 500, 0, tables, 0.5, 8), std::out_of_range);
    CHECK(b_coeff(3, 0, 0, 8) == 0.0);
}

TEST_CASE("truncation is stable in l_lim") {
    const auto cfg = make_grid(16, 1.0);
    const auto a = SymbolKernel(0.5, cfg, 300).samples(2);
    const auto b = SymbolKernel(0.5, cfg, 1000).samples(2);
    CHECK(ref::max_abs_diff(a, b) < 1e-12);
}
