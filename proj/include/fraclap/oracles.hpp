#pragma once

#include <span>
#include <vector>

#include "fraclap/grid.hpp"
#include "fraclap/spectral.hpp"

namespace fraclap {

enum class TestFunctionId { u1_rational, u2_rational, u3_gaussian, mode_k };

/// Test functions with analytic first and second derivatives.
///
///   u1 = (x^2 - 1)/(x^2 + 1),  u2 = 2x/(x^2 + 1),  u3 = exp(-x^2),
///   mode_k = exp(ik arccot(x / L))   (u1 + i u2 is mode_k with k = 2, L = 1).
struct TestFunction {
    TestFunctionId id = TestFunctionId::u3_gaussian;
    int k = 2;
    double l_scale = 1.0;

    [[nodiscard]] static TestFunction u1() { return {TestFunctionId::u1_rational}; }
    [[nodiscard]] static TestFunction u2() { return {TestFunctionId::u2_rational}; }
    [[nodiscard]] static TestFunction u3() { return {TestFunctionId::u3_gaussian}; }
    [[nodiscard]] static TestFunction mode(int k, double l_scale = 1.0) {
        return {TestFunctionId::mode_k, k, l_scale};
    }

    [[nodiscard]] Complex value(double x) const;
    [[nodiscard]] Complex dx(double x) const;
    [[nodiscard]] Complex dxx(double x) const;
    [[nodiscard]] bool is_complex() const { return id == TestFunctionId::mode_k; }
};

/// (-Delta)^{alpha/2} e^{i2s} = -2 Gamma(1+alpha) (-i sin(s) e^{is})^{1+alpha}
/// for the map with L = 1, principal branch.
[[nodiscard]] Complex closed_form_mode2(double s, double alpha);

/// Kummer 1F1(a; b; z) by its power series; negative z goes through
/// 1F1(a; b; z) = e^z 1F1(b - a; b; -z). Throws std::runtime_error when the
/// series fails to converge in max_terms or overflows.
[[nodiscard]] double kummer_1f1(double a, double b, double z, int max_terms = 20000);

/// (-Delta)^{alpha/2} exp(-x^2) = 2^alpha Gamma(1/2 + alpha/2)/sqrt(pi) 1F1(1/2 + alpha/2; 1/2; -x^2).
/// For x^2 > 40 the large-argument expansion of 1F1 is summed instead.
[[nodiscard]] double closed_form_gaussian(double x, double alpha);

/// Independent value of (-Delta)^{alpha/2} f(x) by adaptive Gauss-Kronrod
/// quadrature of the first-derivative (alpha = 1, Hilbert form) or
/// second-derivative (alpha != 1) integral representation. Absolute
/// accuracy target 1e-9; throws std::runtime_error if it is not met.
[[nodiscard]] Complex quadrature_fraclap(const TestFunction& f, double x, double alpha);

enum class ScanTarget { mode2, gaussian };

struct ErrorScanResult {
    std::vector<double> alphas;
    std::vector<double> errors;  ///< max_j |numeric - exact| per alpha
    double global_max = 0.0;
    double worst_alpha = 0.0;
};

/// max over alpha and nodes of |numeric - exact|.
/// mode2: the k = 2 symbol against closed_form_mode2 (scaled by L^{-alpha}); alpha = 1 is rejected.
/// gaussian: the full matrix applied to exp(-x^2) sampled with cfg.extension.
[[nodiscard]] ErrorScanResult error_scan(ScanTarget target, const GridConfig& cfg, int l_lim,
                                         std::span<const double> alpha_grid, int workers = 0);

struct LSweepResult {
    std::vector<double> l_values;
    std::vector<double> errors;  ///< max over the alpha grid, per L
    double best_l = 0.0;
    double best_error = 0.0;
};

/// Gaussian error scan repeated over L. The matrix for each alpha is built
/// once at L = 1 and rescaled.
[[nodiscard]] LSweepResult gaussian_l_sweep(int n, Extension extension, int l_lim,
                                            std::span<const double> alpha_grid,
                                            std::span<const double> l_values, int workers = 0);

}  // namespace fraclap
