#include "fraclap/oracles.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fraclap/operator_matrix.hpp"
#include "fraclap/parallel.hpp"

namespace fraclap {

namespace {

constexpr double kPi = std::numbers::pi;

// The oracles deliberately use std::tgamma, not the library's gamma_fn.
double c_alpha_ref(double alpha) {
    return alpha * std::pow(2.0, alpha - 1.0) * std::tgamma(0.5 + alpha / 2.0) /
           (std::sqrt(kPi) * std::tgamma(1.0 - alpha / 2.0));
}

double gaussian_asymptotic(double y, double alpha) {
    // 1F1(a; 1/2; -y) ~ Gamma(1/2)/Gamma(1/2 - a) y^{-a} sum_s (a)_s (a + 1/2)_s / s! y^{-s}
    const double a = 0.5 + alpha / 2.0;
    const double c = 1.0 + alpha / 2.0;
    double term = 1.0;
    double sum = 1.0;
    for (int s = 0; s < 200; ++s) {
        const double next = term * (a + s) * (c + s) / ((s + 1.0) * y);
        if (std::abs(next) >= std::abs(term)) break;  // past the smallest term
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::pow(2.0, alpha) * std::tgamma(a) / std::tgamma(-alpha / 2.0) * std::pow(y, -a) * sum;
}

struct Integrator {
    double tolerance = 1e-12;
    double achieved = 0.0;
    boost::math::quadrature::tanh_sinh<double> endpoint;

    // adaptive Gauss-Kronrod for smooth pieces
    template <typename F>
    double smooth(F f, double lo, double hi) {
        double err = 0.0;
        const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            f, lo, hi, 20, tolerance, &err);
        achieved += err;
        return v;
    }

    // tanh-sinh for pieces with an algebraic endpoint singularity
    template <typename F>
    double singular(F f, double lo, double hi) {
        double err = 0.0;
        const double v = endpoint.integrate(f, lo, hi, tolerance, &err);
        achieved += err;
        return v;
    }
};

// integral over [0, inf) of g(t) t^{1-alpha}, split at 1 and at a point past
// the features of g; the tail uses t = t_far cot(theta).
template <typename G>
double half_line(G g, double alpha, double t_far, Integrator& quad) {
    auto weighted = [&](double t) { return g(t) * std::pow(t, 1.0 - alpha); };
    double total = 0.0;
    if (alpha > 1.5) {
        // t = tau^{1/(2-alpha)} turns t^{1-alpha} dt into dtau / (2 - alpha).
        const double p = 1.0 / (2.0 - alpha);
        total += quad.smooth([&](double tau) { return g(std::pow(tau, p)) * p; }, 0.0, 1.0);
    } else {
        total += quad.singular(weighted, 0.0, 1.0);
    }
    total += quad.smooth(weighted, 1.0, t_far);
    total += quad.singular(
        [&](double theta) {
            const double sn = std::sin(theta);
            const double t = t_far * std::cos(theta) / sn;
            if (!(t < 1e100)) return 0.0;  // integrand ~ t^{-alpha} out here
            return weighted(t) * t_far / (sn * sn);
        },
        0.0, kPi / 4.0);
    return total;
}

}  // namespace

Complex TestFunction::value(double x) const {
    switch (id) {
        case TestFunctionId::u1_rational: return (x * x - 1.0) / (x * x + 1.0);
        case TestFunctionId::u2_rational: return 2.0 * x / (x * x + 1.0);
        case TestFunctionId::u3_gaussian: return std::exp(-x * x);
        case TestFunctionId::mode_k: return std::polar(1.0, k * std::atan2(l_scale, x));
    }
    return 0.0;
}

Complex TestFunction::dx(double x) const {
    const double q = x * x + 1.0;
    switch (id) {
        case TestFunctionId::u1_rational: return 4.0 * x / (q * q);
        case TestFunctionId::u2_rational: return 2.0 * (1.0 - x * x) / (q * q);
        case TestFunctionId::u3_gaussian: return -2.0 * x * std::exp(-x * x);
        case TestFunctionId::mode_k: {
            const double ds = -l_scale / (l_scale * l_scale + x * x);
            return Complex(0.0, k * ds) * value(x);
        }
    }
    return 0.0;
}

Complex TestFunction::dxx(double x) const {
    const double q = x * x + 1.0;
    switch (id) {
        case TestFunctionId::u1_rational: return (4.0 - 12.0 * x * x) / (q * q * q);
        case TestFunctionId::u2_rational: return 4.0 * x * (x * x - 3.0) / (q * q * q);
        case TestFunctionId::u3_gaussian: return (4.0 * x * x - 2.0) * std::exp(-x * x);
        case TestFunctionId::mode_k: {
            const double r = l_scale * l_scale + x * x;
            const double ds = -l_scale / r;
            const double dds = 2.0 * l_scale * x / (r * r);
            return Complex(-static_cast<double>(k) * k * ds * ds, k * dds) * value(x);
        }
    }
    return 0.0;
}

Complex closed_form_mode2(double s, double alpha) {
    const Complex base = Complex(0.0, -std::sin(s)) * std::polar(1.0, s);
    return -2.0 * std::tgamma(1.0 + alpha) * std::pow(base, 1.0 + alpha);
}

double kummer_1f1(double a, double b, double z, int max_terms) {
    if (b <= 0.0 && b == std::floor(b)) {
        throw std::domain_error("kummer_1f1: b is a non-positive integer");
    }
    if (z < 0.0) return std::exp(z) * kummer_1f1(b - a, b, -z, max_terms);

    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < max_terms; ++n) {
        term *= (a + n) / (b + n) * z / (n + 1.0);
        sum += term;
        if (!std::isfinite(sum)) {
            throw std::runtime_error("kummer_1f1: series overflow at z = " + std::to_string(z));
        }
        const bool decaying = std::abs((a + n + 1.0) * z) < std::abs((b + n + 1.0) * (n + 2.0));
        if (term == 0.0 || (decaying && std::abs(term) <= 1e-16 * std::abs(sum))) return sum;
    }
    throw std::runtime_error("kummer_1f1: no convergence within " + std::to_string(max_terms) +
                             " terms at z = " + std::to_string(z));
}

double closed_form_gaussian(double x, double alpha) {
    const double y = x * x;
    if (y > 40.0) return gaussian_asymptotic(y, alpha);
    return std::pow(2.0, alpha) * std::tgamma(0.5 + alpha / 2.0) / std::sqrt(kPi) *
           kummer_1f1(0.5 + alpha / 2.0, 0.5, -y);
}

Complex quadrature_fraclap(const TestFunction& f, double x, double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw std::invalid_argument("quadrature_fraclap: alpha must lie in (0, 2)");
    }
    const double t_far = std::max(4.0, 2.0 * std::abs(x) + 4.0);
    Complex result;
    Integrator quad;
    for (int part = 0; part < (f.is_complex() ? 2 : 1); ++part) {
        auto pick = [part](Complex v) { return part == 0 ? v.real() : v.imag(); };
        double value = 0.0;
        if (alpha <= 1.5) {
            // c_alpha / alpha int_0^inf (u'(x - t) - u'(x + t)) t^{-alpha} dt; at alpha = 1
            // this is the principal-value Hilbert form.
            auto h = [&](double t) {
                if (t < 1e-6) return -2.0 * pick(f.dxx(x));
                return pick(f.dx(x - t) - f.dx(x + t)) / t;
            };
            value = c_alpha_ref(alpha) / alpha * half_line(h, alpha, t_far, quad);
        } else {
            // integrated by parts once more, which makes the weight at 0 removable
            auto g = [&](double t) { return pick(f.dxx(x - t) + f.dxx(x + t)); };
            value = c_alpha_ref(alpha) / (alpha * (1.0 - alpha)) * half_line(g, alpha, t_far, quad);
        }
        if (part == 0) {
            result.real(value);
        } else {
            result.imag(value);
        }
    }
    if (!(quad.achieved <= 1e-9)) {
        char msg[96];
        std::snprintf(msg, sizeof msg, "quadrature_fraclap: error estimate %.3e above 1e-9",
                      quad.achieved);
        throw std::runtime_error(msg);
    }
    return result;
}

ErrorScanResult error_scan(ScanTarget target, const GridConfig& cfg, int l_lim,
                           std::span<const double> alpha_grid, int workers) {
    cfg.validate();
    ErrorScanResult r;
    r.alphas.assign(alpha_grid.begin(), alpha_grid.end());
    r.errors.assign(alpha_grid.size(), 0.0);
    const auto s = nodes(cfg);
    const auto x = physical_nodes(cfg);

    if (target == ScanTarget::mode2) {
        for (double a : alpha_grid) {
            if (a == 1.0) throw std::invalid_argument("error_scan: mode2 excludes alpha = 1");
        }
    }

    parallel_for(static_cast<int>(alpha_grid.size()), workers, [&](int i) {
        const double alpha = alpha_grid[static_cast<size_t>(i)];
        double err = 0.0;
        if (target == ScanTarget::mode2) {
            const SymbolKernel kernel(alpha, cfg, l_lim);
            const auto num = kernel.samples(2);
            const double scale = std::pow(cfg.l_scale, -alpha);
            for (size_t j = 0; j < num.size(); ++j) {
                err = std::max(err, std::abs(num[j] - scale * closed_form_mode2(s[j], alpha)));
            }
        } else {
            const auto m = build_matrix(cfg, alpha, l_lim, BuildOptions{1, NodeFill::symmetry});
            std::vector<double> half(static_cast<size_t>(cfg.n));
            for (int j = 0; j < cfg.n; ++j) half[j] = std::exp(-x[j] * x[j]);
            const auto samples = extend(std::span<const double>(half), cfg.extension);
            const auto lap = fractional_laplacian(samples, cfg, alpha, m);
            for (size_t j = 0; j < lap.values.size(); ++j) {
                err = std::max(err, std::abs(lap.values[j] - closed_form_gaussian(x[j], alpha)));
            }
        }
        r.errors[static_cast<size_t>(i)] = err;
    });

    for (size_t i = 0; i < r.errors.size(); ++i) {
        if (r.errors[i] > r.global_max || i == 0) {
            r.global_max = r.errors[i];
            r.worst_alpha = r.alphas[i];
        }
    }
    return r;
}

LSweepResult gaussian_l_sweep(int n, Extension extension, int l_lim,
                              std::span<const double> alpha_grid,
                              std::span<const double> l_values, int workers) {
    LSweepResult r;
    r.l_values.assign(l_values.begin(), l_values.end());
    std::vector<std::vector<double>> per_alpha(alpha_grid.size());

    parallel_for(static_cast<int>(alpha_grid.size()), workers, [&](int i) {
        const double alpha = alpha_grid[static_cast<size_t>(i)];
        const auto base = build_matrix(make_grid(n, 1.0, 0.0, extension), alpha, l_lim,
                                       BuildOptions{1, NodeFill::symmetry});
        auto& errs = per_alpha[static_cast<size_t>(i)];
        errs.resize(l_values.size());
        for (size_t li = 0; li < l_values.size(); ++li) {
            const auto cfg = make_grid(n, l_values[li], 0.0, extension);
            const auto m = base.for_grid(cfg);
            const auto x = physical_nodes(cfg);
            std::vector<double> half(static_cast<size_t>(n));
            for (int j = 0; j < n; ++j) half[j] = std::exp(-x[j] * x[j]);
            const auto samples = extend(std::span<const double>(half), extension);
            const auto lap = fractional_laplacian(samples, cfg, alpha, m);
            double err = 0.0;
            for (size_t j = 0; j < lap.values.size(); ++j) {
                err = std::max(err, std::abs(lap.values[j] - closed_form_gaussian(x[j], alpha)));
            }
            errs[li] = err;
        }
    });

    r.errors.assign(l_values.size(), 0.0);
    for (const auto& errs : per_alpha) {
        for (size_t li = 0; li < errs.size(); ++li) r.errors[li] = std::max(r.errors[li], errs[li]);
    }
    for (size_t li = 0; li < r.errors.size(); ++li) {
        if (li == 0 || r.errors[li] < r.best_error) {
            r.best_error = r.errors[li];
            r.best_l = r.l_values[li];
        }
    }
    return r;
}

}  // namespace fraclap
