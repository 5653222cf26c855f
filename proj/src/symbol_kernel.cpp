#include "fraclap/symbol_kernel.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

namespace fraclap {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw std::invalid_argument("alpha must lie in (0, 2), got " + std::to_string(alpha));
    }
}

double parity_sign(std::int64_t v) { return (v % 2 == 0) ? 1.0 : -1.0; }

// Order of l1 used for every inner sum: |l1| descending, smallest terms first.
template <typename F>
void for_each_l1_descending(int l_lim, F&& f) {
    for (int m = l_lim; m >= 1; --m) {
        f(m);
        f(-m);
    }
    f(0);
}

}  // namespace

double c_alpha(double alpha) {
    check_alpha(alpha);
    return alpha * std::pow(2.0, alpha - 1.0) * gamma_fn(0.5 + alpha / 2.0) /
           (std::sqrt(std::numbers::pi) * gamma_fn(1.0 - alpha / 2.0));
}

SymbolParams make_symbol_params(double alpha, int k, const GridConfig& cfg, int l_lim) {
    check_alpha(alpha);
    cfg.validate();
    if (l_lim < 0) throw std::invalid_argument("l_lim must be >= 0");
    if (k < -cfg.n || k >= cfg.n) throw std::invalid_argument("mode k outside [-N, N-1]");
    return {alpha, k, cfg, l_lim, c_alpha(alpha)};
}

double a_coeff(int k, int l1, int l2, const GammaRatioTables& tables, double alpha, int n) {
    if (k < 1) throw std::invalid_argument("a_coeff: k must be >= 1");
    const std::int64_t l = static_cast<std::int64_t>(l1) * n + l2;
    const double kd = k;
    const double poly = parity_sign(l1) * ((1.0 - alpha) * kd * kd - 4.0 * kd * static_cast<double>(l));
    const double ga = tables.vec_a.at(static_cast<size_t>(std::llabs(l)));
    if (k % 2 == 0) {
        return poly * ga * tables.vec_b.at(static_cast<size_t>(std::llabs(k / 2 - l)));
    }
    const std::int64_t d = k - 2 * l;  // odd, never zero
    const double gc = tables.vec_c.at(static_cast<size_t>((std::llabs(d) - 1) / 2));
    return (d > 0 ? 1.0 : -1.0) * poly * ga * gc;
}

double b_coeff(int k, int l1, int l2, int n) {
    if (k % 2 == 0) throw std::invalid_argument("b_coeff: k must be odd");
    const std::int64_t l = static_cast<std::int64_t>(l1) * n + l2;
    if (l == 0) return 0.0;
    const double d = static_cast<double>(k - 2 * l);
    return 4.0 * parity_sign(l1) * (l > 0 ? 1.0 : -1.0) / (d * (d * d - 4.0));
}

SymbolKernel::SymbolKernel(double alpha, const GridConfig& cfg, int l_lim, NodeFill fill)
    : SymbolKernel(alpha, cfg, l_lim, nullptr, fill) {}

SymbolKernel::SymbolKernel(double alpha, const GridConfig& cfg, int l_lim,
                           std::shared_ptr<const GammaRatioTables> tables, NodeFill fill)
    : alpha_(alpha), cfg_(cfg), l_lim_(l_lim), fill_(fill), tables_(std::move(tables)) {
    check_alpha(alpha_);
    cfg_.validate();
    if (l_lim_ < 0) throw std::invalid_argument("l_lim must be >= 0");
    const int n = cfg_.n;

    if (alpha_ != 1.0) {
        c_alpha_ = c_alpha(alpha_);
        if (!tables_) {
            tables_ = std::make_shared<const GammaRatioTables>(build_tables(alpha_, n, l_lim_));
        }
        if (tables_->alpha != alpha_) {
            throw std::invalid_argument("SymbolKernel: tables built for a different alpha");
        }
        if (tables_->vec_a.size() < required_length_a(n, l_lim_) ||
            tables_->vec_b.size() < required_length_bc(n, l_lim_) ||
            tables_->vec_c.size() < required_length_bc(n, l_lim_)) {
            throw std::out_of_range("SymbolKernel: gamma tables too short for (N, l_lim)");
        }
        sin_pow_.resize(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) sin_pow_[j] = std::pow(std::sin(node(cfg_, j)), alpha_ - 1.0);
    } else {
        tables_.reset();
    }

    unit_cos_.resize(static_cast<size_t>(2 * n));
    unit_sin_.resize(static_cast<size_t>(2 * n));
    for (int m = 0; m < 2 * n; ++m) {
        const double theta = std::numbers::pi * m / n;
        unit_cos_[m] = std::cos(theta);
        unit_sin_[m] = std::sin(theta);
    }
}

void SymbolKernel::series_sums(int k, std::span<double> sums) const {
    const int n = cfg_.n;
    const int half = n / 2;
    std::fill(sums.begin(), sums.end(), 0.0);

    if (alpha_ == 1.0) {
        for_each_l1_descending(l_lim_, [&](int l1) {
            const double sign = parity_sign(l1);
            const std::int64_t l0 = static_cast<std::int64_t>(l1) * n - half;
            for (int i = 0; i < n; ++i) {
                const std::int64_t l = l0 + i;
                if (l == 0) continue;
                const double d = static_cast<double>(k - 2 * l);
                sums[i] += 4.0 * sign * (l > 0 ? 1.0 : -1.0) / (d * (d * d - 4.0));
            }
        });
        return;
    }

    const double* va = tables_->vec_a.data();
    const double* vb = tables_->vec_b.data();
    const double* vc = tables_->vec_c.data();
    const double kd = k;
    const double base = (1.0 - alpha_) * kd * kd;
    const bool even = k % 2 == 0;
    const std::int64_t k_half = k / 2;

    for_each_l1_descending(l_lim_, [&](int l1) {
        const double sign = parity_sign(l1);
        const std::int64_t l0 = static_cast<std::int64_t>(l1) * n - half;
        if (even) {
            for (int i = 0; i < n; ++i) {
                const std::int64_t l = l0 + i;
                const double poly = base - 4.0 * kd * static_cast<double>(l);
                sums[i] += sign * poly * va[std::llabs(l)] * vb[std::llabs(k_half - l)];
            }
        } else {
            for (int i = 0; i < n; ++i) {
                const std::int64_t l = l0 + i;
                const std::int64_t d = k - 2 * l;
                const double poly = base - 4.0 * kd * static_cast<double>(l);
                const double g = va[std::llabs(l)] * vc[(std::llabs(d) - 1) / 2];
                sums[i] += (d > 0 ? sign : -sign) * poly * g;
            }
        }
    });
}

void SymbolKernel::spread_over_nodes(std::span<const double> sums, std::span<Complex> t) const {
    // t_j = sum_{l2=-N/2}^{N/2-1} sums[l2 + N/2] e^{i 2 l2 s_j}, j < N,
    // with e^{i 2 l2 s_j} = e^{i pi l2 (2j+1) / N}.
    const int n = cfg_.n;
    const int half = n / 2;
    const std::int64_t period = 2 * n;

    if (fill_ == NodeFill::fft) {
        ComplexVector v(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            const int l2 = i - half;
            const auto m = static_cast<size_t>(((l2 % period) + period) % period);
            v[static_cast<size_t>(((l2 % n) + n) % n)] = sums[i] * Complex(unit_cos_[m], unit_sin_[m]);
        }
        ComplexVector out;
        Eigen::FFT<double> fft;
        fft.SetFlag(Eigen::FFT<double>::Unscaled);
        fft.inv(out, v);
        std::copy(out.begin(), out.end(), t.begin());
        return;
    }

    for (int j = 0; j < half; ++j) {
        const std::int64_t step = 2 * j + 1;
        std::int64_t idx = ((-half * step) % period + period) % period;
        double re = 0.0;
        double im = 0.0;
        for (int i = 0; i < n; ++i) {
            re += sums[i] * unit_cos_[idx];
            im += sums[i] * unit_sin_[idx];
            idx += step;
            if (idx >= period) idx -= period;
        }
        t[j] = Complex(re, im);
        t[n - 1 - j] = Complex(re, -im);
    }
}

void SymbolKernel::positive_mode(int k, std::span<Complex> out) const {
    const int n = cfg_.n;
    const double len = cfg_.l_scale;

    if (alpha_ == 1.0 && k % 2 == 0) {
        // k s_j = pi k (2j + 1) / (2N); reduce k (2j + 1) mod 4N exactly first
        const long double pi = std::numbers::pi_v<long double>;
        const std::int64_t period = 4 * static_cast<std::int64_t>(n);
        for (int j = 0; j < n; ++j) {
            const std::int64_t odd = 2 * static_cast<std::int64_t>(j) + 1;
            const long double sn = std::sin(pi * odd / (2.0L * n));
            const long double phase = pi * ((k * odd) % period) / (2.0L * n);
            const long double mag = k * sn * sn / len;
            out[j] = Complex(static_cast<double>(mag * std::cos(phase)),
                             static_cast<double>(mag * std::sin(phase)));
            out[j + n] = out[j];
        }
        return;
    }

    std::vector<double> sums(static_cast<size_t>(n));
    ComplexVector t(static_cast<size_t>(n));
    series_sums(k, sums);
    spread_over_nodes(sums, t);

    if (alpha_ == 1.0) {
        const double kd = k;
        const Complex pref(0.0, kd / (len * std::numbers::pi));
        const double lead = -2.0 / (kd * kd - 4.0);
        for (int j = 0; j < n; ++j) out[j] = pref * (lead - t[j]);
    } else {
        double pref = c_alpha_ / (8.0 * std::pow(len, alpha_));
        if (k % 2 == 0) {
            pref /= std::tan(std::numbers::pi * alpha_ / 2.0);
            for (int j = 0; j < n; ++j) out[j] = pref * sin_pow_[j] * t[j];
        } else {
            for (int j = 0; j < n; ++j) out[j] = Complex(0.0, pref * sin_pow_[j]) * t[j];
        }
    }
    for (int j = 0; j < n; ++j) out[j + n] = out[j];
}

void SymbolKernel::samples(int k, std::span<Complex> out) const {
    const int n = cfg_.n;
    if (out.size() != static_cast<size_t>(2 * n)) {
        throw std::invalid_argument("SymbolKernel::samples: output must hold 2N values");
    }
    if (k < -n || k >= n) {
        throw std::out_of_range("SymbolKernel: mode " + std::to_string(k) + " outside [-N, N-1]");
    }
    if (k == 0 || k == -n) {
        std::fill(out.begin(), out.end(), Complex{0.0});
        return;
    }
    positive_mode(std::abs(k), out);
    if (k < 0) {
        for (auto& v : out) v = std::conj(v);
    }
}

ComplexVector SymbolKernel::samples(int k) const {
    ComplexVector out(static_cast<size_t>(cfg_.size()));
    samples(k, out);
    return out;
}

ComplexVector symbol_samples(const SymbolParams& params, const GammaRatioTables& tables,
                             NodeFill fill) {
    if (params.alpha == 1.0) return symbol_samples(params, fill);
    auto shared = std::make_shared<const GammaRatioTables>(tables);
    return SymbolKernel(params.alpha, params.cfg, params.l_lim, std::move(shared), fill)
        .samples(params.k);
}

ComplexVector symbol_samples(const SymbolParams& params, NodeFill fill) {
    if (params.alpha != 1.0) {
        throw std::invalid_argument("symbol_samples: gamma tables required for alpha != 1");
    }
    return SymbolKernel(params.alpha, params.cfg, params.l_lim, fill).samples(params.k);
}

}  // namespace fraclap
