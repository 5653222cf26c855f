#include "fraclap/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

namespace fraclap {

namespace {

Complex half_shift_phase(int k, int n) {
    return std::polar(1.0, std::numbers::pi * k / (2.0 * n));
}

void check_length(size_t got, const GridConfig& cfg, const char* what) {
    if (got != static_cast<size_t>(cfg.size())) {
        throw std::invalid_argument(std::string(what) + ": expected " +
                                    std::to_string(cfg.size()) + " samples, got " +
                                    std::to_string(got));
    }
}

template <typename T>
std::vector<T> extend_impl(std::span<const T> half, Extension extension) {
    const size_t n = half.size();
    std::vector<T> out(2 * n);
    const double sign = extension == Extension::even ? 1.0 : -1.0;
    for (size_t j = 0; j < n; ++j) {
        out[j] = half[j];
        out[2 * n - 1 - j] = sign * half[j];
    }
    return out;
}

}  // namespace

SpectralCoefficients::SpectralCoefficients(GridConfig grid, ComplexVector values)
    : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    check_length(values_.size(), grid_, "SpectralCoefficients");
}

Complex SpectralCoefficients::mode(int k) const {
    if (k < -grid_.n || k >= grid_.n) {
        throw std::out_of_range("mode " + std::to_string(k) + " outside [-N, N-1]");
    }
    return values_[static_cast<size_t>(mode_slot(k, grid_.n))];
}

SpectralCoefficients forward(std::span<const Complex> samples, const GridConfig& cfg) {
    cfg.validate();
    check_length(samples.size(), cfg, "forward");
    const int m = cfg.size();
    ComplexVector in(samples.begin(), samples.end());
    ComplexVector out;
    Eigen::FFT<double> fft;
    fft.fwd(out, in);
    for (int idx = 0; idx < m; ++idx) {
        const int k = slot_mode(idx, cfg.n);
        out[idx] = out[idx] * std::conj(half_shift_phase(k, cfg.n)) / static_cast<double>(m);
    }
    return {cfg, std::move(out)};
}

SpectralCoefficients forward(std::span<const double> samples, const GridConfig& cfg) {
    ComplexVector c(samples.begin(), samples.end());
    return forward(std::span<const Complex>(c), cfg);
}

ComplexVector inverse(const SpectralCoefficients& coeffs) {
    const int n = coeffs.n();
    const int m = 2 * n;
    ComplexVector in(coeffs.values().begin(), coeffs.values().end());
    for (int idx = 0; idx < m; ++idx) {
        in[idx] *= half_shift_phase(slot_mode(idx, n), n);
    }
    ComplexVector out;
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    fft.inv(out, in);
    return out;
}

std::vector<double> extend(std::span<const double> half, Extension extension) {
    return extend_impl(half, extension);
}

ComplexVector extend(std::span<const Complex> half, Extension extension) {
    return extend_impl(half, extension);
}

SpectralCoefficients krasny_filter(const SpectralCoefficients& coeffs, double threshold) {
    if (!(threshold >= 0.0)) {
        throw std::invalid_argument("krasny_filter: threshold must be >= 0");
    }
    ComplexVector v(coeffs.values().begin(), coeffs.values().end());
    for (auto& c : v) {
        if (std::abs(c) < threshold) c = 0.0;
    }
    return {coeffs.grid(), std::move(v)};
}

Complex interpolate(const SpectralCoefficients& coeffs, double x, Branch branch) {
    const int n = coeffs.n();
    const double s = x_to_s(coeffs.grid(), x, branch);
    // e^{iks} by repeated multiplication from k = -N upward, in the storage's mode order.
    const Complex step = std::polar(1.0, s);
    Complex e = std::polar(1.0, -n * s);
    Complex acc = 0.0;
    for (int k = -n; k < n; ++k) {
        acc += coeffs.mode(k) * e;
        e *= step;
        if ((k + n) % 32 == 31) e = std::polar(1.0, (k + 1) * s);
    }
    return acc;
}

ComplexVector interpolate(const SpectralCoefficients& coeffs, std::span<const double> xs,
                          Branch branch) {
    ComplexVector out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) out[i] = interpolate(coeffs, xs[i], branch);
    return out;
}

ComplexVector interpolate(const SpectralCoefficients& coeffs, std::span<const double> xs,
                          std::span<const Branch> branches) {
    if (branches.size() != xs.size()) {
        throw std::invalid_argument("interpolate: one branch per point is required");
    }
    ComplexVector out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) out[i] = interpolate(coeffs, xs[i], branches[i]);
    return out;
}

SpectralCoefficients regrid(const SpectralCoefficients& coeffs, const GridConfig& new_cfg) {
    new_cfg.validate();
    const int old_n = coeffs.n();
    const int new_n = new_cfg.n;

    ComplexVector resized(static_cast<size_t>(2 * new_n), Complex{0.0});
    for (int k = -std::min(old_n, new_n); k < std::min(old_n, new_n); ++k) {
        resized[mode_slot(k, new_n)] = coeffs.mode(k);
    }
    GridConfig mid = coeffs.grid();
    mid.n = new_n;
    mid.extension = new_cfg.extension;
    SpectralCoefficients padded(mid, std::move(resized));
    if (mid.l_scale == new_cfg.l_scale && mid.x_center == new_cfg.x_center) {
        return padded;
    }

    const auto x_new = physical_nodes(new_cfg);
    ComplexVector samples(x_new.size());
    for (int j = 0; j < new_cfg.size(); ++j) {
        samples[j] = interpolate(padded, x_new[j], j < new_n ? Branch::lower : Branch::upper);
    }
    return forward(std::span<const Complex>(samples), new_cfg);
}

}  // namespace fraclap
