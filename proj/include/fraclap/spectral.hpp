#pragma once

#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "fraclap/grid.hpp"

namespace fraclap {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Storage slot of mode k in the order k = 0, ..., N-1, -N, ..., -1.
[[nodiscard]] constexpr int mode_slot(int k, int n) { return k >= 0 ? k : k + 2 * n; }
/// Mode number stored at slot idx.
[[nodiscard]] constexpr int slot_mode(int idx, int n) { return idx < n ? idx : idx - 2 * n; }

/// The 2N coefficients u^(k) of u(s) ~ sum_{k=-N}^{N-1} u^(k) e^{iks}, tied to
/// the grid they were computed on. Immutable once built.
class SpectralCoefficients {
public:
    SpectralCoefficients(GridConfig grid, ComplexVector values);

    [[nodiscard]] const GridConfig& grid() const { return grid_; }
    [[nodiscard]] std::span<const Complex> values() const { return values_; }
    [[nodiscard]] int n() const { return grid_.n; }

    /// Coefficient of e^{iks}, k in [-N, N-1].
    [[nodiscard]] Complex mode(int k) const;

private:
    GridConfig grid_;
    ComplexVector values_;
};

/// Phase-shifted DFT on the half-shifted nodes:
/// u^(k) = e^{-ik pi/(2N)} / (2N) * sum_j u(s_j) e^{-2 pi i jk/(2N)}.
/// Throws std::invalid_argument on a length mismatch.
[[nodiscard]] SpectralCoefficients forward(std::span<const Complex> samples, const GridConfig& cfg);
[[nodiscard]] SpectralCoefficients forward(std::span<const double> samples, const GridConfig& cfg);

/// u(s_j) = sum_k u^(k) e^{ik s_j}.
[[nodiscard]] ComplexVector inverse(const SpectralCoefficients& coeffs);

/// Continues samples at s_0..s_{N-1} to all 2N nodes through s_{2N-1-j} = 2pi - s_j.
[[nodiscard]] std::vector<double> extend(std::span<const double> half, Extension extension);
[[nodiscard]] ComplexVector extend(std::span<const Complex> half, Extension extension);

/// Krasny filter: zeroes every coefficient with modulus strictly below threshold.
[[nodiscard]] SpectralCoefficients krasny_filter(
    const SpectralCoefficients& coeffs,
    double threshold = std::numeric_limits<double>::epsilon());

/// Evaluates the interpolant sum_k u^(k) e^{ik arccot((x - x_c)/L)}.
[[nodiscard]] Complex interpolate(const SpectralCoefficients& coeffs, double x,
                                  Branch branch = Branch::lower);
[[nodiscard]] ComplexVector interpolate(const SpectralCoefficients& coeffs,
                                        std::span<const double> xs,
                                        Branch branch = Branch::lower);
[[nodiscard]] ComplexVector interpolate(const SpectralCoefficients& coeffs,
                                        std::span<const double> xs,
                                        std::span<const Branch> branches);

/// Moves a representation to another grid. A change of N pads or drops modes;
/// a change of L or x_c re-samples the interpolant at the new nodes (lower
/// branch for j < N, upper for j >= N) and transforms again.
[[nodiscard]] SpectralCoefficients regrid(const SpectralCoefficients& coeffs,
                                          const GridConfig& new_cfg);

}  // namespace fraclap
