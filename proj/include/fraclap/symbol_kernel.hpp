#pragma once

#include <memory>
#include <span>

#include "fraclap/gamma_ratios.hpp"
#include "fraclap/grid.hpp"
#include "fraclap/spectral.hpp"

namespace fraclap {

/// c_alpha = alpha 2^{alpha-1} Gamma(1/2 + alpha/2) / (sqrt(pi) Gamma(1 - alpha/2)).
[[nodiscard]] double c_alpha(double alpha);

struct SymbolParams {
    double alpha = 0.0;
    int k = 0;
    GridConfig cfg;
    int l_lim = 0;
    double c_alpha = 0.0;
};

/// Validates alpha in (0, 2), the grid, l_lim >= 0, and fills c_alpha.
[[nodiscard]] SymbolParams make_symbol_params(double alpha, int k, const GridConfig& cfg,
                                              int l_lim);

/// One term a_{k,l1,l2} of the aliased l-series for alpha != 1 (k >= 1).
/// Throws std::out_of_range when the tables are too short for (l1, l2).
[[nodiscard]] double a_coeff(int k, int l1, int l2, const GammaRatioTables& tables,
                             double alpha, int n);

/// One term b_{k,l1,l2} of the alpha = 1 series for odd k; zero when l1 N + l2 = 0.
[[nodiscard]] double b_coeff(int k, int l1, int l2, int n);

/// How the l2-sums are spread over the nodes.
/// symmetry: direct sums on j < N/2, mirrored with e^{i2 l2 s_{N-1-j}} = e^{-i2 l2 s_j}.
/// fft: one length-N transform per mode.
enum class NodeFill { symmetry, fft };

/// Samples of (-Delta)^{alpha/2} e^{iks} at the 2N nodes, for any k in [-N, N-1].
///
/// k = 0 and k = -N give zero columns; negative k are the conjugates of |k|.
/// The object is immutable after construction and may be shared by threads.
class SymbolKernel {
public:
    SymbolKernel(double alpha, const GridConfig& cfg, int l_lim,
                 NodeFill fill = NodeFill::symmetry);
    /// Reuses prebuilt tables (ignored when alpha == 1).
    SymbolKernel(double alpha, const GridConfig& cfg, int l_lim,
                 std::shared_ptr<const GammaRatioTables> tables,
                 NodeFill fill = NodeFill::symmetry);

    [[nodiscard]] ComplexVector samples(int k) const;
    void samples(int k, std::span<Complex> out) const;

    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] const GridConfig& grid() const { return cfg_; }
    [[nodiscard]] int l_lim() const { return l_lim_; }

private:
    void positive_mode(int k, std::span<Complex> out) const;
    void series_sums(int k, std::span<double> sums) const;
    void spread_over_nodes(std::span<const double> sums, std::span<Complex> t) const;

    double alpha_;
    GridConfig cfg_;
    int l_lim_;
    NodeFill fill_;
    double c_alpha_ = 0.0;
    std::shared_ptr<const GammaRatioTables> tables_;
    std::vector<double> sin_pow_;   // |sin s_j|^{alpha-1}, j < N
    std::vector<double> unit_cos_;  // cos(pi m / N), m < 2N
    std::vector<double> unit_sin_;
};

/// Single-mode convenience wrapper over SymbolKernel.
[[nodiscard]] ComplexVector symbol_samples(const SymbolParams& params,
                                           const GammaRatioTables& tables,
                                           NodeFill fill = NodeFill::symmetry);
/// alpha = 1 only.
[[nodiscard]] ComplexVector symbol_samples(const SymbolParams& params,
                                           NodeFill fill = NodeFill::symmetry);

}  // namespace fraclap
