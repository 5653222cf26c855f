#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "fraclap/grid.hpp"
#include "fraclap/spectral.hpp"
#include "fraclap/symbol_kernel.hpp"

namespace fraclap {

inline constexpr std::uint32_t kMatrixFormatVersion = 1;

using DenseComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using DenseRealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct MatrixMeta {
    double alpha = 0.0;
    GridConfig cfg;
    int l_lim = 0;
    std::uint32_t version = kMatrixFormatVersion;
};

/// Raised when a cache file is unreadable, corrupt, or built for other parameters.
class MatrixFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The 2N x 2N operational matrix: row j is node s_j, columns follow the
/// coefficient order k = 0..N-1, -N..-1. Columns k = 0 and k = -N are zero;
/// column -k is the conjugate of column k.
class OperatorMatrix {
public:
    OperatorMatrix(MatrixMeta meta, DenseComplexMatrix entries);

    [[nodiscard]] const MatrixMeta& meta() const { return meta_; }
    [[nodiscard]] const DenseComplexMatrix& entries() const { return entries_; }
    [[nodiscard]] int n() const { return meta_.cfg.n; }

    /// The same operator for a grid differing only in L or x_c. Entries do not
    /// depend on x_c and scale with L^{-alpha}.
    [[nodiscard]] OperatorMatrix for_grid(const GridConfig& cfg) const;

private:
    MatrixMeta meta_;
    DenseComplexMatrix entries_;
};

struct BuildOptions {
    int workers = 0;  ///< 0 picks std::thread::hardware_concurrency()
    NodeFill fill = NodeFill::symmetry;
};

/// Assembles columns k = 1..N-1 concurrently; the result does not depend on
/// the worker count.
[[nodiscard]] OperatorMatrix build_matrix(const GridConfig& cfg, double alpha, int l_lim,
                                          const BuildOptions& options = {});

/// Matrix-vector product. Throws std::invalid_argument if the grids differ.
[[nodiscard]] ComplexVector apply(const OperatorMatrix& matrix, const SpectralCoefficients& coeffs);

struct LaplacianResult {
    std::vector<double> values;   ///< Re of M u^ at all 2N nodes
    double max_imag = 0.0;        ///< largest |Im| discarded
    double top_mode = 0.0;        ///< |u^(-N)|, whose column is forced to zero
};

/// Real samples on the 2N nodes -> transform -> Krasny filter -> M -> real part.
[[nodiscard]] LaplacianResult fractional_laplacian(
    std::span<const double> samples, const GridConfig& cfg, double alpha,
    const OperatorMatrix& matrix,
    double krasny_threshold = std::numeric_limits<double>::epsilon());

/// CRC-32 of each column's raw bytes.
[[nodiscard]] std::vector<std::uint32_t> column_checksums(const OperatorMatrix& matrix);

/// Cache file: 64-byte little-endian header (magic, version, N, alpha, L,
/// x_c, l_lim), the row-major entry block as (re, im) doubles, and a
/// trailing CRC-32 of everything before it.
void save_matrix(const OperatorMatrix& matrix, const std::filesystem::path& path);
[[nodiscard]] OperatorMatrix load_matrix(const std::filesystem::path& path);
/// Also checks the stored parameters against `expected` (N, alpha, L, x_c, l_lim).
[[nodiscard]] OperatorMatrix load_matrix(const std::filesystem::path& path,
                                         const MatrixMeta& expected);

/// M composed with the forward transform and the parity extension: a real
/// N x N map from samples at s_0..s_{N-1} to the Laplacian at the same nodes.
/// No Krasny filter is applied inside.
class FusedOperator {
public:
    FusedOperator(const OperatorMatrix& matrix, Extension extension);

    void apply(std::span<const double> half, std::span<double> out) const;
    /// max_j |Im| that apply() discards for this input.
    [[nodiscard]] double max_imag(std::span<const double> half) const;

    [[nodiscard]] int n() const { return static_cast<int>(re_.rows()); }
    [[nodiscard]] Extension extension() const { return extension_; }

private:
    DenseRealMatrix re_;
    DenseRealMatrix im_;
    Extension extension_;
};

}  // namespace fraclap
