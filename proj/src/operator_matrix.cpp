#include "fraclap/operator_matrix.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <numbers>
#include <string>

#include <boost/crc.hpp>
#include <unsupported/Eigen/FFT>

#include "fraclap/parallel.hpp"

namespace fraclap {

namespace {

constexpr std::array<char, 8> kMagic = {'F', 'R', 'A', 'C', 'L', 'A', 'P', 'M'};
constexpr size_t kHeaderBytes = 64;

void check_same_grid(const GridConfig& a, const GridConfig& b, const char* what) {
    if (a.n != b.n || a.l_scale != b.l_scale || a.x_center != b.x_center) {
        throw std::invalid_argument(std::string(what) + ": grid does not match the matrix");
    }
}

template <typename T>
void put_le(unsigned char* dst, T value) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    const auto bits = std::bit_cast<U>(value);
    for (size_t i = 0; i < sizeof(U); ++i) dst[i] = static_cast<unsigned char>(bits >> (8 * i));
}

template <typename T>
T get_le(const unsigned char* src) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    U bits = 0;
    for (size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(src[i]) << (8 * i);
    return std::bit_cast<T>(bits);
}

std::vector<unsigned char> encode_entries(const DenseComplexMatrix& m) {
    const auto count = static_cast<size_t>(m.size());
    std::vector<unsigned char> out(count * 16);
    const Complex* data = m.data();
    for (size_t i = 0; i < count; ++i) {
        put_le(out.data() + 16 * i, data[i].real());
        put_le(out.data() + 16 * i + 8, data[i].imag());
    }
    return out;
}

}  // namespace

OperatorMatrix::OperatorMatrix(MatrixMeta meta, DenseComplexMatrix entries)
    : meta_(meta), entries_(std::move(entries)) {
    meta_.cfg.validate();
    const auto size = static_cast<Eigen::Index>(meta_.cfg.size());
    if (entries_.rows() != size || entries_.cols() != size) {
        throw std::invalid_argument("OperatorMatrix: entries must be 2N x 2N");
    }
}

OperatorMatrix OperatorMatrix::for_grid(const GridConfig& cfg) const {
    cfg.validate();
    if (cfg.n != meta_.cfg.n) {
        throw std::invalid_argument("OperatorMatrix::for_grid: N must not change");
    }
    MatrixMeta meta = meta_;
    meta.cfg = cfg;
    const double scale = std::pow(meta_.cfg.l_scale / cfg.l_scale, meta_.alpha);
    return {meta, entries_ * scale};
}

OperatorMatrix build_matrix(const GridConfig& cfg, double alpha, int l_lim,
                            const BuildOptions& options) {
    cfg.validate();
    const SymbolKernel kernel(alpha, cfg, l_lim, options.fill);
    const int n = cfg.n;
    const int size = cfg.size();
    DenseComplexMatrix m = DenseComplexMatrix::Zero(size, size);

    parallel_for(n - 1, options.workers, [&](int i) {
        const int k = i + 1;
        ComplexVector col(static_cast<size_t>(size));
        kernel.samples(k, col);
        const int neg = mode_slot(-k, n);
        for (int j = 0; j < size; ++j) {
            m(j, k) = col[j];
            m(j, neg) = std::conj(col[j]);
        }
    });
    return {MatrixMeta{alpha, cfg, l_lim, kMatrixFormatVersion}, std::move(m)};
}

ComplexVector apply(const OperatorMatrix& matrix, const SpectralCoefficients& coeffs) {
    check_same_grid(coeffs.grid(), matrix.meta().cfg, "apply");
    const auto v = coeffs.values();
    Eigen::Map<const Eigen::VectorXcd> x(v.data(), static_cast<Eigen::Index>(v.size()));
    ComplexVector out(v.size());
    Eigen::Map<Eigen::VectorXcd> y(out.data(), static_cast<Eigen::Index>(out.size()));
    y.noalias() = matrix.entries() * x;
    return out;
}

LaplacianResult fractional_laplacian(std::span<const double> samples, const GridConfig& cfg,
                                     double alpha, const OperatorMatrix& matrix,
                                     double krasny_threshold) {
    if (alpha != matrix.meta().alpha) {
        throw std::invalid_argument("fractional_laplacian: matrix built for another alpha");
    }
    const auto coeffs = krasny_filter(forward(samples, cfg), krasny_threshold);
    const auto out = apply(matrix, coeffs);
    LaplacianResult r;
    r.values.resize(out.size());
    for (size_t j = 0; j < out.size(); ++j) {
        r.values[j] = out[j].real();
        r.max_imag = std::max(r.max_imag, std::abs(out[j].imag()));
    }
    r.top_mode = std::abs(coeffs.mode(-cfg.n));
    return r;
}

std::vector<std::uint32_t> column_checksums(const OperatorMatrix& matrix) {
    const auto& m = matrix.entries();
    std::vector<std::uint32_t> sums(static_cast<size_t>(m.cols()));
    std::array<unsigned char, 16> buf{};
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        boost::crc_32_type crc;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            put_le(buf.data(), m(r, c).real());
            put_le(buf.data() + 8, m(r, c).imag());
            crc.process_bytes(buf.data(), buf.size());
        }
        sums[static_cast<size_t>(c)] = crc.checksum();
    }
    return sums;
}

void save_matrix(const OperatorMatrix& matrix, const std::filesystem::path& path) {
    const auto& meta = matrix.meta();
    std::array<unsigned char, kHeaderBytes> header{};
    std::memcpy(header.data(), kMagic.data(), kMagic.size());
    put_le(header.data() + 8, meta.version);
    put_le(header.data() + 12, static_cast<std::uint32_t>(meta.cfg.n));
    put_le(header.data() + 16, meta.alpha);
    put_le(header.data() + 24, meta.cfg.l_scale);
    put_le(header.data() + 32, meta.cfg.x_center);
    put_le(header.data() + 40, static_cast<std::uint32_t>(meta.l_lim));

    const auto body = encode_entries(matrix.entries());
    boost::crc_32_type crc;
    crc.process_bytes(header.data(), header.size());
    crc.process_bytes(body.data(), body.size());
    std::array<unsigned char, 4> trailer{};
    put_le(trailer.data(), static_cast<std::uint32_t>(crc.checksum()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw MatrixFormatError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(header.data()), header.size());
    out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
    out.write(reinterpret_cast<const char*>(trailer.data()), trailer.size());
    if (!out) throw MatrixFormatError("write to '" + path.string() + "' failed");
}

OperatorMatrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MatrixFormatError("cannot open '" + path.string() + "'");
    std::array<unsigned char, kHeaderBytes> header{};
    in.read(reinterpret_cast<char*>(header.data()), header.size());
    if (!in || std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0) {
        throw MatrixFormatError("'" + path.string() + "' is not a matrix cache file");
    }
    MatrixMeta meta;
    meta.version = get_le<std::uint32_t>(header.data() + 8);
    if (meta.version != kMatrixFormatVersion) {
        throw MatrixFormatError("unsupported matrix cache version " + std::to_string(meta.version));
    }
    meta.cfg.n = static_cast<int>(get_le<std::uint32_t>(header.data() + 12));
    meta.alpha = get_le<double>(header.data() + 16);
    meta.cfg.l_scale = get_le<double>(header.data() + 24);
    meta.cfg.x_center = get_le<double>(header.data() + 32);
    meta.l_lim = static_cast<int>(get_le<std::uint32_t>(header.data() + 40));
    try {
        meta.cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw MatrixFormatError(std::string("corrupt header: ") + e.what());
    }

    const auto size = static_cast<size_t>(meta.cfg.size());
    std::vector<unsigned char> body(size * size * 16);
    in.read(reinterpret_cast<char*>(body.data()), static_cast<std::streamsize>(body.size()));
    std::array<unsigned char, 4> trailer{};
    in.read(reinterpret_cast<char*>(trailer.data()), trailer.size());
    if (!in) throw MatrixFormatError("'" + path.string() + "' is truncated");
    if (in.peek() != std::ifstream::traits_type::eof()) {
        throw MatrixFormatError("'" + path.string() + "' has trailing bytes");
    }

    boost::crc_32_type crc;
    crc.process_bytes(header.data(), header.size());
    crc.process_bytes(body.data(), body.size());
    if (crc.checksum() != get_le<std::uint32_t>(trailer.data())) {
        throw MatrixFormatError("checksum mismatch in '" + path.string() + "'");
    }

    DenseComplexMatrix m(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
    Complex* data = m.data();
    for (size_t i = 0; i < size * size; ++i) {
        data[i] = Complex(get_le<double>(body.data() + 16 * i), get_le<double>(body.data() + 16 * i + 8));
    }
    return {meta, std::move(m)};
}

OperatorMatrix load_matrix(const std::filesystem::path& path, const MatrixMeta& expected) {
    auto m = load_matrix(path);
    const auto& got = m.meta();
    auto mismatch = [&](const std::string& field, const std::string& want, const std::string& have) {
        throw MatrixFormatError("matrix cache '" + path.string() + "' has " + field + "=" + have +
                                ", expected " + want);
    };
    if (got.cfg.n != expected.cfg.n) {
        mismatch("N", std::to_string(expected.cfg.n), std::to_string(got.cfg.n));
    }
    if (got.alpha != expected.alpha) {
        mismatch("alpha", std::to_string(expected.alpha), std::to_string(got.alpha));
    }
    if (got.cfg.l_scale != expected.cfg.l_scale) {
        mismatch("L", std::to_string(expected.cfg.l_scale), std::to_string(got.cfg.l_scale));
    }
    if (got.cfg.x_center != expected.cfg.x_center) {
        mismatch("x_c", std::to_string(expected.cfg.x_center), std::to_string(got.cfg.x_center));
    }
    if (got.l_lim != expected.l_lim) {
        mismatch("l_lim", std::to_string(expected.l_lim), std::to_string(got.l_lim));
    }
    return m;
}

FusedOperator::FusedOperator(const OperatorMatrix& matrix, Extension extension)
    : extension_(extension) {
    const int n = matrix.n();
    const int size = 2 * n;
    re_.resize(n, n);
    im_.resize(n, n);
    const double sign = extension == Extension::even ? 1.0 : -1.0;

    ComplexVector phase(static_cast<size_t>(size));
    for (int idx = 0; idx < size; ++idx) {
        phase[idx] = std::polar(1.0 / size, -std::numbers::pi * slot_mode(idx, n) / size);
    }
    Eigen::FFT<double> fft;
    ComplexVector row(static_cast<size_t>(size));
    ComplexVector w;
    for (int r = 0; r < n; ++r) {
        for (int idx = 0; idx < size; ++idx) row[idx] = matrix.entries()(r, idx) * phase[idx];
        // W[r, j] = sum_idx row[idx] e^{-2 pi i j idx / 2N}
        fft.fwd(w, row);
        for (int j = 0; j < n; ++j) {
            const Complex folded = w[j] + sign * w[size - 1 - j];
            re_(r, j) = folded.real();
            im_(r, j) = folded.imag();
        }
    }
}

void FusedOperator::apply(std::span<const double> half, std::span<double> out) const {
    const auto n = static_cast<Eigen::Index>(re_.rows());
    if (static_cast<Eigen::Index>(half.size()) != n || static_cast<Eigen::Index>(out.size()) != n) {
        throw std::invalid_argument("FusedOperator::apply: expected N samples");
    }
    Eigen::Map<const Eigen::VectorXd> x(half.data(), n);
    Eigen::Map<Eigen::VectorXd> y(out.data(), n);
    y.noalias() = re_ * x;
}

double FusedOperator::max_imag(std::span<const double> half) const {
    const auto n = static_cast<Eigen::Index>(im_.rows());
    if (static_cast<Eigen::Index>(half.size()) != n) {
        throw std::invalid_argument("FusedOperator::max_imag: expected N samples");
    }
    Eigen::Map<const Eigen::VectorXd> x(half.data(), n);
    const Eigen::VectorXd y = im_ * x;
    return y.cwiseAbs().maxCoeff();
}

}  // namespace fraclap
