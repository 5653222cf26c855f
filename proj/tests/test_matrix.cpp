#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "fraclap/operator_matrix.hpp"
#include "fraclap/oracles.hpp"
#include "reference.hpp"

using namespace fraclap;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "fraclap_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<char> read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void write_bytes(const fs::path& p, const std::vector<char>& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::vector<double> gaussian_samples(const GridConfig& cfg) {
    const auto x = physical_nodes(cfg);
    std::vector<double> half(static_cast<std::size_t>(cfg.n));
    for (int j = 0; j < cfg.n; ++j) half[j] = std::exp(-x[j] * x[j]);
    return extend(half, cfg.extension);
}

}  // namespace

TEST_CASE("column conjugation is exact") {
    for (const double alpha : {0.3, 1.0, 1.7}) {
        const auto m = build_matrix(make_grid(16, 1.3), alpha, 50);
        const auto& e = m.entries();
        for (int r = 0; r < 32; ++r) {
            CHECK(e(r, 0) == Complex(0.0));
            CHECK(e(r, 16) == Complex(0.0));
            for (int k = 1; k < 16; ++k) CHECK(e(r, mode_slot(-k, 16)) == std::conj(e(r, k)));
        }
    }
}

TEST_CASE("matrix columns are the symbol samples") {
    const auto cfg = make_grid(8, 2.0);
    const auto m = build_matrix(cfg, 0.6, 40);
    const SymbolKernel kernel(0.6, cfg, 40);
    for (int k = -8; k < 8; ++k) {
        const auto col = kernel.samples(k);
        for (int r = 0; r < 16; ++r) CHECK(m.entries()(r, mode_slot(k, 8)) == col[r]);
    }
}

TEST_CASE("apply is linear") {
    ref::Gen gen(51);
    const auto cfg = make_grid(32, 1.0);
    const auto m = build_matrix(cfg, 1.3, 100);
    for (int trial = 0; trial < 10; ++trial) {
        const SpectralCoefficients u(cfg, gen.complexes(64));
        const SpectralCoefficients v(cfg, gen.complexes(64));
        const Complex a(gen.uniform(-2, 2), gen.uniform(-2, 2));
        ComplexVector w(64);
        for (int i = 0; i < 64; ++i) w[i] = a * u.values()[i] + v.values()[i];
        const auto mu = apply(m, u);
        const auto mv = apply(m, v);
        const auto mw = apply(m, SpectralCoefficients(cfg, w));
        double worst = 0.0;
        for (int i = 0; i < 64; ++i) worst = std::max(worst, std::abs(mw[i] - (a * mu[i] + mv[i])));
        CHECK(worst / std::max(1.0, ref::max_abs(mw)) < 1e-12);
    }
}

TEST_CASE("result does not depend on worker count or fill") {
    const auto cfg = make_grid(32, 1.0);
    const auto one = build_matrix(cfg, 0.9, 80, {1});
    const auto many = build_matrix(cfg, 0.9, 80, {4});
    CHECK((one.entries().array() == many.entries().array()).all());
    CHECK(column_checksums(one) == column_checksums(many));
    const auto fft = build_matrix(cfg, 0.9, 80, {2, NodeFill::fft});
    CHECK((one.entries() - fft.entries()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("for_grid rescales in L and ignores x_c") {
    const auto m1 = build_matrix(make_grid(16, 1.0), 1.4, 60);
    const auto target = make_grid(16, 3.5, 2.0);
    const auto direct = build_matrix(target, 1.4, 60);
    const auto scaled = m1.for_grid(target);
    CHECK(scaled.meta().cfg == target);
    const double scale = direct.entries().cwiseAbs().maxCoeff();
    CHECK((direct.entries() - scaled.entries()).cwiseAbs().maxCoeff() / scale < 1e-13);
    CHECK_THROWS_AS((void)m1.for_grid(make_grid(8, 1.0)), std::invalid_argument);
}

TEST_CASE("apply rejects a different grid") {
    const auto m = build_matrix(make_grid(8, 1.0), 0.5, 10);
    const SpectralCoefficients other(make_grid(8, 2.0), ComplexVector(16));
    CHECK_THROWS_AS((void)apply(m, other), std::invalid_argument);
    const SpectralCoefficients shorter(make_grid(4, 1.0), ComplexVector(8));
    CHECK_THROWS_AS((void)apply(m, shorter), std::invalid_argument);
    const std::vector<double> u(16, 0.0);
    CHECK_THROWS_AS((void)fractional_laplacian(u, make_grid(8, 1.0), 0.7, m), std::invalid_argument);
}

TEST_CASE("Gaussian Laplacian on a coarse grid") {
    for (const auto ext : {Extension::even, Extension::odd}) {
        const auto cfg = make_grid(64, 1.0, 0.0, ext);
        for (const double alpha : {0.5, 1.0, 1.5}) {
            const auto m = build_matrix(cfg, alpha, 500);
            const auto u = gaussian_samples(cfg);
            const auto lap = fractional_laplacian(u, cfg, alpha, m);
            const auto x = physical_nodes(cfg);
            double worst = 0.0;
            for (int j = 0; j < 128; ++j) {
                worst = std::max(worst, std::abs(lap.values[j] - ref::gaussian_laplacian(x[j], alpha)));
            }
            CHECK(worst < 5e-6);
            CHECK(lap.max_imag < 1e-12);
        }
    }
}

TEST_CASE("constants are annihilated") {
    const auto cfg = make_grid(16, 1.0);
    const auto m = build_matrix(cfg, 0.8, 50);
    const std::vector<double> one(32, 1.0);
    const auto lap = fractional_laplacian(one, cfg, 0.8, m);
    for (const double v : lap.values) CHECK(v == 0.0);
}

TEST_CASE("fused operator matches the full pipeline") {
    ref::Gen gen(52);
    for (const auto ext : {Extension::even, Extension::odd}) {
        const auto cfg = make_grid(32, 2.0, 0.0, ext);
        const auto m = build_matrix(cfg, 1.2, 100);
        const FusedOperator fused(m, ext);
        CHECK(fused.n() == 32);
        const auto half = gen.reals(32);
        std::vector<double> out(32);
        fused.apply(half, out);
        const auto lap = fractional_laplacian(extend(half, ext), cfg, 1.2, m, 0.0);
        double worst = 0.0;
        for (int j = 0; j < 32; ++j) worst = std::max(worst, std::abs(out[j] - lap.values[j]));
        CHECK(worst < 1e-12 * std::max(1.0, *std::max_element(lap.values.begin(), lap.values.end())));
        CHECK(fused.max_imag(half) < 1e-12);
    }
}

TEST_CASE("cache round trip is bit-exact") {
    const auto cfg = make_grid(16, 1.7, -0.4);
    const auto m = build_matrix(cfg, 0.35, 70);
    const auto path = temp_file("round_trip.bin");
    save_matrix(m, path);
    CHECK(fs::file_size(path) == 64 + 32u * 32 * 16 + 4);
    const auto back = load_matrix(path);
    CHECK(back.meta().cfg == cfg);
    CHECK(back.meta().alpha == 0.35);
    CHECK(back.meta().l_lim == 70);
    CHECK((back.entries().array() == m.entries().array()).all());
    const auto checked = load_matrix(path, m.meta());
    CHECK(column_checksums(checked) == column_checksums(m));
}

TEST_CASE("cache header layout") {
    const auto m = build_matrix(make_grid(4, 1.0), 0.5, 3);
    const auto path = temp_file("layout.bin");
    save_matrix(m, path);
    const auto bytes = read_bytes(path);
    CHECK(std::string(bytes.begin(), bytes.begin() + 8) == "FRACLAPM");
    std::uint32_t version = 0;
    std::uint32_t n = 0;
    std::memcpy(&version, bytes.data() + 8, 4);
    std::memcpy(&n, bytes.data() + 12, 4);
    CHECK(version == kMatrixFormatVersion);
    CHECK(n == 4);
}

TEST_CASE("corrupt caches are rejected") {
    const auto m = build_matrix(make_grid(8, 1.0), 0.5, 10);
    const auto path = temp_file("corrupt.bin");
    save_matrix(m, path);
    const auto good = read_bytes(path);

    auto flipped = good;
    flipped[200] ^= 0x01;
    write_bytes(path, flipped);
    CHECK_THROWS_AS((void)load_matrix(path), MatrixFormatError);

    write_bytes(path, std::vector<char>(good.begin(), good.end() - 9));
    CHECK_THROWS_AS((void)load_matrix(path), MatrixFormatError);

    auto longer = good;
    longer.push_back(0);
    write_bytes(path, longer);
    CHECK_THROWS_AS((void)load_matrix(path), MatrixFormatError);

    auto magic = good;
    magic[0] = 'X';
    write_bytes(path, magic);
    CHECK_THROWS_AS((void)load_matrix(path), MatrixFormatError);

    auto version = good;
    version[8] = 9;
    write_bytes(path, version);
    CHECK_THROWS_AS((void)load_matrix(path), MatrixFormatError);

    CHECK_THROWS_AS((void)load_matrix(temp_file("missing.bin")), MatrixFormatError);
}

TEST_CASE("cache parameter mismatch") {
    const auto m = build_matrix(make_grid(8, 1.0), 0.5, 10);
    const auto path = temp_file("mismatch.bin");
    save_matrix(m, path);
    MatrixMeta want = m.meta();
    want.alpha = 0.6;
    CHECK_THROWS_AS((void)load_matrix(path, want), MatrixFormatError);
    want = m.meta();
    want.cfg.l_scale = 2.0;
    CHECK_THROWS_AS((void)load_matrix(path, want), MatrixFormatError);
    want = m.meta();
    want.l_lim = 11;
    CHECK_THROWS_AS((void)load_matrix(path, want), MatrixFormatError);
    want = m.meta();
    want.cfg.n = 16;
    CHECK_THROWS_AS((void)load_matrix(path, want), MatrixFormatError);
}
