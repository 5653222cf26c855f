#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fraclap/grid.hpp"
#include "fraclap/operator_matrix.hpp"
#include "fraclap/spectral.hpp"

namespace fraclap {

/// Solution max-norm exceeded the blow-up threshold.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double t) : std::runtime_error(what), time_(t) {}
    [[nodiscard]] double time() const { return time_; }

private:
    double time_;
};

/// u - 0.5 has no sign change on the lower branch.
class FrontEscapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kBlowUpNorm = 10.0;

/// (1/2 - x/(2 sqrt(1+x^2)))^alpha, evaluated without cancellation for x > 0.
[[nodiscard]] double initial_condition(double x, double alpha);

struct FisherRun {
    GridConfig cfg;
    double alpha = 1.0;
    double dt = 0.01;
    double t_final = 7.0;
    int l_lim = 500;
    int sample_stride = 10;
    /// Defaults to the last 40% of [0, t_final].
    std::optional<std::pair<double, double>> fit_window;
    double krasny_threshold = std::numeric_limits<double>::epsilon();

    void validate() const;
    [[nodiscard]] std::pair<double, double> window() const;
    [[nodiscard]] long steps() const;
};

struct FrontTrace {
    std::vector<double> times;
    std::vector<double> x05;
    double sigma = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double fit_residual = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    std::size_t count = 0;
};

/// Least squares of ln x05 against t over t_lo <= t <= t_hi.
[[nodiscard]] LinearFit fit_log_linear(std::span<const double> times, std::span<const double> x05,
                                       double t_lo, double t_hi);

/// Fits and records sigma, window and residual in `trace`; returns sigma.
double fit_sigma(FrontTrace& trace, double t_lo, double t_hi);

/// -L u + u(1-u) on the 2N nodes through fractional_laplacian (with its Krasny
/// filter). Samples must be even-extended.
[[nodiscard]] std::vector<double> rhs(std::span<const double> samples, const OperatorMatrix& matrix,
                                      const GridConfig& cfg);

/// One classical RK4 step of the 2N-node system using rhs(); the result is
/// re-symmetrized. Throws BlowUpError.
[[nodiscard]] std::vector<double> rk4_step(std::span<const double> samples, double dt,
                                           const OperatorMatrix& matrix, const GridConfig& cfg);

/// Right-most crossing of 0.5, refined by bisection on the lower-branch
/// interpolant of `coeffs`. Throws FrontEscapeError.
[[nodiscard]] double front_position(std::span<const double> samples,
                                    const SpectralCoefficients& coeffs, const GridConfig& cfg);

/// Time stepper on the half state u(x_0..x_{N-1}) with the fused operator.
class FisherSystem {
public:
    FisherSystem(const OperatorMatrix& matrix, double krasny_threshold =
                                                   std::numeric_limits<double>::epsilon());

    [[nodiscard]] const GridConfig& grid() const { return cfg_; }
    [[nodiscard]] int n() const { return cfg_.n; }

    void rhs(std::span<const double> half, std::span<double> out) const;
    /// RK4 step followed by the Krasny filter. Throws BlowUpError (time t).
    void step(std::vector<double>& half, double dt, double t = 0.0) const;
    /// Forward transform, filter, inverse; keeps the real part on j < N.
    void filter(std::vector<double>& half) const;
    [[nodiscard]] double max_imag(std::span<const double> half) const;

private:
    GridConfig cfg_;
    FusedOperator op_;
    double threshold_;
    mutable std::vector<double> shifted_;
    mutable std::vector<double> k1_, k2_, k3_, k4_, stage_;
};

struct Snapshot {
    double t = 0.0;
    std::vector<double> samples;  ///< all 2N nodes, even-extended
};

struct SimulationOptions {
    int snapshot_stride = 0;  ///< steps between snapshots, 0 for none
    std::function<void(const Snapshot&)> on_snapshot;
};

struct SimulationResult {
    FrontTrace trace;
    double max_imag = 0.0;
    double min_in_window = 0.0;
    double max_in_window = 0.0;
    long steps = 0;
};

/// `matrix` must match run.cfg and run.alpha.
[[nodiscard]] SimulationResult run_simulation(const FisherRun& run, const OperatorMatrix& matrix,
                                              const SimulationOptions& options = {});

}  // namespace fraclap
