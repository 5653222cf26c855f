#include "fraclap/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace fraclap {

namespace {

double max_norm(std::span<const double> v) {
    double m = 0.0;
    for (const double x : v) {
        if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
        m = std::max(m, std::abs(x));
    }
    return m;
}

void check_blow_up(std::span<const double> v, double t) {
    const double norm = max_norm(v);
    if (norm > kBlowUpNorm) {
        std::ostringstream msg;
        msg << "solution max-norm " << norm << " exceeds " << kBlowUpNorm << " at t=" << t;
        throw BlowUpError(msg.str(), t);
    }
}

void check_state(std::span<const double> samples, const GridConfig& cfg, const char* where) {
    cfg.validate();
    if (cfg.extension != Extension::even) {
        throw std::invalid_argument(std::string(where) + ": the Fisher state uses the even extension");
    }
    if (static_cast<int>(samples.size()) != cfg.size()) {
        throw std::invalid_argument(std::string(where) + ": expected 2N samples");
    }
}

void check_matrix(const OperatorMatrix& matrix, const GridConfig& cfg) {
    const GridConfig& m = matrix.meta().cfg;
    if (m.n != cfg.n || m.l_scale != cfg.l_scale || m.x_center != cfg.x_center) {
        throw std::invalid_argument("matrix was built for a different grid");
    }
}

}  // namespace

double initial_condition(double x, double alpha) {
    if (!std::isfinite(x)) throw std::domain_error("initial_condition: x must be finite");
    const double r = std::hypot(1.0, x);
    const double base = x > 0.0 ? 1.0 / (2.0 * r * (r + x)) : (r - x) / (2.0 * r);
    return std::pow(base, alpha);
}

void FisherRun::validate() const {
    cfg.validate();
    if (cfg.extension != Extension::even) {
        throw std::invalid_argument("FisherRun: the even extension is required");
    }
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("FisherRun: alpha must lie in (0,2)");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("FisherRun: dt must be positive");
    if (!(t_final > 0.0) || !std::isfinite(t_final)) {
        throw std::invalid_argument("FisherRun: t_final must be positive");
    }
    if (l_lim < 0) throw std::invalid_argument("FisherRun: l_lim must be non-negative");
    if (sample_stride < 1) throw std::invalid_argument("FisherRun: sample_stride must be at least 1");
    const auto [lo, hi] = window();
    if (!(lo < hi)) throw std::invalid_argument("FisherRun: empty fit window");
}

std::pair<double, double> FisherRun::window() const {
    if (fit_window) return *fit_window;
    return {0.6 * t_final, t_final};
}

long FisherRun::steps() const { return std::lround(t_final / dt); }

LinearFit fit_log_linear(std::span<const double> times, std::span<const double> x05, double t_lo,
                         double t_hi) {
    if (times.size() != x05.size()) throw std::invalid_argument("fit_log_linear: length mismatch");
    const double slack = 1e-9 * std::max(1.0, std::abs(t_hi));
    std::vector<double> t;
    std::vector<double> y;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo - slack || times[i] > t_hi + slack) continue;
        if (!(x05[i] > 0.0)) {
            throw std::domain_error("fit_log_linear: front position must be positive in the window");
        }
        t.push_back(times[i]);
        y.push_back(std::log(x05[i]));
    }
    if (t.size() < 3) throw std::invalid_argument("fit_log_linear: fewer than 3 samples in window");

    const double count = static_cast<double>(t.size());
    double t_mean = 0.0;
    double y_mean = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        t_mean += t[i];
        y_mean += y[i];
    }
    t_mean /= count;
    y_mean /= count;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        sxy += (t[i] - t_mean) * (y[i] - y_mean);
        sxx += (t[i] - t_mean) * (t[i] - t_mean);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = y_mean - fit.slope * t_mean;
    fit.count = t.size();
    for (std::size_t i = 0; i < t.size(); ++i) {
        fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - fit.intercept - fit.slope * t[i]));
    }
    return fit;
}

double fit_sigma(FrontTrace& trace, double t_lo, double t_hi) {
    const LinearFit fit = fit_log_linear(trace.times, trace.x05, t_lo, t_hi);
    trace.sigma = fit.slope;
    trace.t_lo = t_lo;
    trace.t_hi = t_hi;
    trace.fit_residual = fit.max_residual;
    return fit.slope;
}

std::vector<double> rhs(std::span<const double> samples, const OperatorMatrix& matrix,
                        const GridConfig& cfg) {
    check_state(samples, cfg, "rhs");
    const LaplacianResult lap = fractional_laplacian(samples, cfg, matrix.meta().alpha, matrix);
    std::vector<double> out(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j) {
        const double u = samples[j];
        out[j] = -lap.values[j] + u * (1.0 - u);
    }
    return out;
}

std::vector<double> rk4_step(std::span<const double> samples, double dt, const OperatorMatrix& matrix,
                             const GridConfig& cfg) {
    check_state(samples, cfg, "rk4_step");
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
    const std::size_t size = samples.size();
    std::vector<double> stage(size);
    auto combine = [&](const std::vector<double>& k, double h) {
        for (std::size_t j = 0; j < size; ++j) stage[j] = samples[j] + h * k[j];
    };
    const std::vector<double> k1 = rhs(samples, matrix, cfg);
    combine(k1, 0.5 * dt);
    const std::vector<double> k2 = rhs(stage, matrix, cfg);
    combine(k2, 0.5 * dt);
    const std::vector<double> k3 = rhs(stage, matrix, cfg);
    combine(k3, dt);
    const std::vector<double> k4 = rhs(stage, matrix, cfg);

    const std::size_t n = size / 2;
    std::vector<double> half(n);
    for (std::size_t j = 0; j < n; ++j) {
        half[j] = samples[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    check_blow_up(half, dt);
    return extend(half, Extension::even);
}

double front_position(std::span<const double> samples, const SpectralCoefficients& coeffs,
                      const GridConfig& cfg) {
    cfg.validate();
    if (static_cast<int>(samples.size()) != cfg.size()) {
        throw std::invalid_argument("front_position: expected 2N samples");
    }
    if (!(coeffs.grid() == cfg)) throw std::invalid_argument("front_position: grid mismatch");
    const auto x = physical_nodes(cfg);
    for (int j = 0; j + 1 < cfg.n; ++j) {
        const double d0 = samples[j] - 0.5;
        const double d1 = samples[j + 1] - 0.5;
        if (d0 == 0.0) return x[j];
        if (d0 * d1 > 0.0) continue;
        if (d1 == 0.0) return x[j + 1];

        double lo = x[j + 1];
        double hi = x[j];
        const double sign_lo = d1 > 0.0 ? 1.0 : -1.0;
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (hi - lo < 1e-10 * std::max(1.0, std::abs(mid))) break;
            const double f = interpolate(coeffs, mid, Branch::lower).real() - 0.5;
            if (f == 0.0) return mid;
            if ((f > 0.0) == (sign_lo > 0.0)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    }
    throw FrontEscapeError("front_position: u - 0.5 has no sign change on the resolved nodes");
}

FisherSystem::FisherSystem(const OperatorMatrix& matrix, double krasny_threshold)
    : cfg_(matrix.meta().cfg), op_(matrix, Extension::even), threshold_(krasny_threshold) {
    cfg_.extension = Extension::even;
    const auto n = static_cast<std::size_t>(cfg_.n);
    shifted_.resize(n);
    k1_.resize(n);
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
    stage_.resize(n);
}

void FisherSystem::rhs(std::span<const double> half, std::span<double> out) const {
    // Constants are annihilated by the operator; shifting by one keeps u = 0
    // and u = 1 exact fixed points in floating point.
    const double shift = half.empty() ? 0.0 : half.back();
    for (std::size_t j = 0; j < half.size(); ++j) shifted_[j] = half[j] - shift;
    op_.apply(shifted_, out);
    for (std::size_t j = 0; j < half.size(); ++j) {
        const double u = half[j];
        out[j] = -out[j] + u * (1.0 - u);
    }
}

void FisherSystem::step(std::vector<double>& half, double dt, double t) const {
    const std::size_t n = half.size();
    if (static_cast<int>(n) != cfg_.n) throw std::invalid_argument("FisherSystem::step: expected N samples");
    rhs(half, k1_);
    for (std::size_t j = 0; j < n; ++j) stage_[j] = half[j] + 0.5 * dt * k1_[j];
    rhs(stage_, k2_);
    for (std::size_t j = 0; j < n; ++j) stage_[j] = half[j] + 0.5 * dt * k2_[j];
    rhs(stage_, k3_);
    for (std::size_t j = 0; j < n; ++j) stage_[j] = half[j] + dt * k3_[j];
    rhs(stage_, k4_);
    for (std::size_t j = 0; j < n; ++j) {
        half[j] += dt / 6.0 * (k1_[j] + 2.0 * k2_[j] + 2.0 * k3_[j] + k4_[j]);
    }
    filter(half);
    check_blow_up(half, t + dt);
}

void FisherSystem::filter(std::vector<double>& half) const {
    const auto full = extend(half, Extension::even);
    const auto coeffs = krasny_filter(forward(full, cfg_), threshold_);
    const ComplexVector back = inverse(coeffs);
    for (std::size_t j = 0; j < half.size(); ++j) half[j] = back[j].real();
}

double FisherSystem::max_imag(std::span<const double> half) const { return op_.max_imag(half); }

SimulationResult run_simulation(const FisherRun& run, const OperatorMatrix& matrix,
                                const SimulationOptions& options) {
    run.validate();
    check_matrix(matrix, run.cfg);
    if (std::abs(matrix.meta().alpha - run.alpha) > 1e-14) {
        throw std::invalid_argument("run_simulation: matrix alpha differs from the run");
    }
    const FisherSystem system(matrix, run.krasny_threshold);
    const GridConfig& cfg = system.grid();
    const int n = cfg.n;
    const auto x = physical_nodes(cfg);

    std::vector<double> half(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) half[j] = initial_condition(x[j], run.alpha);
    system.filter(half);

    const auto [t_lo, t_hi] = run.window();
    const double slack = 1e-9 * std::max(1.0, t_hi);
    SimulationResult result;
    result.min_in_window = std::numeric_limits<double>::infinity();
    result.max_in_window = -std::numeric_limits<double>::infinity();

    auto record = [&](double t) {
        const auto full = extend(half, Extension::even);
        const auto coeffs = forward(full, cfg);
        result.trace.times.push_back(t);
        result.trace.x05.push_back(front_position(full, coeffs, cfg));
        result.max_imag = std::max(result.max_imag, system.max_imag(half));
        if (t >= t_lo - slack && t <= t_hi + slack) {
            const auto [lo, hi] = std::minmax_element(half.begin(), half.end());
            result.min_in_window = std::min(result.min_in_window, *lo);
            result.max_in_window = std::max(result.max_in_window, *hi);
        }
    };
    auto snapshot = [&](double t) {
        if (options.on_snapshot) options.on_snapshot(Snapshot{t, extend(half, Extension::even)});
    };

    record(0.0);
    snapshot(0.0);
    const long steps = run.steps();
    for (long step = 1; step <= steps; ++step) {
        const double t_prev = static_cast<double>(step - 1) * run.dt;
        system.step(half, run.dt, t_prev);
        const double t = static_cast<double>(step) * run.dt;
        if (step % run.sample_stride == 0 || step == steps) record(t);
        if (options.snapshot_stride > 0 && step % options.snapshot_stride == 0) snapshot(t);
    }
    result.steps = steps;
    fit_sigma(result.trace, t_lo, t_hi);
    return result;
}

}  // namespace fraclap
