// fraclap: build and cache operator matrices, apply them, run validation
// scans and fractional Fisher-KPP simulations.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fraclap/fisher.hpp"
#include "fraclap/operator_matrix.hpp"
#include "fraclap/oracles.hpp"
#include "fraclap/parallel.hpp"
#include "fraclap/sweep.hpp"

#ifndef FRACLAP_VERSION
#define FRACLAP_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace fraclap;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kTolerance = 2, kBlowUp = 3, kIo = 4 };

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json manifest(const std::string& command) {
    return json{{"command", command}, {"tool_version", FRACLAP_VERSION}};
}

void write_manifest(json m, const fs::path& path, const Stopwatch& clock) {
    m["wall_clock_seconds"] = clock.seconds();
    auto out = open_out(path);
    out << m.dump(2) << '\n';
}

json grid_json(const GridConfig& cfg) {
    return json{{"n", cfg.n}, {"L", cfg.l_scale}, {"x_c", cfg.x_center},
                {"extension", to_string(cfg.extension)}};
}

std::vector<double> read_samples(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<double> v;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line == "u") continue;
        }
        try {
            v.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw IoError("bad sample line in " + path.string() + ": " + line);
        }
    }
    return v;
}

OperatorMatrix obtain_matrix(const GridConfig& cfg, double alpha, int l_lim,
                             const std::optional<fs::path>& cache_dir, int workers, bool& from_cache) {
    from_cache = false;
    if (!cache_dir) return build_matrix(cfg, alpha, l_lim, {workers});
    std::ostringstream name;
    name << "m_n" << cfg.n << "_a" << fmt(alpha) << "_L" << fmt(cfg.l_scale) << "_x" << fmt(cfg.x_center)
         << "_l" << l_lim << ".bin";
    const fs::path path = *cache_dir / name.str();
    const MatrixMeta expected{alpha, cfg, l_lim};
    if (fs::exists(path)) {
        from_cache = true;
        return load_matrix(path, expected);
    }
    auto m = build_matrix(cfg, alpha, l_lim, {workers});
    fs::create_directories(*cache_dir);
    save_matrix(m, path);
    return m;
}

// ---------------------------------------------------------------- matrix

struct MatrixArgs {
    int n = 0;
    double alpha = 0.0;
    double l_scale = 1.0;
    double x_center = 0.0;
    int l_lim = 500;
    std::string out;
    int workers = 0;
    std::string fill = "symmetry";
};

int cmd_matrix_build(const MatrixArgs& a) {
    Stopwatch clock;
    const GridConfig cfg = make_grid(a.n, a.l_scale, a.x_center);
    const BuildOptions options{a.workers, a.fill == "fft" ? NodeFill::fft : NodeFill::symmetry};
    const auto m = build_matrix(cfg, a.alpha, a.l_lim, options);
    const double assembly = clock.seconds();
    save_matrix(m, a.out);
    const auto sums = column_checksums(m);

    std::printf("assembled N=%d alpha=%g L=%g l_lim=%d in %.3f s\n", a.n, a.alpha, a.l_scale, a.l_lim,
                assembly);
    std::vector<std::string> hex;
    for (std::size_t k = 0; k < sums.size(); ++k) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%08x", sums[k]);
        hex.emplace_back(buf);
        std::printf("column %zu crc32 %s\n", k, buf);
    }
    json man = manifest("matrix build");
    man["parameters"] = {{"alpha", a.alpha}, {"l_lim", a.l_lim}, {"grid", grid_json(cfg)},
                         {"fill", a.fill}, {"workers", resolve_workers(a.workers)}};
    man["outputs"] = {a.out};
    man["diagnostics"] = {{"assembly_seconds", assembly}, {"column_crc32", hex}};
    write_manifest(man, a.out + ".json", clock);
    return kOk;
}

// ---------------------------------------------------------------- apply

struct ApplyArgs {
    std::string matrix;
    std::string input;
    std::string function = "u3";
    std::string extension = "even";
    std::string out = "apply.csv";
};

int cmd_apply(const ApplyArgs& a) {
    Stopwatch clock;
    const OperatorMatrix m = load_matrix(a.matrix);
    GridConfig cfg = m.meta().cfg;
    cfg.extension = parse_extension(a.extension.c_str());
    const auto x = physical_nodes(cfg);
    std::vector<double> u;
    if (!a.input.empty()) {
        u = read_samples(a.input);
        if (static_cast<int>(u.size()) == cfg.n) u = extend(u, cfg.extension);
        if (static_cast<int>(u.size()) != cfg.size()) {
            throw std::invalid_argument("input must hold N or 2N samples");
        }
    } else {
        TestFunction f = TestFunction::u3();
        if (a.function == "u1") f = TestFunction::u1();
        else if (a.function == "u2") f = TestFunction::u2();
        else if (a.function != "u3") throw std::invalid_argument("unknown function " + a.function);
        std::vector<double> half(static_cast<std::size_t>(cfg.n));
        for (int j = 0; j < cfg.n; ++j) half[j] = f.value(x[j]).real();
        u = extend(half, cfg.extension);
    }
    const auto lap = fractional_laplacian(u, cfg, m.meta().alpha, m);
    auto out = open_out(a.out);
    out << "j,s,x,u,lap\n";
    const auto s = nodes(cfg);
    for (int j = 0; j < cfg.size(); ++j) {
        out << j << ',' << fmt(s[j]) << ',' << fmt(x[j]) << ',' << fmt(u[j]) << ',' << fmt(lap.values[j])
            << '\n';
    }
    json man = manifest("apply");
    man["parameters"] = {{"alpha", m.meta().alpha}, {"l_lim", m.meta().l_lim}, {"grid", grid_json(cfg)},
                         {"function", a.input.empty() ? a.function : ""}};
    man["inputs"] = {a.matrix, a.input};
    man["outputs"] = {a.out};
    man["diagnostics"] = {{"max_imag", lap.max_imag}, {"top_mode", lap.top_mode}};
    write_manifest(man, a.out + ".json", clock);
    return kOk;
}

// ---------------------------------------------------------------- regrid

struct RegridArgs {
    std::string input;
    int n = 0;
    double l_scale = 1.0;
    double x_center = 0.0;
    std::string extension = "even";
    int to_n = 0;
    std::optional<double> to_l;
    std::optional<double> to_xc;
    std::string out = "regrid.csv";
};

int cmd_regrid(const RegridArgs& a) {
    Stopwatch clock;
    const GridConfig from = make_grid(a.n, a.l_scale, a.x_center, parse_extension(a.extension.c_str()));
    auto u = read_samples(a.input);
    if (static_cast<int>(u.size()) == from.n) u = extend(u, from.extension);
    const GridConfig to = make_grid(a.to_n > 0 ? a.to_n : a.n, a.to_l.value_or(a.l_scale),
                                    a.to_xc.value_or(a.x_center), from.extension);
    const auto coeffs = regrid(forward(u, from), to);
    const auto v = inverse(coeffs);
    const auto x = physical_nodes(to);
    auto out = open_out(a.out);
    out << "j,x,u\n";
    double max_imag = 0.0;
    for (int j = 0; j < to.size(); ++j) {
        out << j << ',' << fmt(x[j]) << ',' << fmt(v[j].real()) << '\n';
        max_imag = std::max(max_imag, std::abs(v[j].imag()));
    }
    json man = manifest("regrid");
    man["parameters"] = {{"from", grid_json(from)}, {"to", grid_json(to)}};
    man["inputs"] = {a.input};
    man["outputs"] = {a.out};
    man["diagnostics"] = {{"max_imag", max_imag}};
    write_manifest(man, a.out + ".json", clock);
    return kOk;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
    std::string target = "mode2";
    int n = 16;
    double l_scale = 1.0;
    int l_lim = 500;
    std::string extension = "even";
    std::string alphas = "0.05:1.95:0.05";
    std::string l_sweep;
    std::vector<double> points{-2.0, 0.0, 1.0};
    double tolerance = 1e-10;
    int workers = 0;
    std::string out = "validate.csv";
};

int cmd_validate(const ValidateArgs& a) {
    Stopwatch clock;
    const GridConfig cfg = make_grid(a.n, a.l_scale, 0.0, parse_extension(a.extension.c_str()));
    auto alphas = parse_progression(a.alphas);
    json man = manifest("validate");
    man["parameters"] = {{"target", a.target},     {"grid", grid_json(cfg)},
                         {"l_lim", a.l_lim},       {"alphas", a.alphas},
                         {"tolerance", a.tolerance}, {"L_sweep", a.l_sweep}};
    man["outputs"] = {a.out};
    auto out = open_out(a.out);
    double global = 0.0;

    if (!a.l_sweep.empty()) {
        if (a.target != "gaussian") throw std::invalid_argument("--L-sweep needs --target gaussian");
        const auto ls = parse_progression(a.l_sweep);
        const auto r = gaussian_l_sweep(a.n, cfg.extension, a.l_lim, alphas, ls, a.workers);
        out << "L,max_error\n";
        for (std::size_t i = 0; i < ls.size(); ++i) out << fmt(ls[i]) << ',' << fmt(r.errors[i]) << '\n';
        global = r.best_error;
        std::printf("best L %.4g  min error %.3e\n", r.best_l, r.best_error);
        man["diagnostics"] = {{"best_L", r.best_l}, {"min_error", r.best_error}};
    } else if (a.target == "mode2" || a.target == "gaussian") {
        const bool mode2 = a.target == "mode2";
        if (mode2) alphas = without_one(alphas);
        const auto r = error_scan(mode2 ? ScanTarget::mode2 : ScanTarget::gaussian, cfg, a.l_lim, alphas,
                                  a.workers);
        out << "alpha,max_error\n";
        for (std::size_t i = 0; i < r.alphas.size(); ++i) {
            out << fmt(r.alphas[i]) << ',' << fmt(r.errors[i]) << '\n';
        }
        global = r.global_max;
        std::printf("global max error %.3e (alpha %.4g)\n", r.global_max, r.worst_alpha);
        man["diagnostics"] = {{"global_max", r.global_max}, {"worst_alpha", r.worst_alpha}};
    } else if (a.target == "quadrature") {
        // each point becomes node N/2 by shifting x_c
        out << "alpha,x,matrix,quadrature,error\n";
        const int j_star = a.n / 2;
        for (const double alpha : alphas) {
            const auto m0 = build_matrix(make_grid(a.n, a.l_scale), alpha, a.l_lim, {a.workers});
            for (const double xq : a.points) {
                const double xc = xq + a.l_scale * std::tan(std::numbers::pi / (2.0 * a.n));
                GridConfig shifted = make_grid(a.n, a.l_scale, xc, cfg.extension);
                const auto m = m0.for_grid(shifted);
                const auto x = physical_nodes(shifted);
                std::vector<double> half(static_cast<std::size_t>(a.n));
                for (int j = 0; j < a.n; ++j) half[j] = std::exp(-x[j] * x[j]);
                const auto lap = fractional_laplacian(extend(half, cfg.extension), shifted, alpha, m);
                const double q = quadrature_fraclap(TestFunction::u3(), x[j_star], alpha).real();
                const double err = std::abs(lap.values[j_star] - q);
                global = std::max(global, err);
                out << fmt(alpha) << ',' << fmt(x[j_star]) << ',' << fmt(lap.values[j_star]) << ',' << fmt(q)
                    << ',' << fmt(err) << '\n';
            }
        }
        std::printf("max |matrix - quadrature| %.3e\n", global);
        man["diagnostics"] = {{"global_max", global}};
    } else {
        throw std::invalid_argument("unknown target " + a.target);
    }
    const bool ok = global <= a.tolerance;
    man["diagnostics"]["within_tolerance"] = ok;
    write_manifest(man, a.out + ".json", clock);
    if (!ok) {
        std::fprintf(stderr, "error %.3e above tolerance %.3e\n", global, a.tolerance);
        return kTolerance;
    }
    return kOk;
}

// ---------------------------------------------------------------- fisher

struct FisherArgs {
    std::optional<double> alpha;
    std::string alpha_sweep;
    int n = 1024;
    double dt = 0.01;
    double t_final = 7.0;
    std::optional<double> l_scale;
    int l_lim = 500;
    std::string fit_window;
    int sample_stride = 10;
    int snapshot_every = 0;
    std::string out_dir = "fisher_out";
    std::string matrix_cache;
    int workers = 0;
};

struct FisherCase {
    double alpha = 0.0;
    double l_scale = 0.0;
    std::string status = "ok";
    std::string message;
    SimulationResult result;
};

int cmd_fisher(const FisherArgs& a) {
    Stopwatch clock;
    std::vector<double> alphas;
    if (a.alpha) alphas.push_back(*a.alpha);
    if (!a.alpha_sweep.empty()) {
        const auto sweep = parse_progression(a.alpha_sweep);
        alphas.insert(alphas.end(), sweep.begin(), sweep.end());
    }
    if (alphas.empty()) throw std::invalid_argument("give --alpha or --alpha-sweep");
    std::optional<std::pair<double, double>> window;
    if (!a.fit_window.empty()) window = parse_interval(a.fit_window);
    std::optional<fs::path> cache;
    if (!a.matrix_cache.empty()) cache = fs::path(a.matrix_cache);

    // Validate every case before any work starts.
    std::vector<FisherRun> runs;
    for (const double alpha : alphas) {
        if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("alpha must lie in (0,2)");
        FisherRun run;
        run.cfg = make_grid(a.n, a.l_scale.value_or(1000.0 / (alpha * alpha * alpha)));
        run.alpha = alpha;
        run.dt = a.dt;
        run.t_final = a.t_final;
        run.l_lim = a.l_lim;
        run.sample_stride = a.sample_stride;
        run.fit_window = window;
        run.validate();
        runs.push_back(run);
    }
    const fs::path dir(a.out_dir);
    fs::create_directories(dir);

    const int count = static_cast<int>(runs.size());
    const int outer = std::min(resolve_workers(a.workers), count);
    const int inner = std::max(1, resolve_workers(a.workers) / outer);
    std::vector<FisherCase> cases(static_cast<std::size_t>(count));
    std::mutex cache_mutex;
    std::mutex print_mutex;

    parallel_for(count, outer, [&](int i) {
        const FisherRun& run = runs[i];
        FisherCase& c = cases[i];
        c.alpha = run.alpha;
        c.l_scale = run.cfg.l_scale;
        Stopwatch case_clock;
        bool from_cache = false;
        try {
            std::optional<OperatorMatrix> m;
            {
                std::scoped_lock lock(cache_mutex);
                m.emplace(obtain_matrix(run.cfg, run.alpha, run.l_lim, cache, inner, from_cache));
            }
            SimulationOptions options;
            std::ofstream field;
            if (a.snapshot_every > 0) {
                options.snapshot_stride = a.snapshot_every;
                field = open_out(dir / ("field_a" + tag(run.alpha) + ".csv"));
                field << "t,j,x,u\n";
                const auto x = physical_nodes(run.cfg);
                options.on_snapshot = [&field, x](const Snapshot& s) {
                    for (std::size_t j = 0; j < s.samples.size() / 2; ++j) {
                        field << fmt(s.t) << ',' << j << ',' << fmt(x[j]) << ',' << fmt(s.samples[j]) << '\n';
                    }
                };
            }
            c.result = run_simulation(run, *m, options);
        } catch (const BlowUpError& e) {
            c.status = "blow-up";
            c.message = e.what();
        } catch (const FrontEscapeError& e) {
            c.status = "front-escape";
            c.message = e.what();
        } catch (const std::invalid_argument& e) {
            c.status = "fit-error";
            c.message = e.what();
        } catch (const std::domain_error& e) {
            c.status = "fit-error";
            c.message = e.what();
        }

        const std::string stem = "a" + tag(run.alpha);
        auto trace = open_out(dir / ("trace_" + stem + ".csv"));
        trace << "t,x05,ln_x05\n";
        const auto& tr = c.result.trace;
        for (std::size_t k = 0; k < tr.times.size(); ++k) {
            trace << fmt(tr.times[k]) << ',' << fmt(tr.x05[k]) << ','
                  << (tr.x05[k] > 0.0 ? fmt(std::log(tr.x05[k])) : std::string("nan")) << '\n';
        }
        json man = manifest("fisher");
        man["parameters"] = {{"alpha", run.alpha},
                             {"grid", grid_json(run.cfg)},
                             {"dt", run.dt},
                             {"t_final", run.t_final},
                             {"l_lim", run.l_lim},
                             {"sample_stride", run.sample_stride},
                             {"fit_window", {run.window().first, run.window().second}},
                             {"krasny_threshold", run.krasny_threshold}};
        man["outputs"] = {(dir / ("trace_" + stem + ".csv")).string()};
        man["matrix_from_cache"] = from_cache;
        man["status"] = c.status;
        if (!c.message.empty()) man["message"] = c.message;
        man["results"] = {{"sigma", tr.sigma},
                          {"inverse_alpha", 1.0 / run.alpha},
                          {"relative_gap", std::abs(tr.sigma - 1.0 / run.alpha) * run.alpha},
                          {"fit_residual", tr.fit_residual},
                          {"steps", c.result.steps}};
        man["diagnostics"] = {{"max_imag", c.result.max_imag},
                              {"min_u_in_window", c.result.min_in_window},
                              {"max_u_in_window", c.result.max_in_window}};
        write_manifest(man, dir / ("run_" + stem + ".json"), case_clock);

        std::scoped_lock lock(print_mutex);
        std::fprintf(stderr, "alpha %.4g: %s (%.1f s)\n", run.alpha, c.status.c_str(), case_clock.seconds());
    });

    auto summary = open_out(dir / "summary.csv");
    summary << "alpha,L,sigma,inv_alpha,rel_gap,fit_residual,status\n";
    std::printf("%8s %10s %10s %10s %s\n", "alpha", "sigma", "1/alpha", "rel_gap", "status");
    bool blew_up = false;
    for (const auto& c : cases) {
        const double sigma = c.result.trace.sigma;
        const double gap = std::abs(sigma - 1.0 / c.alpha) * c.alpha;
        summary << fmt(c.alpha) << ',' << fmt(c.l_scale) << ',' << fmt(sigma) << ',' << fmt(1.0 / c.alpha)
                << ',' << fmt(gap) << ',' << fmt(c.result.trace.fit_residual) << ',' << c.status << '\n';
        std::printf("%8.4g %10.6f %10.6f %10.4g %s\n", c.alpha, sigma, 1.0 / c.alpha, gap, c.status.c_str());
        blew_up = blew_up || c.status == "blow-up";
    }
    json man = manifest("fisher sweep");
    man["parameters"] = {{"alphas", alphas},  {"n", a.n},           {"dt", a.dt},
                         {"t_final", a.t_final}, {"l_lim", a.l_lim}, {"fit_window", a.fit_window},
                         {"matrix_cache", a.matrix_cache}};
    man["outputs"] = {(dir / "summary.csv").string()};
    write_manifest(man, dir / "manifest.json", clock);
    return blew_up ? kBlowUp : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional Laplacian on the real line via a cotangent map"};
    app.set_version_flag("--version", FRACLAP_VERSION);
    app.require_subcommand(1);

    auto* matrix = app.add_subcommand("matrix", "Operator matrix cache");
    matrix->require_subcommand(1);
    MatrixArgs margs;
    auto* build = matrix->add_subcommand("build", "Assemble and save a matrix");
    build->add_option("--n", margs.n, "Half the number of nodes")->required();
    build->add_option("--alpha", margs.alpha, "Order in (0,2)")->required();
    build->add_option("--L", margs.l_scale, "Map scale")->capture_default_str();
    build->add_option("--xc", margs.x_center, "Map centre")->capture_default_str();
    build->add_option("--llim", margs.l_lim, "Series truncation")->capture_default_str();
    build->add_option("--out", margs.out, "Cache file")->required();
    build->add_option("--workers", margs.workers, "Threads, 0 for all cores")->capture_default_str();
    build->add_option("--fill", margs.fill, "symmetry or fft")
        ->check(CLI::IsMember({"symmetry", "fft"}))
        ->capture_default_str();

    ApplyArgs aargs;
    auto* apply_cmd = app.add_subcommand("apply", "Apply a cached matrix to samples");
    apply_cmd->add_option("--matrix", aargs.matrix, "Cache file")->required();
    auto* input = apply_cmd->add_option("--input", aargs.input, "CSV with header u and N or 2N samples");
    apply_cmd->add_option("--function", aargs.function, "Built-in input u1, u2 or u3")->excludes(input);
    apply_cmd->add_option("--extension", aargs.extension, "even or odd")->capture_default_str();
    apply_cmd->add_option("--out", aargs.out, "Output CSV")->capture_default_str();

    RegridArgs rargs;
    auto* regrid_cmd = app.add_subcommand("regrid", "Move samples to another N, L or x_c");
    regrid_cmd->add_option("--input", rargs.input, "CSV with header u")->required();
    regrid_cmd->add_option("--n", rargs.n, "Source N")->required();
    regrid_cmd->add_option("--L", rargs.l_scale, "Source L")->capture_default_str();
    regrid_cmd->add_option("--xc", rargs.x_center, "Source x_c")->capture_default_str();
    regrid_cmd->add_option("--extension", rargs.extension, "even or odd")->capture_default_str();
    regrid_cmd->add_option("--to-n", rargs.to_n, "Target N");
    regrid_cmd->add_option("--to-L", rargs.to_l, "Target L");
    regrid_cmd->add_option("--to-xc", rargs.to_xc, "Target x_c");
    regrid_cmd->add_option("--out", rargs.out, "Output CSV")->capture_default_str();

    ValidateArgs vargs;
    auto* validate = app.add_subcommand("validate", "Error scans against exact values");
    validate->add_option("--target", vargs.target, "mode2, gaussian or quadrature")
        ->check(CLI::IsMember({"mode2", "gaussian", "quadrature"}))
        ->capture_default_str();
    validate->add_option("--n", vargs.n)->capture_default_str();
    validate->add_option("--L", vargs.l_scale)->capture_default_str();
    validate->add_option("--llim", vargs.l_lim)->capture_default_str();
    validate->add_option("--extension", vargs.extension)->capture_default_str();
    validate->add_option("--alphas", vargs.alphas, "a:b:step")->capture_default_str();
    validate->add_option("--L-sweep", vargs.l_sweep, "a:b:step, gaussian only");
    validate->add_option("--x", vargs.points, "Evaluation points for quadrature")->capture_default_str();
    validate->add_option("--tolerance", vargs.tolerance)->capture_default_str();
    validate->add_option("--workers", vargs.workers)->capture_default_str();
    validate->add_option("--out", vargs.out, "Per-case CSV")->capture_default_str();

    FisherArgs fargs;
    auto* fisher = app.add_subcommand("fisher", "Fractional Fisher-KPP front runs");
    fisher->add_option("--alpha", fargs.alpha);
    fisher->add_option("--alpha-sweep", fargs.alpha_sweep, "a:b:step");
    fisher->add_option("--n", fargs.n)->capture_default_str();
    fisher->add_option("--dt", fargs.dt)->capture_default_str();
    fisher->add_option("--tfinal", fargs.t_final)->capture_default_str();
    fisher->add_option("--L", fargs.l_scale, "Default 1000/alpha^3");
    fisher->add_option("--llim", fargs.l_lim)->capture_default_str();
    fisher->add_option("--fit-window", fargs.fit_window, "t_lo:t_hi, default last 40%");
    fisher->add_option("--sample-stride", fargs.sample_stride)->capture_default_str();
    fisher->add_option("--snapshot-every", fargs.snapshot_every, "Steps between field dumps");
    fisher->add_option("--out-dir", fargs.out_dir)->capture_default_str();
    fisher->add_option("--matrix-cache", fargs.matrix_cache, "Directory of cached matrices");
    fisher->add_option("--workers", fargs.workers)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return cmd_matrix_build(margs);
        if (apply_cmd->parsed()) return cmd_apply(aargs);
        if (regrid_cmd->parsed()) return cmd_regrid(rargs);
        if (validate->parsed()) return cmd_validate(vargs);
        if (fisher->parsed()) return cmd_fisher(fargs);
    } catch (const BlowUpError& e) {
        std::cerr << "blow-up: " << e.what() << '\n';
        return kBlowUp;
    } catch (const IoError& e) {
        std::cerr << "io: " << e.what() << '\n';
        return kIo;
    } catch (const MatrixFormatError& e) {
        std::cerr << "format: " << e.what() << '\n';
        return kIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "io: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
