#include "fraclap/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fraclap {

void GridConfig::validate() const {
    if (n < 2 || n % 2 != 0) {
        throw std::invalid_argument("grid: n must be even and >= 2, got " + std::to_string(n));
    }
    if (!(l_scale > 0.0) || !std::isfinite(l_scale)) {
        throw std::invalid_argument("grid: L must be positive and finite");
    }
    if (!std::isfinite(x_center)) {
        throw std::invalid_argument("grid: x_c must be finite");
    }
}

GridConfig make_grid(int n, double l_scale, double x_center, Extension extension) {
    GridConfig cfg{n, l_scale, x_center, extension};
    cfg.validate();
    return cfg;
}

double node(const GridConfig& cfg, int j) {
    return std::numbers::pi * (2.0 * j + 1.0) / (2.0 * cfg.n);
}

std::vector<double> nodes(const GridConfig& cfg) {
    std::vector<double> s(static_cast<size_t>(cfg.size()));
    for (int j = 0; j < cfg.size(); ++j) s[j] = node(cfg, j);
    return s;
}

double s_to_x(const GridConfig& cfg, double s) {
    const double r = std::remainder(s, std::numbers::pi);
    if (r == 0.0) {
        throw std::domain_error("s_to_x: s is a multiple of pi");
    }
    return cfg.x_center + cfg.l_scale * std::cos(s) / std::sin(s);
}

double x_to_s(const GridConfig& cfg, double x, Branch branch) {
    // arccot(y) on (0, pi) as atan2(1, y); scaled by L > 0 to avoid the division.
    const double s = std::atan2(cfg.l_scale, x - cfg.x_center);
    return branch == Branch::lower ? s : s + std::numbers::pi;
}

std::vector<double> physical_nodes(const GridConfig& cfg) {
    std::vector<double> x(static_cast<size_t>(cfg.size()));
    for (int j = 0; j < cfg.n; ++j) {
        const double s = node(cfg, j);
        x[j] = cfg.x_center + cfg.l_scale * std::cos(s) / std::sin(s);
        x[j + cfg.n] = x[j];
    }
    return x;
}

Extension parse_extension(const char* name) {
    const std::string_view v(name);
    if (v == "even") return Extension::even;
    if (v == "odd") return Extension::odd;
    throw std::invalid_argument("unknown extension '" + std::string(v) + "'");
}

const char* to_string(Extension e) { return e == Extension::even ? "even" : "odd"; }

}  // namespace fraclap
