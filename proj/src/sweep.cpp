#include "fraclap/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fraclap {

namespace {

double to_number(std::string_view text) {
    const std::string s(text);
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    size_t start = 0;
    for (size_t pos = text.find(sep); pos != std::string_view::npos; pos = text.find(sep, start)) {
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    parts.push_back(text.substr(start));
    return parts;
}

}  // namespace

std::vector<double> progression(double lo, double hi, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("progression: step must be positive");
    if (hi < lo) throw std::invalid_argument("progression: upper bound below lower bound");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    for (long i = 0; i < count; ++i) {
        out.push_back(std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9);
    }
    return out;
}

std::vector<double> parse_progression(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() == 1) return {to_number(parts[0])};
    if (parts.size() != 3) {
        throw std::invalid_argument("expected a:b:step, got '" + std::string(text) + "'");
    }
    return progression(to_number(parts[0]), to_number(parts[1]), to_number(parts[2]));
}

std::pair<double, double> parse_interval(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) {
        throw std::invalid_argument("expected a:b, got '" + std::string(text) + "'");
    }
    const double a = to_number(parts[0]);
    const double b = to_number(parts[1]);
    if (!(b > a)) throw std::invalid_argument("interval must satisfy a < b");
    return {a, b};
}

std::vector<double> without_one(std::vector<double> grid) {
    std::erase_if(grid, [](double a) { return a == 1.0; });
    return grid;
}

}  // namespace fraclap
