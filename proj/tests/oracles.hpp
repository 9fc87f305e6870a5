#pragma once

// Reference computations written independently of the library code paths.

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline std::string sample_path() { return std::string(SEQCAST_DATA_DIR) + "/us101_sample.csv"; }

using Rows = std::vector<std::vector<double>>;

// E[x at step n | start] by summing probability * value over every index path of length n.
inline double path_expectation(const Rows& p, const std::vector<double>& grid, std::size_t start, int n) {
    double total = 0.0;
    std::function<void(std::size_t, int, double)> walk = [&](std::size_t state, int depth, double weight) {
        if (depth == n) {
            total += weight * grid[state];
            return;
        }
        for (std::size_t next = 0; next < grid.size(); ++next) {
            if (p[state][next] != 0.0) walk(next, depth + 1, weight * p[state][next]);
        }
    };
    walk(start, 0, 1.0);
    return total;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Integral of exp(-(y-c)^2 / (2 sigma^2)) over [a, b].
inline double gaussian_mass(double c, double sigma, double a, double b) {
    return std::sqrt(2.0 * std::numbers::pi) * sigma * (normal_cdf((b - c) / sigma) - normal_cdf((a - c) / sigma));
}

// Integral of y * exp(-(y-c)^2 / (2 sigma^2)) over [a, b].
inline double gaussian_first_moment(double c, double sigma, double a, double b) {
    const auto g = [&](double y) { return std::exp(-(y - c) * (y - c) / (2.0 * sigma * sigma)); };
    return c * gaussian_mass(c, sigma, a, b) + sigma * sigma * (g(a) - g(b));
}

// Fuzzy prediction from first principles: normalized memberships, row
// probabilities and closed-form truncated moments.
inline double fuzzy_prediction(const std::vector<double>& centers, double sigma, double lo, double hi,
                               const Rows& counts, double y) {
    const std::size_t m = centers.size();
    std::vector<double> theta(m);
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        theta[i] = std::exp(-(y - centers[i]) * (y - centers[i]) / (2.0 * sigma * sigma));
        z += theta[i];
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double row = 0.0;
        for (double c : counts[i]) row += c;
        for (std::size_t j = 0; j < m; ++j) {
            const double p = row > 0.0 ? counts[i][j] / row : (i == j ? 1.0 : 0.0);
            num += theta[i] / z * p * gaussian_first_moment(centers[j], sigma, lo, hi);
            den += theta[i] / z * p * gaussian_mass(centers[j], sigma, lo, hi);
        }
    }
    return num / den;
}

// Central difference of f around x[k].
inline double central_difference(const std::function<double()>& f, double& x, double step) {
    const double saved = x;
    x = saved + step;
    const double plus = f();
    x = saved - step;
    const double minus = f();
    x = saved;
    return (plus - minus) / (2.0 * step);
}

}  // namespace oracle
