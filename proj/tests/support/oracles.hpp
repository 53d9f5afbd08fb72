#pragma once

// Test-side oracles, kept independent of the library's implementation paths.

#include <functional>
#include <optional>

#include "rnderiv/rational.hpp"

namespace rnderiv::oracles {

// Cantor function via the base-3 digit rule: expand x in base 3 up to the
// first digit 1, map digits 2 -> 1, read the result in base 2. Returns
// nullopt when the expansion does not terminate within `max_digits` (only
// happens off the triadic grid).
inline std::optional<Rat> cantor_cdf(const Rat& x, int max_digits = 64) {
    if (x <= 0) return Rat(0);
    if (x >= 1) return Rat(1);
    Int p = x.get_num(), q = x.get_den();
    Rat value(0);
    Rat bit = make_rat(1, 2);
    for (int i = 0; i < max_digits; ++i) {
        if (p == 0) return value;
        Int three_p = p * 3;
        Int digit = three_p / q;
        if (digit == 1) return value + bit; // lands on the middle-third plateau
        if (digit >= 2) value += bit;
        bit /= 2;
        p = three_p - digit * q;
    }
    return std::nullopt;
}

// Midpoint Riemann sum of f over [a, b]; the independent cross-check for
// exact density masses.
inline double riemann(const std::function<double(double)>& f, double a, double b, int n = 1 << 20) {
    double h = (b - a) / n, acc = 0;
    for (int i = 0; i < n; ++i) acc += f(a + (i + 0.5) * h);
    return acc * h;
}

// Minimum of w^T G w over the simplex by brute grid search (n <= 3).
inline double min_norm_grid(const std::vector<std::vector<double>>& G, int resolution = 200) {
    const std::size_t n = G.size();
    auto quad = [&](const std::vector<double>& w) {
        double acc = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) acc += w[i] * G[i][j] * w[j];
        return acc;
    };
    double best = 1e300;
    if (n == 1) return G[0][0];
    if (n == 2) {
        for (int i = 0; i <= resolution; ++i) {
            double t = double(i) / resolution;
            best = std::min(best, quad({t, 1 - t}));
        }
        return best;
    }
    for (int i = 0; i <= resolution; ++i)
        for (int j = 0; i + j <= resolution; ++j) {
            double a = double(i) / resolution, b = double(j) / resolution;
            best = std::min(best, quad({a, b, 1 - a - b}));
        }
    return best;
}

} // namespace rnderiv::oracles
