#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dcakit {

/// Thrown by the fitting entry points when the data cannot support the
/// requested estimate (too few usable values).
struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordinary least squares for y = slope * x + intercept, with the coefficient
/// of determination. Needs at least two distinct x values.
struct LineFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    assert(xs.size() == ys.size() && xs.size() >= 2);
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LineFit f;
    if (sxx == 0) return f;  // vertical data; caller treats slope 0 as degenerate
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

}  // namespace dcakit
