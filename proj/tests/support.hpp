#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "logcone/grid.hpp"

namespace testing {

inline double normal_pdf(double x, double var = 1.0) {
    return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

inline logcone::GridGeometry centred(std::size_t dim, std::size_t half, double h) {
    return {std::vector<std::size_t>(dim, 2 * half + 1),
            std::vector<double>(dim, -static_cast<double>(half) * h), std::vector<double>(dim, h)};
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace testing
