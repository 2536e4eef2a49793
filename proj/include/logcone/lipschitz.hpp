#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "logcone/grid.hpp"

namespace logcone {

struct LipschitzReport {
    std::vector<double> direction;
    double constant = 0.0;
    bool discontinuity_flag = false;
    double refinement_ratio = 1.0;
};

inline constexpr double kDiscontinuityRatio = 1.6;

/// max |f(x + h e_i) - f(x)| / h over adjacent samples, with f = 0 off the
/// grid. The discontinuity flag compares against `refined` (same density at
/// half the spacing) when given; otherwise against the grid's own spacing-2h
/// differences. A jump doubles the constant when the step halves.
LipschitzReport directional_lipschitz(const DensityGrid& g, std::size_t axis,
                                      const DensityGrid* refined = nullptr);

/// ∫ tent_{δ,z} dμ / ∫ tent_{δ,z} dx with tent(x) = max(1 - |x - z| / δ, 0),
/// both integrals taken as sums over the grid lattice.
double smooth_functional(const DensityGrid& g, double delta, std::span<const double> z);

struct MainLemmaValue {
    double value = 0.0;   // ∫ g'(v) h'(z - v) dv over the hyperplane e_i^⊥
    double var_g = 0.0;   // axis-i variances
    double var_h = 0.0;
    double product() const;  // value * sqrt(var_g * var_h)
};

/// Requires cov(g) + cov(h) = Id and both diagonal, within 1e-4.
MainLemmaValue mainlemma_integral(const DensityGrid& g, const DensityGrid& h, std::size_t axis,
                                  std::span<const double> z);

/// L(convolve(X, Y), e_axis) * sqrt(varX (1 - varX)) where X, Y are the named
/// families with per-axis variances varX and 1 - varX.
double lipschitz_scaling_check(double var_x, const std::string& family_x,
                               const std::string& family_y, std::size_t dim, double h,
                               std::size_t axis = 0);

struct SweepRow {
    std::string family;
    std::size_t dim = 1;
    std::size_t axis = 0;
    double var_x = 0.0;
    double lipschitz = 0.0;
    double product = 0.0;
};

std::vector<SweepRow> lipschitz_sweep(const std::string& family_x, const std::string& family_y,
                                      std::size_t dim, double h,
                                      std::span<const double> splits, std::size_t axis = 0);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// ∫ |f(t + s) - f(t)| dt for a 1-D grid (f interpolated, zero off-grid).
double shift_variation(const DensityGrid& g, double s);

}  // namespace logcone
