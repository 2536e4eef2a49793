#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "logcone/spectra.hpp"

namespace logcone {

inline constexpr std::size_t kMaxDim = 3;
inline constexpr double kGridTol = 1e-6;       // "normalized" / "isotropic" tolerance
inline constexpr double kLogConcaveTol = 1e-7; // on log values

/// Regular axis-aligned sampling lattice. Sample k on axis a sits at
/// origin[a] + k * spacing[a]; each sample stands for the cell of width
/// spacing[a] centred on it (midpoint quadrature).
struct GridGeometry {
    std::vector<std::size_t> shape;
    std::vector<double> origin;
    std::vector<double> spacing;

    std::size_t dim() const noexcept { return shape.size(); }
    std::size_t size() const;
    std::vector<std::size_t> strides() const;
    double cell_volume() const;
    double coordinate(std::size_t axis, std::size_t index) const {
        return origin[axis] + static_cast<double>(index) * spacing[axis];
    }
    // Cell region covered on one axis: [lower, upper].
    double lower(std::size_t axis) const { return origin[axis] - 0.5 * spacing[axis]; }
    double upper(std::size_t axis) const {
        return origin[axis] + (static_cast<double>(shape[axis]) - 0.5) * spacing[axis];
    }
    bool centered_on_axis(std::size_t axis, double tol = 1e-9) const;

    void validate() const;  // throws InvalidGrid
    friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

/// Nonnegative density sampled on a GridGeometry, values row-major (last axis fastest).
class DensityGrid {
public:
    DensityGrid() = default;
    DensityGrid(GridGeometry geometry, std::vector<double> values);

    template <typename F>
    static DensityGrid from_function(GridGeometry geometry, F&& f);

    const GridGeometry& geometry() const noexcept { return geom_; }
    std::size_t dim() const noexcept { return geom_.dim(); }
    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<std::size_t>& shape() const noexcept { return geom_.shape; }
    const std::vector<double>& origin() const noexcept { return geom_.origin; }
    const std::vector<double>& spacing() const noexcept { return geom_.spacing; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t flat) const { return values_[flat]; }

    std::vector<std::size_t> unravel(std::size_t flat) const;
    std::vector<double> point(std::size_t flat) const;
    double max_value() const;

    friend bool operator==(const DensityGrid&, const DensityGrid&) = default;

private:
    GridGeometry geom_;
    std::vector<double> values_;
};

template <typename F>
DensityGrid DensityGrid::from_function(GridGeometry geometry, F&& f) {
    geometry.validate();
    const std::size_t n = geometry.size();
    const auto strides = geometry.strides();
    std::vector<double> values(n);
    std::vector<double> x(geometry.dim());
    for (std::size_t flat = 0; flat < n; ++flat) {
        std::size_t rem = flat;
        for (std::size_t a = 0; a < geometry.dim(); ++a) {
            x[a] = geometry.coordinate(a, rem / strides[a]);
            rem %= strides[a];
        }
        values[flat] = f(std::span<const double>(x));
    }
    return DensityGrid(std::move(geometry), std::move(values));
}

/// Geometry with n samples per axis whose cells tile [lo, hi] exactly.
GridGeometry tiling_geometry(std::span<const double> lo, std::span<const double> hi,
                             std::span<const std::size_t> counts);

struct MomentSummary {
    std::vector<double> mean;
    CovMatrix cov;
    double sup_density = 0.0;
    double mass = 0.0;
};

double mass(const DensityGrid& g);
DensityGrid normalize(const DensityGrid& g);
MomentSummary moments(const DensityGrid& g, double tol = kGridTol);
bool is_isotropic(const MomentSummary& m, double tol = kGridTol);

/// sup_density^(1/dim) of an isotropic grid; NotIsotropic otherwise.
double isotropic_constant(const DensityGrid& g, double tol = kGridTol);

struct DirectionSet {
    bool axes = true;
    bool diagonals = false;  // every {-1,0,1} step with at least two nonzero entries
};

struct LogConcavityReport {
    bool log_concave = true;
    double worst_violation = 0.0;    // max of log f(x-h) + log f(x+h) - 2 log f(x)
    std::vector<double> worst_point; // where it occurred (empty when none)
    std::size_t support_gaps = 0;    // lines with a zero between positives
    std::size_t triples_checked = 0;
};

LogConcavityReport check_log_concave(const DensityGrid& g, DirectionSet directions = {},
                                     double tol = kLogConcaveTol);

/// Reorders axes: output axis k is input axis perm[k].
DensityGrid permute_axes(const DensityGrid& g, std::span<const std::size_t> perm);

/// Behaviour of the interpolant outside the sample hull.
enum class EdgeRule {
    Hold,  // keep the edge value over the outer half cell, then 0
    Ramp,  // fall linearly to 0 over one cell (zero-padded samples); continuous
};

/// Multilinear interpolant of the samples; 0 far outside the grid.
double interpolate(const DensityGrid& g, std::span<const double> x, EdgeRule edge = EdgeRule::Hold);

/// max |a - b| over the sample points of both grids, with the other grid
/// evaluated through interpolate().
double sup_distance(const DensityGrid& a, const DensityGrid& b);

}  // namespace logcone
