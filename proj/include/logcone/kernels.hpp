#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "logcone/grid.hpp"
#include "logcone/linalg.hpp"

// Data-parallel inner loops behind measure_ops. `kernels` holds the OpenMP
// versions used by the library; `reference` holds plain serial versions that
// the tests compare against and the benchmark times.

namespace logcone::kernels {

/// Full discrete convolution of two grids with identical spacing; values are
/// scaled by the cell volume. Output shape is na + nb - 1 per axis.
std::vector<double> convolve(const DensityGrid& a, const DensityGrid& b);

/// Symmetric-decreasing rearrangement of every line parallel to `axis`:
/// descending values (ties by original index) are placed at n/2, n/2-1,
/// n/2+1, n/2-2, ...
std::vector<double> rearrange_lines(const DensityGrid& g, std::size_t axis);

/// Samples y -> interpolate(g, inv * (y - offset)) * jacobian on `out`,
/// averaging a supersample^d lattice of points inside each output cell.
std::vector<double> resample(const DensityGrid& g, const Matrix& inv,
                             std::span<const double> offset, const GridGeometry& out,
                             double jacobian, std::size_t supersample = 1);

/// Pointwise maximum along `axis`; output is row-major over the remaining axes.
std::vector<double> sup_along_axis(const DensityGrid& g, std::size_t axis);

}  // namespace logcone::kernels

namespace logcone::reference {

std::vector<double> convolve(const DensityGrid& a, const DensityGrid& b);
std::vector<double> rearrange_lines(const DensityGrid& g, std::size_t axis);
std::vector<double> resample(const DensityGrid& g, const Matrix& inv,
                             std::span<const double> offset, const GridGeometry& out,
                             double jacobian, std::size_t supersample = 1);
std::vector<double> sup_along_axis(const DensityGrid& g, std::size_t axis);

}  // namespace logcone::reference
