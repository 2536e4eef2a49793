#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "logcone/grid.hpp"
#include "logcone/linalg.hpp"

namespace logcone {

/// Dense real matrix used as a pushforward x -> T x.
class LinearMap {
public:
    LinearMap() = default;
    explicit LinearMap(Matrix m);
    LinearMap(std::size_t rows, std::size_t cols, std::vector<double> entries)
        : LinearMap(Matrix(rows, cols, std::move(entries))) {}

    const Matrix& matrix() const noexcept { return m_; }
    std::size_t rows() const noexcept { return m_.rows(); }
    std::size_t cols() const noexcept { return m_.cols(); }

    bool is_invertible(double tol = 1e-12) const;
    bool has_orthonormal_rows(double tol = 1e-10) const;
    bool is_orthogonal_projection(double tol = 1e-10) const;  // P² = P = Pᵀ

private:
    Matrix m_;
};

/// x -> linear * x + offset
struct AffineMap {
    Matrix linear;
    std::vector<double> offset;

    std::vector<double> operator()(std::span<const double> x) const;
};

/// Sup-profile along one axis: a (dim-1)-dimensional grid plus the suppressed axis.
struct ProfileGrid {
    DensityGrid grid;
    std::size_t axis = 0;
};

struct Isotropized {
    DensityGrid grid;
    AffineMap map;
};

DensityGrid tensor_product(const DensityGrid& a, const DensityGrid& b);

/// Geometry covering the image of g's support under `map`. Keeps roughly the
/// input resolution: spacing ~ min input spacing * |det|^(1/d).
GridGeometry image_geometry(const DensityGrid& g, const AffineMap& map);

/// result(y) = g(T⁻¹ y) / |det T|, resampled onto `out`.
DensityGrid linear_image(const DensityGrid& g, const LinearMap& map, const GridGeometry& out);
/// Same with an automatically chosen output grid. Scaled permutation maps
/// (entries within 1e-12 of one nonzero per row) are applied exactly by
/// permuting and rescaling the lattice instead of resampling.
DensityGrid linear_image(const DensityGrid& g, const LinearMap& map);

DensityGrid affine_image(const DensityGrid& g, const AffineMap& map, const GridGeometry& out);
DensityGrid affine_image(const DensityGrid& g, const AffineMap& map);

/// Density of the orthogonal projection onto span(directions), expressed in
/// the coordinates given by the (orthonormal) directions.
DensityGrid project(const DensityGrid& g, const std::vector<std::vector<double>>& directions);

/// Integrates out every axis not listed in `keep` (output axes follow `keep`'s order).
DensityGrid marginal(const DensityGrid& g, std::span<const std::size_t> keep);

/// Pushforward by an arbitrary LinearMap: invertible maps go through
/// linear_image, orthogonal projections (k×d with orthonormal rows, or a
/// symmetric idempotent d×d) through project.
DensityGrid pushforward(const DensityGrid& g, const LinearMap& map);

DensityGrid convolve(const DensityGrid& a, const DensityGrid& b);

/// Symmetric-decreasing rearrangement along `axis`. The output axis is
/// re-centred on 0 (origin = -(n-1)h/2); other axes are unchanged.
DensityGrid symmetrize(const DensityGrid& g, std::size_t axis);

Isotropized isotropize(const DensityGrid& g);

ProfileGrid sup_profile(const DensityGrid& g, std::size_t axis);

DensityGrid restrict_hyperplane(const DensityGrid& g, std::size_t axis, double level);

}  // namespace logcone
