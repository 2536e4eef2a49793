#include "logcone/measure_ops.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "logcone/error.hpp"
#include "logcone/kernels.hpp"

namespace logcone {

LinearMap::LinearMap(Matrix m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.cols() == 0) throw Error(ErrorCode::BadParameters, "empty linear map");
    for (double v : m_.entries())
        if (!std::isfinite(v)) throw Error(ErrorCode::BadParameters, "non-finite map entry");
}

bool LinearMap::is_invertible(double tol) const {
    return m_.square() && std::abs(determinant(m_)) > tol;
}

bool LinearMap::has_orthonormal_rows(double tol) const {
    if (m_.rows() > m_.cols()) return false;
    const Matrix gram = m_ * m_.transposed();
    return (gram - Matrix::identity(m_.rows())).max_abs() <= tol;
}

bool LinearMap::is_orthogonal_projection(double tol) const {
    if (!m_.square()) return false;
    return (m_ - m_.transposed()).max_abs() <= tol && (m_ * m_ - m_).max_abs() <= tol;
}

std::vector<double> AffineMap::operator()(std::span<const double> x) const {
    auto y = logcone::apply(linear, x);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += offset[k];
    return y;
}

namespace {

// Points averaged per output cell and axis when resampling through a
// general map; point sampling alone aliases sharp support edges.
constexpr std::size_t kSupersample[] = {4, 4, 2};

AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
    AffineMap out{outer.linear * inner.linear, logcone::apply(outer.linear, inner.offset)};
    for (std::size_t k = 0; k < out.offset.size(); ++k) out.offset[k] += outer.offset[k];
    return out;
}

bool nearly_diagonal(const Matrix& m) {
    double diag_scale = 0.0;
    for (std::size_t k = 0; k < m.rows(); ++k) diag_scale = std::max(diag_scale, std::abs(m(k, k)));
    return m.is_diagonal(1e-12 * diag_scale);
}

// For a scaled permutation matrix, perm[r] is the column holding row r's
// only nonzero entry.
std::optional<std::vector<std::size_t>> monomial_columns(const Matrix& m) {
    const double tol = 1e-12 * m.max_abs();
    std::vector<std::size_t> perm(m.rows());
    std::vector<bool> used(m.cols(), false);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::size_t hits = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (std::abs(m(r, c)) <= tol) continue;
            if (++hits > 1 || used[c]) return std::nullopt;
            perm[r] = c;
            used[c] = true;
        }
        if (hits == 0) return std::nullopt;
    }
    return perm;
}

// Exact change of variables x -> diag * x + offset: the lattice is mapped
// onto itself, so no resampling happens.
DensityGrid diagonal_transform(const DensityGrid& g, std::span<const double> diag,
                               std::span<const double> offset) {
    const std::size_t d = g.dim();
    GridGeometry out = g.geometry();
    double jac = 1.0;
    std::vector<bool> flip(d, false);
    for (std::size_t a = 0; a < d; ++a) {
        if (diag[a] == 0.0) throw Error(ErrorCode::SingularMap, "zero diagonal entry");
        jac *= std::abs(diag[a]);
        const double h = g.spacing()[a];
        const double last = g.geometry().coordinate(a, g.shape()[a] - 1);
        out.spacing[a] = std::abs(diag[a]) * h;
        if (diag[a] > 0) {
            out.origin[a] = diag[a] * g.origin()[a] + offset[a];
        } else {
            out.origin[a] = diag[a] * last + offset[a];
            flip[a] = true;
        }
    }
    const auto st = g.geometry().strides();
    std::vector<double> values(g.size());
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        std::size_t rem = flat, src = 0;
        for (std::size_t a = 0; a < d; ++a) {
            std::size_t i = rem / st[a];
            rem %= st[a];
            if (flip[a]) i = g.shape()[a] - 1 - i;
            src += i * st[a];
        }
        values[flat] = g[src] / jac;
    }
    return DensityGrid(std::move(out), std::move(values));
}

struct SupportBox {
    std::vector<double> lo, hi;  // where the resampling interpolant of the positive cells ends
};

SupportBox support_box(const DensityGrid& g) {
    const std::size_t d = g.dim();
    std::vector<std::size_t> imin(d, SIZE_MAX), imax(d, 0);
    bool any = false;
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        if (g[flat] <= 0.0) continue;
        any = true;
        const auto idx = g.unravel(flat);
        for (std::size_t a = 0; a < d; ++a) {
            imin[a] = std::min(imin[a], idx[a]);
            imax[a] = std::max(imax[a], idx[a]);
        }
    }
    if (!any) throw Error(ErrorCode::ZeroMass, "grid has no positive cells");
    SupportBox box;
    for (std::size_t a = 0; a < d; ++a) {
        const double h = g.spacing()[a];
        box.lo.push_back(g.geometry().coordinate(a, imin[a]) - h);
        box.hi.push_back(g.geometry().coordinate(a, imax[a]) + h);
    }
    return box;
}

GridGeometry drop_axis(const GridGeometry& g, std::size_t axis) {
    GridGeometry out;
    for (std::size_t a = 0; a < g.dim(); ++a) {
        if (a == axis) continue;
        out.shape.push_back(g.shape[a]);
        out.origin.push_back(g.origin[a]);
        out.spacing.push_back(g.spacing[a]);
    }
    return out;
}

bool grid_less(const DensityGrid& a, const DensityGrid& b) {
    if (a.shape() != b.shape()) return a.shape() < b.shape();
    if (a.origin() != b.origin()) return a.origin() < b.origin();
    if (a.spacing() != b.spacing()) return a.spacing() < b.spacing();
    return std::lexicographical_compare(a.values().begin(), a.values().end(), b.values().begin(),
                                        b.values().end());
}

DensityGrid resample_to_spacing(const DensityGrid& g, std::span<const double> target) {
    const std::size_t d = g.dim();
    GridGeometry out;
    for (std::size_t a = 0; a < d; ++a) {
        const double lo = g.geometry().lower(a);
        const double extent = g.geometry().upper(a) - lo;
        const auto n = static_cast<std::size_t>(std::ceil(extent / target[a] - 1e-9));
        out.shape.push_back(std::max<std::size_t>(n, 1));
        out.spacing.push_back(target[a]);
        out.origin.push_back(lo + 0.5 * target[a]);
    }
    const std::vector<double> zero(d, 0.0);
    DensityGrid r(out, kernels::resample(g, Matrix::identity(d), zero, out, 1.0));
    const double m_in = mass(g), m_out = mass(r);
    if (m_out <= 0.0) throw Error(ErrorCode::ZeroMass, "resampling lost all mass");
    std::vector<double> values(r.values().begin(), r.values().end());
    for (double& v : values) v *= m_in / m_out;
    return DensityGrid(std::move(out), std::move(values));
}

void require_axis(const DensityGrid& g, std::size_t axis) {
    if (axis >= g.dim()) {
        std::ostringstream msg;
        msg << "axis " << axis << " out of range for dimension " << g.dim();
        throw Error(ErrorCode::BadParameters, msg.str());
    }
}

}  // namespace

DensityGrid tensor_product(const DensityGrid& a, const DensityGrid& b) {
    if (a.dim() + b.dim() > kMaxDim) {
        throw Error(ErrorCode::DimensionOverflow, "tensor product would exceed dimension 3");
    }
    GridGeometry geom = a.geometry();
    const auto& gb = b.geometry();
    geom.shape.insert(geom.shape.end(), gb.shape.begin(), gb.shape.end());
    geom.origin.insert(geom.origin.end(), gb.origin.begin(), gb.origin.end());
    geom.spacing.insert(geom.spacing.end(), gb.spacing.begin(), gb.spacing.end());
    std::vector<double> values;
    values.reserve(a.size() * b.size());
    for (double va : a.values())
        for (double vb : b.values()) values.push_back(va * vb);
    return DensityGrid(std::move(geom), std::move(values));
}

GridGeometry image_geometry(const DensityGrid& g, const AffineMap& map) {
    const std::size_t d = g.dim();
    const SupportBox box = support_box(g);
    std::vector<double> lo(d, INFINITY), hi(d, -INFINITY);
    std::vector<double> corner(d);
    for (std::size_t c = 0; c < (std::size_t{1} << d); ++c) {
        for (std::size_t a = 0; a < d; ++a) corner[a] = ((c >> a) & 1U) ? box.hi[a] : box.lo[a];
        const auto y = map(corner);
        for (std::size_t a = 0; a < d; ++a) {
            lo[a] = std::min(lo[a], y[a]);
            hi[a] = std::max(hi[a], y[a]);
        }
    }
    const double hmin = *std::min_element(g.spacing().begin(), g.spacing().end());
    const double target =
        hmin * std::pow(std::abs(determinant(map.linear)), 1.0 / static_cast<double>(d));
    std::vector<std::size_t> counts(d);
    for (std::size_t a = 0; a < d; ++a)
        counts[a] = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                 std::ceil((hi[a] - lo[a]) / target - 1e-9)));
    return tiling_geometry(lo, hi, counts);
}

DensityGrid affine_image(const DensityGrid& g, const AffineMap& map, const GridGeometry& out) {
    const std::size_t d = g.dim();
    if (!map.linear.square() || map.linear.rows() != d || map.offset.size() != d || out.dim() != d)
        throw Error(ErrorCode::DimensionMismatch, "affine map does not match grid dimension");
    const double det = determinant(map.linear);
    if (!(std::abs(det) > 1e-12)) {
        throw Error(ErrorCode::SingularMap, "map is singular; use project for degenerate maps");
    }
    out.validate();
    return DensityGrid(out, kernels::resample(g, inverse(map.linear), map.offset, out,
                                              1.0 / std::abs(det), kSupersample[d - 1]));
}

DensityGrid affine_image(const DensityGrid& g, const AffineMap& map) {
    const std::size_t d = g.dim();
    if (!map.linear.square() || map.linear.rows() != d || map.offset.size() != d)
        throw Error(ErrorCode::DimensionMismatch, "affine map does not match grid dimension");
    if (!(std::abs(determinant(map.linear)) > 1e-12)) {
        throw Error(ErrorCode::SingularMap, "map is singular; use project for degenerate maps");
    }
    if (const auto perm = monomial_columns(map.linear)) {
        std::vector<double> diag(d);
        bool identity_perm = true;
        for (std::size_t a = 0; a < d; ++a) {
            diag[a] = map.linear(a, (*perm)[a]);
            identity_perm = identity_perm && (*perm)[a] == a;
        }
        return diagonal_transform(identity_perm ? g : permute_axes(g, *perm), diag, map.offset);
    }
    return affine_image(g, map, image_geometry(g, map));
}

DensityGrid linear_image(const DensityGrid& g, const LinearMap& map, const GridGeometry& out) {
    return affine_image(g, AffineMap{map.matrix(), std::vector<double>(map.rows(), 0.0)}, out);
}

DensityGrid linear_image(const DensityGrid& g, const LinearMap& map) {
    return affine_image(g, AffineMap{map.matrix(), std::vector<double>(map.rows(), 0.0)});
}

DensityGrid marginal(const DensityGrid& g, std::span<const std::size_t> keep) {
    const std::size_t d = g.dim();
    std::vector<bool> kept(d, false);
    for (std::size_t a : keep) {
        require_axis(g, a);
        if (kept[a]) throw Error(ErrorCode::BadParameters, "axis listed twice");
        kept[a] = true;
    }
    if (keep.empty()) throw Error(ErrorCode::BadParameters, "marginal must keep an axis");
    GridGeometry out;
    double vol = 1.0;
    for (std::size_t a : keep) {
        out.shape.push_back(g.shape()[a]);
        out.origin.push_back(g.origin()[a]);
        out.spacing.push_back(g.spacing()[a]);
    }
    for (std::size_t a = 0; a < d; ++a)
        if (!kept[a]) vol *= g.spacing()[a];
    const auto ost = out.strides();
    std::vector<double> values(out.size(), 0.0);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const auto idx = g.unravel(flat);
        std::size_t dst = 0;
        for (std::size_t k = 0; k < keep.size(); ++k) dst += idx[keep[k]] * ost[k];
        values[dst] += g[flat];
    }
    for (double& v : values) v *= vol;
    return DensityGrid(std::move(out), std::move(values));
}

DensityGrid project(const DensityGrid& g, const std::vector<std::vector<double>>& directions) {
    const std::size_t d = g.dim();
    const std::size_t k = directions.size();
    if (k < 1 || k >= d) {
        throw Error(ErrorCode::NotOrthonormal, "need between 1 and dim-1 directions");
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (directions[i].size() != d)
            throw Error(ErrorCode::DimensionMismatch, "direction length differs from dimension");
        for (std::size_t j = i; j < k; ++j) {
            const double expect = i == j ? 1.0 : 0.0;
            if (std::abs(dot(directions[i], directions[j]) - expect) > 1e-10)
                throw Error(ErrorCode::NotOrthonormal, "directions are not orthonormal");
        }
    }

    // Signed coordinate axes: marginalise directly, no resampling.
    std::vector<std::size_t> axes;
    std::vector<double> signs;
    for (const auto& dir : directions) {
        std::size_t hit = d;
        for (std::size_t a = 0; a < d; ++a)
            if (std::abs(std::abs(dir[a]) - 1.0) <= 1e-12) hit = a;
        bool clean = hit < d;
        for (std::size_t a = 0; a < d && clean; ++a)
            if (a != hit && std::abs(dir[a]) > 1e-12) clean = false;
        if (!clean) break;
        axes.push_back(hit);
        signs.push_back(dir[hit] > 0 ? 1.0 : -1.0);
    }
    if (axes.size() == k) {
        const DensityGrid m = marginal(g, axes);
        return diagonal_transform(m, signs, std::vector<double>(k, 0.0));
    }

    // Complete to an orthonormal basis, rotate, then integrate out the rest.
    std::vector<std::vector<double>> basis = directions;
    for (std::size_t e = 0; e < d && basis.size() < d; ++e) {
        std::vector<double> v(d, 0.0);
        v[e] = 1.0;
        for (const auto& b : basis) {
            const double c = dot(v, b);
            for (std::size_t a = 0; a < d; ++a) v[a] -= c * b[a];
        }
        const double n = norm2(v);
        if (n < 1e-6) continue;
        for (double& x : v) x /= n;
        basis.push_back(std::move(v));
    }
    Matrix q(d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) q(r, c) = basis[r][c];
    const AffineMap rotation{q, std::vector<double>(d, 0.0)};
    const DensityGrid rotated = affine_image(g, rotation, image_geometry(g, rotation));
    std::vector<std::size_t> keep(k);
    for (std::size_t i = 0; i < k; ++i) keep[i] = i;
    return marginal(rotated, keep);
}

DensityGrid pushforward(const DensityGrid& g, const LinearMap& map) {
    if (map.cols() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "map columns != grid dim");
    if (map.rows() == map.cols() && map.is_invertible()) return linear_image(g, map);
    if (map.rows() < map.cols() && map.has_orthonormal_rows()) {
        std::vector<std::vector<double>> dirs;
        for (std::size_t r = 0; r < map.rows(); ++r) dirs.push_back(map.matrix().row(r));
        return project(g, dirs);
    }
    if (map.is_orthogonal_projection()) {
        const auto eig = eigendecompose(CovMatrix(map.matrix()));
        std::vector<std::vector<double>> dirs;
        for (std::size_t k = 0; k < eig.values.size(); ++k)
            if (eig.values[k] > 0.5) dirs.push_back(eig.vector(k));
        if (dirs.size() == g.dim()) return g;
        if (dirs.empty()) throw Error(ErrorCode::SingularMap, "zero projection");
        return project(g, dirs);
    }
    throw Error(ErrorCode::SingularMap, "map is neither invertible nor an orthogonal projection");
}

DensityGrid convolve(const DensityGrid& a_in, const DensityGrid& b_in) {
    if (a_in.dim() != b_in.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "convolution operands differ in dimension");
    }
    const std::size_t d = a_in.dim();
    DensityGrid a = a_in;
    DensityGrid b = b_in;
    if (a.spacing() != b.spacing()) {
        bool close = true;
        std::vector<double> finer(d);
        for (std::size_t k = 0; k < d; ++k) {
            const double ha = a.spacing()[k], hb = b.spacing()[k];
            if (std::abs(ha - hb) > 1e-12 * std::max(ha, hb)) close = false;
            finer[k] = std::min(ha, hb);
        }
        if (close) {
            GridGeometry gb = b.geometry();
            gb.spacing = a.spacing();
            b = DensityGrid(std::move(gb), std::vector<double>(b.values().begin(), b.values().end()));
        } else {
            if (a.spacing() != finer) a = resample_to_spacing(a, finer);
            if (b.spacing() != finer) b = resample_to_spacing(b, finer);
        }
    }
    // Fixed operand order makes convolve(a, b) and convolve(b, a) bit-identical.
    if (grid_less(b, a)) std::swap(a, b);

    GridGeometry out;
    for (std::size_t k = 0; k < d; ++k) {
        out.shape.push_back(a.shape()[k] + b.shape()[k] - 1);
        out.origin.push_back(a.origin()[k] + b.origin()[k]);
        out.spacing.push_back(a.spacing()[k]);
    }
    return DensityGrid(std::move(out), kernels::convolve(a, b));
}

DensityGrid symmetrize(const DensityGrid& g, std::size_t axis) {
    require_axis(g, axis);
    GridGeometry out = g.geometry();
    out.origin[axis] = -0.5 * static_cast<double>(out.shape[axis] - 1) * out.spacing[axis];
    return DensityGrid(std::move(out), kernels::rearrange_lines(g, axis));
}

Isotropized isotropize(const DensityGrid& g) {
    const std::size_t d = g.dim();
    DensityGrid cur = normalize(g);
    MomentSummary m = moments(cur);
    const auto eig = eigendecompose(m.cov);
    if (eig.values.front() <= 1e-10) {
        throw Error(ErrorCode::DegenerateCovariance,
                    "covariance is singular: measure concentrates near a lower-dimensional subspace");
    }

    auto whitening = [&](const MomentSummary& mm) {
        AffineMap w{spectral_function(mm.cov, [](double x) { return 1.0 / std::sqrt(x); }).matrix(),
                    {}};
        w.offset = logcone::apply(w.linear, mm.mean);
        for (double& x : w.offset) x = -x;
        return w;
    };

    const DensityGrid source = cur;
    AffineMap total = whitening(m);
    const bool exact = nearly_diagonal(total.linear);
    // The output lattice is fixed up front (with a margin for the later
    // corrections) so that the moments depend smoothly on the map.
    GridGeometry out = image_geometry(source, total);
    for (std::size_t a = 0; a < d; ++a) {
        out.origin[a] -= 3.0 * out.spacing[a];
        out.shape[a] += 6;
    }
    auto image = [&](const AffineMap& map) {
        return normalize(exact ? affine_image(source, map) : affine_image(source, map, out));
    };
    cur = image(total);

    // Resampling perturbs the moments slightly. Off-diagonal residue is
    // removed by refining the composite map and resampling the source again
    // (one interpolation, no accumulated blur); the diagonal and the mean are
    // then fixed exactly by rescaling the lattice.
    for (int pass = 0; pass < 6 && !exact; ++pass) {
        m = moments(cur);
        if (m.cov.matrix().is_diagonal(1e-7)) break;
        total = compose(whitening(m), total);
        cur = image(total);
    }
    m = moments(cur);
    std::vector<double> scale(d), shift(d);
    for (std::size_t a = 0; a < d; ++a) {
        scale[a] = 1.0 / std::sqrt(m.cov(a, a));
        shift[a] = -scale[a] * m.mean[a];
    }
    cur = normalize(diagonal_transform(cur, scale, shift));
    total = compose(AffineMap{Matrix::diagonal(scale), shift}, total);

    m = moments(cur);
    double mean_err = 0.0;
    for (double x : m.mean) mean_err = std::max(mean_err, std::abs(x));
    const double cov_err = (m.cov.matrix() - Matrix::identity(d)).max_abs();
    if (mean_err > 1e-6 || cov_err > 1e-4) {
        std::ostringstream msg;
        msg << "isotropized grid has |mean|=" << mean_err << ", |cov-Id|=" << cov_err;
        throw Error(ErrorCode::InternalContractViolation, msg.str());
    }
    return {std::move(cur), std::move(total)};
}

ProfileGrid sup_profile(const DensityGrid& g, std::size_t axis) {
    if (g.dim() < 2) throw Error(ErrorCode::DimensionTooLow, "sup_profile needs dimension >= 2");
    require_axis(g, axis);
    return {DensityGrid(drop_axis(g.geometry(), axis), kernels::sup_along_axis(g, axis)), axis};
}

DensityGrid restrict_hyperplane(const DensityGrid& g, std::size_t axis, double level) {
    if (g.dim() < 2) throw Error(ErrorCode::DimensionTooLow, "restriction needs dimension >= 2");
    require_axis(g, axis);
    const auto& geom = g.geometry();
    const std::size_t n = geom.shape[axis];
    double t = (level - geom.origin[axis]) / geom.spacing[axis];
    if (!(t >= -0.5 && t <= static_cast<double>(n) - 0.5)) {
        std::ostringstream msg;
        msg << "level " << level << " outside [" << geom.lower(axis) << ", " << geom.upper(axis) << "]";
        throw Error(ErrorCode::LevelOutOfRange, msg.str());
    }
    t = std::clamp(t, 0.0, static_cast<double>(n - 1));
    const double nearest = std::round(t);
    std::size_t i0;
    double frac;
    if (std::abs(t - nearest) <= 1e-9) {
        i0 = static_cast<std::size_t>(nearest);
        frac = 0.0;
    } else {
        i0 = static_cast<std::size_t>(std::floor(t));
        frac = t - static_cast<double>(i0);
    }

    GridGeometry out = drop_axis(geom, axis);
    const auto st = geom.strides();
    std::vector<double> values(out.size());
    std::size_t outer = 1;
    for (std::size_t a = 0; a < axis; ++a) outer *= geom.shape[a];
    const std::size_t inner = st[axis];
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t in = 0; in < inner; ++in) {
            const std::size_t base = o * n * inner + in;
            double v = g[base + i0 * inner];
            if (frac > 0.0) v = (1.0 - frac) * v + frac * g[base + (i0 + 1) * inner];
            values[o * inner + in] = v;
        }
    }
    return DensityGrid(std::move(out), std::move(values));
}

}  // namespace logcone
