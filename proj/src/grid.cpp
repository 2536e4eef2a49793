#include "logcone/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "logcone/error.hpp"

namespace logcone {

std::size_t GridGeometry::size() const {
    std::size_t n = 1;
    for (std::size_t s : shape) n *= s;
    return n;
}

std::vector<std::size_t> GridGeometry::strides() const {
    std::vector<std::size_t> st(shape.size(), 1);
    for (std::size_t a = shape.size(); a-- > 1;) st[a - 1] = st[a] * shape[a];
    return st;
}

double GridGeometry::cell_volume() const {
    double v = 1.0;
    for (double h : spacing) v *= h;
    return v;
}

bool GridGeometry::centered_on_axis(std::size_t axis, double tol) const {
    const double mid = origin[axis] + 0.5 * static_cast<double>(shape[axis] - 1) * spacing[axis];
    return std::abs(mid) <= tol * std::max(spacing[axis], 1.0);
}

void GridGeometry::validate() const {
    const std::size_t d = shape.size();
    if (d < 1 || d > kMaxDim) {
        throw Error(ErrorCode::InvalidGrid, "grid dimension must be 1..3");
    }
    if (origin.size() != d || spacing.size() != d) {
        throw Error(ErrorCode::InvalidGrid, "origin/spacing length differs from dimension");
    }
    for (std::size_t a = 0; a < d; ++a) {
        if (shape[a] == 0) throw Error(ErrorCode::InvalidGrid, "empty axis");
        if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
            throw Error(ErrorCode::InvalidGrid, "spacing must be positive and finite");
        if (!std::isfinite(origin[a])) throw Error(ErrorCode::InvalidGrid, "non-finite origin");
    }
}

DensityGrid::DensityGrid(GridGeometry geometry, std::vector<double> values)
    : geom_(std::move(geometry)), values_(std::move(values)) {
    geom_.validate();
    if (values_.size() != geom_.size()) {
        std::ostringstream msg;
        msg << "expected " << geom_.size() << " values, got " << values_.size();
        throw Error(ErrorCode::InvalidGrid, msg.str());
    }
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw Error(ErrorCode::InvalidGrid, "density values must be finite and nonnegative");
        }
    }
}

std::vector<std::size_t> DensityGrid::unravel(std::size_t flat) const {
    const auto st = geom_.strides();
    std::vector<std::size_t> idx(dim());
    for (std::size_t a = 0; a < dim(); ++a) {
        idx[a] = flat / st[a];
        flat %= st[a];
    }
    return idx;
}

std::vector<double> DensityGrid::point(std::size_t flat) const {
    const auto idx = unravel(flat);
    std::vector<double> x(dim());
    for (std::size_t a = 0; a < dim(); ++a) x[a] = geom_.coordinate(a, idx[a]);
    return x;
}

double DensityGrid::max_value() const {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

GridGeometry tiling_geometry(std::span<const double> lo, std::span<const double> hi,
                             std::span<const std::size_t> counts) {
    GridGeometry g;
    for (std::size_t a = 0; a < counts.size(); ++a) {
        const double h = (hi[a] - lo[a]) / static_cast<double>(counts[a]);
        g.shape.push_back(counts[a]);
        g.spacing.push_back(h);
        g.origin.push_back(lo[a] + 0.5 * h);
    }
    g.validate();
    return g;
}

double mass(const DensityGrid& g) {
    double s = 0.0;
    for (double v : g.values()) s += v;
    return s * g.geometry().cell_volume();
}

DensityGrid normalize(const DensityGrid& g) {
    const double m = mass(g);
    if (!(m > 0.0)) throw Error(ErrorCode::ZeroMass, "cannot normalize a grid with zero mass");
    std::vector<double> values(g.values().begin(), g.values().end());
    for (double& v : values) v /= m;
    return DensityGrid(g.geometry(), std::move(values));
}

MomentSummary moments(const DensityGrid& g, double tol) {
    const double m = mass(g);
    if (std::abs(m - 1.0) > tol) {
        std::ostringstream msg;
        msg << "mass " << m << " differs from 1 by more than " << tol;
        throw Error(ErrorCode::NotNormalized, msg.str());
    }
    const auto& geom = g.geometry();
    const std::size_t d = g.dim();
    const double vol = geom.cell_volume();
    const auto st = geom.strides();

    std::vector<std::vector<double>> coords(d);
    for (std::size_t a = 0; a < d; ++a) {
        coords[a].resize(geom.shape[a]);
        for (std::size_t k = 0; k < geom.shape[a]; ++k) coords[a][k] = geom.coordinate(a, k);
    }
    auto index_of = [&](std::size_t flat, std::size_t a) { return (flat / st[a]) % geom.shape[a]; };

    std::vector<double> mean(d, 0.0);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const double w = g[flat];
        if (w == 0.0) continue;
        for (std::size_t a = 0; a < d; ++a) mean[a] += w * coords[a][index_of(flat, a)];
    }
    for (double& x : mean) x *= vol;

    Matrix cov(d, d);
    std::vector<double> dx(d);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const double w = g[flat];
        if (w == 0.0) continue;
        for (std::size_t a = 0; a < d; ++a) dx[a] = coords[a][index_of(flat, a)] - mean[a];
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = r; c < d; ++c) cov(r, c) += w * dx[r] * dx[c];
    }
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = r; c < d; ++c) {
            cov(r, c) *= vol;
            cov(c, r) = cov(r, c);
        }

    return MomentSummary{std::move(mean), CovMatrix(std::move(cov)), g.max_value(), m};
}

bool is_isotropic(const MomentSummary& m, double tol) {
    for (double x : m.mean)
        if (std::abs(x) > tol) return false;
    return (m.cov.matrix() - Matrix::identity(m.cov.dim())).max_abs() <= tol;
}

double isotropic_constant(const DensityGrid& g, double tol) {
    const auto m = moments(g, tol);
    if (!is_isotropic(m, tol)) {
        throw Error(ErrorCode::NotIsotropic, "grid is not isotropic within tolerance");
    }
    return std::pow(m.sup_density, 1.0 / static_cast<double>(g.dim()));
}

namespace {

std::vector<std::vector<int>> line_steps(std::size_t d, DirectionSet dirs) {
    std::vector<std::vector<int>> steps;
    if (dirs.axes) {
        for (std::size_t a = 0; a < d; ++a) {
            std::vector<int> s(d, 0);
            s[a] = 1;
            steps.push_back(s);
        }
    }
    if (dirs.diagonals && d >= 2) {
        std::size_t combos = 1;
        for (std::size_t a = 0; a < d; ++a) combos *= 3;
        for (std::size_t code = 0; code < combos; ++code) {
            std::vector<int> s(d);
            std::size_t rem = code, nonzero = 0;
            for (std::size_t a = 0; a < d; ++a) {
                s[a] = static_cast<int>(rem % 3) - 1;
                rem /= 3;
                if (s[a] != 0) ++nonzero;
            }
            if (nonzero < 2) continue;
            const auto first = std::find_if(s.begin(), s.end(), [](int v) { return v != 0; });
            if (*first < 0) continue;  // keep one orientation per line
            steps.push_back(s);
        }
    }
    return steps;
}

struct LineResult {
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t worst_flat = 0;
    bool gap = false;
    std::size_t triples = 0;
};

}  // namespace

LogConcavityReport check_log_concave(const DensityGrid& g, DirectionSet directions, double tol) {
    const auto& geom = g.geometry();
    const std::size_t d = g.dim();
    const auto st = geom.strides();
    LogConcavityReport report;

    for (const auto& step : line_steps(d, directions)) {
        // A line starts at every cell whose predecessor along `step` is off-grid.
        std::vector<std::size_t> starts;
        for (std::size_t flat = 0; flat < g.size(); ++flat) {
            std::size_t rem = flat;
            bool is_start = false;
            for (std::size_t a = 0; a < d; ++a) {
                const auto idx = static_cast<long>(rem / st[a]);
                rem %= st[a];
                const long prev = idx - step[a];
                if (prev < 0 || prev >= static_cast<long>(geom.shape[a])) is_start = true;
            }
            if (is_start) starts.push_back(flat);
        }
        long offset = 0;
        for (std::size_t a = 0; a < d; ++a) offset += step[a] * static_cast<long>(st[a]);

        std::vector<LineResult> results(starts.size());
#pragma omp parallel for schedule(dynamic, 64)
        for (std::size_t li = 0; li < starts.size(); ++li) {
            // Line length: walk until some coordinate leaves the grid.
            std::vector<long> idx(d);
            std::size_t rem = starts[li];
            for (std::size_t a = 0; a < d; ++a) {
                idx[a] = static_cast<long>(rem / st[a]);
                rem %= st[a];
            }
            std::size_t len = 0;
            for (;;) {
                bool inside = true;
                for (std::size_t a = 0; a < d; ++a) {
                    const long k = idx[a] + static_cast<long>(len) * step[a];
                    if (k < 0 || k >= static_cast<long>(geom.shape[a])) inside = false;
                }
                if (!inside) break;
                ++len;
            }
            LineResult& res = results[li];
            const auto at = [&](std::size_t k) {
                return g[static_cast<std::size_t>(static_cast<long>(starts[li]) +
                                                  static_cast<long>(k) * offset)];
            };
            std::size_t first = len, last = 0;
            for (std::size_t k = 0; k < len; ++k) {
                if (at(k) > 0.0) {
                    first = std::min(first, k);
                    last = k;
                }
            }
            if (first == len) continue;
            for (std::size_t k = first; k <= last; ++k) {
                if (at(k) <= 0.0) {
                    res.gap = true;
                    break;
                }
            }
            for (std::size_t k = first + 1; k + 1 <= last; ++k) {
                const double a = at(k - 1), b = at(k), c = at(k + 1);
                if (a <= 0.0 || b <= 0.0 || c <= 0.0) continue;
                ++res.triples;
                const double v = std::log(a) + std::log(c) - 2.0 * std::log(b);
                if (v > res.worst) {
                    res.worst = v;
                    res.worst_flat = static_cast<std::size_t>(static_cast<long>(starts[li]) +
                                                              static_cast<long>(k) * offset);
                }
            }
        }

        for (const auto& res : results) {
            if (res.gap) ++report.support_gaps;
            report.triples_checked += res.triples;
            if (res.triples > 0 && res.worst > report.worst_violation) {
                report.worst_violation = res.worst;
                report.worst_point = g.point(res.worst_flat);
            }
        }
    }
    report.log_concave = report.support_gaps == 0 && report.worst_violation <= tol;
    return report;
}

DensityGrid permute_axes(const DensityGrid& g, std::span<const std::size_t> perm) {
    const std::size_t d = g.dim();
    if (perm.size() != d) throw Error(ErrorCode::DimensionMismatch, "permutation length");
    std::vector<bool> seen(d, false);
    for (std::size_t p : perm) {
        if (p >= d || seen[p]) throw Error(ErrorCode::BadParameters, "not a permutation");
        seen[p] = true;
    }
    const auto& in = g.geometry();
    GridGeometry out;
    for (std::size_t k = 0; k < d; ++k) {
        out.shape.push_back(in.shape[perm[k]]);
        out.origin.push_back(in.origin[perm[k]]);
        out.spacing.push_back(in.spacing[perm[k]]);
    }
    const auto in_st = in.strides();
    const auto out_st = out.strides();
    std::vector<double> values(g.size());
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        std::size_t rem = flat, src = 0;
        for (std::size_t k = 0; k < d; ++k) {
            const std::size_t j = rem / out_st[k];
            rem %= out_st[k];
            src += j * in_st[perm[k]];
        }
        values[flat] = g[src];
    }
    return DensityGrid(std::move(out), std::move(values));
}

double interpolate(const DensityGrid& g, std::span<const double> x, EdgeRule edge) {
    const auto& geom = g.geometry();
    const std::size_t d = g.dim();
    const bool ramp = edge == EdgeRule::Ramp;
    std::array<std::ptrdiff_t, kMaxDim> base{};
    std::array<double, kMaxDim> frac{};
    for (std::size_t a = 0; a < d; ++a) {
        const double n = static_cast<double>(geom.shape[a]);
        double t = (x[a] - geom.origin[a]) / geom.spacing[a];
        if (ramp) {
            if (!(t > -1.0 && t < n)) return 0.0;
        } else {
            if (!(t >= -0.5 && t <= n - 0.5)) return 0.0;
            t = std::clamp(t, 0.0, n - 1.0);
        }
        const double fl = std::floor(t);
        base[a] = static_cast<std::ptrdiff_t>(fl);
        frac[a] = t - fl;
    }
    const auto st = geom.strides();
    double acc = 0.0;
    for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
        double w = 1.0;
        std::size_t flat = 0;
        for (std::size_t a = 0; a < d && w != 0.0; ++a) {
            const bool up = (corner >> a) & 1U;
            const std::ptrdiff_t i = base[a] + (up ? 1 : 0);
            w *= up ? frac[a] : 1.0 - frac[a];
            if (i < 0 || i >= static_cast<std::ptrdiff_t>(geom.shape[a])) w = 0.0;  // zero padding
            else flat += static_cast<std::size_t>(i) * st[a];
        }
        if (w != 0.0) acc += w * g[flat];
    }
    return acc;
}

double sup_distance(const DensityGrid& a, const DensityGrid& b) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "sup_distance dimensions");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - interpolate(b, a.point(i))));
    for (std::size_t i = 0; i < b.size(); ++i)
        worst = std::max(worst, std::abs(b[i] - interpolate(a, b.point(i))));
    return worst;
}

}  // namespace logcone
