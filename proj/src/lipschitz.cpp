#include "logcone/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <sstream>

#include "logcone/error.hpp"
#include "logcone/families.hpp"
#include "logcone/measure_ops.hpp"

namespace logcone {

namespace {

void require_axis(const DensityGrid& g, std::size_t axis) {
    if (axis >= g.dim()) throw Error(ErrorCode::DimensionMismatch, "axis out of range");
}

// max |f(x + step e_axis) - f(x)| / (step h) with f = 0 off the grid.
double max_difference(const DensityGrid& g, std::size_t axis, std::size_t step) {
    const auto strides = g.geometry().strides();
    const std::size_t n = g.shape()[axis];
    const std::size_t stride = strides[axis];
    const auto vals = g.values();
    double worst = 0.0;
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const std::size_t k = (flat / stride) % n;
        const double here = vals[flat];
        const double ahead = k + step < n ? vals[flat + step * stride] : 0.0;
        worst = std::max(worst, std::abs(ahead - here));
        if (k < step) worst = std::max(worst, here);  // entering from the zero region
    }
    return worst / (static_cast<double>(step) * g.spacing()[axis]);
}

}  // namespace

LipschitzReport directional_lipschitz(const DensityGrid& g, std::size_t axis,
                                      const DensityGrid* refined) {
    require_axis(g, axis);
    LipschitzReport r;
    r.direction.assign(g.dim(), 0.0);
    r.direction[axis] = 1.0;
    r.constant = max_difference(g, axis, 1);
    if (refined != nullptr) {
        require_axis(*refined, axis);
        const double fine = max_difference(*refined, axis, 1);
        r.refinement_ratio = r.constant > 0.0 ? fine / r.constant : 1.0;
    } else {
        const double coarse = g.shape()[axis] >= 2 ? max_difference(g, axis, 2) : 0.0;
        r.refinement_ratio = coarse > 0.0 ? r.constant / coarse : 1.0;
    }
    r.discontinuity_flag = r.refinement_ratio > kDiscontinuityRatio;
    return r;
}

double smooth_functional(const DensityGrid& g, double delta, std::span<const double> z) {
    if (z.size() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "z has the wrong dimension");
    const double max_h = *std::max_element(g.spacing().begin(), g.spacing().end());
    if (!(delta > 2.0 * max_h)) throw Error(ErrorCode::DeltaTooSmall, "delta must exceed twice the grid spacing");

    const auto& geom = g.geometry();
    const std::size_t d = g.dim();
    // Lattice sites within delta of z, including those off the grid: the
    // denominator is the tent's own lattice sum, so constants map to 1.
    std::vector<long> lo(d), hi(d);
    for (std::size_t a = 0; a < d; ++a) {
        lo[a] = static_cast<long>(std::ceil((z[a] - delta - geom.origin[a]) / geom.spacing[a]));
        hi[a] = static_cast<long>(std::floor((z[a] + delta - geom.origin[a]) / geom.spacing[a]));
    }
    const auto strides = geom.strides();
    std::vector<long> idx = lo;
    double sum = 0.0, weight = 0.0;
    bool more = true;
    while (more) {
        double r2 = 0.0;
        bool inside = true;
        std::size_t flat = 0;
        for (std::size_t a = 0; a < d; ++a) {
            const double dx = geom.origin[a] + static_cast<double>(idx[a]) * geom.spacing[a] - z[a];
            r2 += dx * dx;
            if (idx[a] < 0 || idx[a] >= static_cast<long>(geom.shape[a])) inside = false;
            else flat += static_cast<std::size_t>(idx[a]) * strides[a];
        }
        const double w = 1.0 - std::sqrt(r2) / delta;
        if (w > 0.0) {
            weight += w;
            if (inside) sum += w * g[flat];
        }
        more = false;
        for (std::size_t a = d; a-- > 0;) {
            if (++idx[a] <= hi[a]) {
                more = true;
                break;
            }
            idx[a] = lo[a];
        }
    }
    return weight > 0.0 ? sum / weight : 0.0;
}

double MainLemmaValue::product() const { return value * std::sqrt(var_g * var_h); }

MainLemmaValue mainlemma_integral(const DensityGrid& g, const DensityGrid& h, std::size_t axis,
                                  std::span<const double> z) {
    if (g.dim() != h.dim()) throw Error(ErrorCode::DimensionMismatch, "densities differ in dimension");
    require_axis(g, axis);
    const std::size_t d = g.dim();
    const MomentSummary mg = moments(g), mh = moments(h);
    constexpr double tol = 1e-4;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double target = i == j ? 1.0 : 0.0;
            if (std::abs(mg.cov(i, j) + mh.cov(i, j) - target) > tol) {
                std::ostringstream msg;
                msg << "cov(g) + cov(h) differs from the identity at (" << i << ", " << j
                    << "): " << mg.cov(i, j) + mh.cov(i, j);
                throw Error(ErrorCode::CovarianceContractViolated, msg.str());
            }
            if (i != j && (std::abs(mg.cov(i, j)) > tol || std::abs(mh.cov(i, j)) > tol))
                throw Error(ErrorCode::CovarianceContractViolated, "covariances are not diagonal");
        }

    MainLemmaValue out;
    out.var_g = mg.cov(axis, axis);
    out.var_h = mh.cov(axis, axis);
    if (d == 1) {
        out.value = g.max_value() * h.max_value();
        return out;
    }

    // z may be given in the hyperplane's own coordinates or as a full point.
    std::vector<double> zp;
    if (z.size() == d - 1) {
        zp.assign(z.begin(), z.end());
    } else if (z.size() == d) {
        for (std::size_t a = 0; a < d; ++a)
            if (a != axis) zp.push_back(z[a]);
    } else {
        throw Error(ErrorCode::DimensionMismatch, "z has the wrong dimension");
    }

    const DensityGrid pg = sup_profile(g, axis).grid;
    const DensityGrid ph = sup_profile(h, axis).grid;
    double sum = 0.0;
    std::vector<double> w(d - 1);
    for (std::size_t flat = 0; flat < pg.size(); ++flat) {
        if (pg[flat] == 0.0) continue;
        const auto v = pg.point(flat);
        for (std::size_t a = 0; a + 1 < d; ++a) w[a] = zp[a] - v[a];
        sum += pg[flat] * interpolate(ph, w);
    }
    out.value = sum * pg.geometry().cell_volume();
    return out;
}

double lipschitz_scaling_check(double var_x, const std::string& family_x,
                               const std::string& family_y, std::size_t dim, double h,
                               std::size_t axis) {
    if (!(var_x > 0.0 && var_x < 1.0)) throw Error(ErrorCode::BadParameters, "varX must lie in (0, 1)");
    const DensityGrid x = generate(spec_with_variance(family_x, dim, var_x, h));
    const DensityGrid y = generate(spec_with_variance(family_y, dim, 1.0 - var_x, h));
    const DensityGrid sum = convolve(x, y);
    return directional_lipschitz(sum, axis).constant * std::sqrt(var_x * (1.0 - var_x));
}

std::vector<SweepRow> lipschitz_sweep(const std::string& family_x, const std::string& family_y,
                                      std::size_t dim, double h,
                                      std::span<const double> splits, std::size_t axis) {
    std::vector<SweepRow> rows(splits.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(splits.size()); ++i) {
        try {
            const double v = splits[static_cast<std::size_t>(i)];
            SweepRow& row = rows[static_cast<std::size_t>(i)];
            row.family = family_x + "*" + family_y;
            row.dim = dim;
            row.axis = axis;
            row.var_x = v;
            row.product = lipschitz_scaling_check(v, family_x, family_y, dim, h, axis);
            row.lipschitz = row.product / std::sqrt(v * (1.0 - v));
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "family,dim,axis,varX,lipschitz,product\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.6g,%.10g,%.10g\n", r.family.c_str(), r.dim,
                      r.axis, r.var_x, r.lipschitz, r.product);
        os << buf;
    }
}

double shift_variation(const DensityGrid& g, double s) {
    if (g.dim() != 1) throw Error(ErrorCode::DimensionMismatch, "shift_variation needs a 1-D grid");
    const double h = g.spacing()[0];
    const auto pad = static_cast<std::ptrdiff_t>(std::ceil(std::abs(s) / h)) + 1;
    const auto n = static_cast<std::ptrdiff_t>(g.shape()[0]);
    double sum = 0.0;
    for (std::ptrdiff_t k = -pad; k < n + pad; ++k) {
        const double t = g.origin()[0] + static_cast<double>(k) * h;
        const double a = t + s;
        sum += std::abs(interpolate(g, std::span<const double>(&a, 1)) -
                        interpolate(g, std::span<const double>(&t, 1)));
    }
    return sum * h;
}

}  // namespace logcone
