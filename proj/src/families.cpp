#include "logcone/families.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "logcone/error.hpp"

namespace logcone {

namespace {

// Tails are cut where the density falls below this fraction of its sup.
const double kTailLog = std::log(1e12);

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::BadParameters, what); }

double axis_param(const FamilySpec& spec, std::size_t axis, double fallback) {
    if (spec.params.empty()) return fallback;
    if (spec.params.size() == 1) return spec.params.front();
    return spec.params[axis];
}

DensityGrid centered_1d(double half_extent, double h, double (*f)(double, double), double p) {
    const auto m = static_cast<std::size_t>(std::ceil(half_extent / h - 1e-9));
    GridGeometry geom{{2 * m + 1}, {-static_cast<double>(m) * h}, {h}};
    std::vector<double> values(2 * m + 1);
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = f(geom.coordinate(0, k), p);
    return DensityGrid(std::move(geom), std::move(values));
}

// Cell averages of the indicator of [-w/2, w/2] divided by w. When w is a
// whole number of cells the spacing is snapped so the cells tile it exactly;
// otherwise the two end cells carry the covered fraction.
DensityGrid box_1d(double w, double h) {
    const double cells = w / h;
    const auto rounded = static_cast<std::size_t>(std::llround(cells));
    if (rounded >= 1 && std::abs(cells - static_cast<double>(rounded)) <= 1e-9 * cells) {
        const double hh = w / static_cast<double>(rounded);
        GridGeometry geom{{rounded}, {-0.5 * w + 0.5 * hh}, {hh}};
        return DensityGrid(std::move(geom), std::vector<double>(rounded, 1.0 / w));
    }
    const auto n = static_cast<std::size_t>(std::ceil(cells));
    if (n < 2) bad("uniform width is smaller than the grid spacing");
    const double end_fraction = (w - static_cast<double>(n - 2) * h) / (2.0 * h);
    std::vector<double> values(n, 1.0 / w);
    values.front() = values.back() = end_fraction / w;
    GridGeometry geom{{n}, {-0.5 * static_cast<double>(n - 1) * h}, {h}};
    return DensityGrid(std::move(geom), std::move(values));
}

double gaussian_pdf(double x, double sigma) {
    return std::exp(-0.5 * x * x / (sigma * sigma)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}
double laplace_pdf(double x, double rate) { return 0.5 * rate * std::exp(-rate * std::abs(x)); }
double triangle_pdf(double x, double a) { return std::max(0.0, 1.0 - std::abs(x) / a) / a; }

DensityGrid exponential_1d(double rate, double h) {
    const auto n = static_cast<std::size_t>(std::ceil(kTailLog / rate / h));
    GridGeometry geom{{n}, {0.5 * h}, {h}};
    std::vector<double> values(n);
    for (std::size_t k = 0; k < n; ++k) values[k] = rate * std::exp(-rate * geom.coordinate(0, k));
    return DensityGrid(std::move(geom), std::move(values));
}

DensityGrid factor_1d(const std::string& name, double p, double h) {
    if (name == "uniform_box") return box_1d(p, h);
    if (name == "gaussian") return centered_1d(p * std::sqrt(2.0 * kTailLog), h, gaussian_pdf, p);
    if (name == "laplace") return centered_1d(kTailLog / p, h, laplace_pdf, p);
    if (name == "exponential") return exponential_1d(p, h);
    if (name == "triangle") return centered_1d(p, h, triangle_pdf, p);
    bad("not a product family: " + name);
}

DensityGrid ball(std::size_t dim, double radius, double h) {
    if (dim == 1) return box_1d(2.0 * radius, h);
    const auto m = static_cast<std::size_t>(std::ceil(radius / h - 1e-9));
    GridGeometry geom{std::vector<std::size_t>(dim, 2 * m + 1),
                      std::vector<double>(dim, -static_cast<double>(m) * h),
                      std::vector<double>(dim, h)};
    return DensityGrid::from_function(std::move(geom), [&](std::span<const double> x) {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        return r2 <= radius * radius ? 1.0 : 0.0;
    });
}

// Exact cell averages: the fraction of each cell inside the simplex is an
// Irwin–Hall distribution function of the cell's lower corner.
DensityGrid simplex(std::size_t dim, double scale, double h) {
    const auto n = static_cast<std::size_t>(std::ceil(scale / h - 1e-9));
    GridGeometry geom{std::vector<std::size_t>(dim, n), std::vector<double>(dim, 0.5 * h),
                      std::vector<double>(dim, h)};
    return DensityGrid::from_function(std::move(geom), [&](std::span<const double> x) {
        double corner = 0.0;
        for (double v : x) corner += v - 0.5 * h;
        return irwin_hall_cdf(static_cast<int>(dim), (scale - corner) / h);
    });
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace

const std::vector<std::string>& family_names() {
    static const std::vector<std::string> names{"uniform_box", "uniform_ball", "uniform_simplex",
                                                "gaussian",    "laplace",      "exponential",
                                                "triangle"};
    return names;
}

DensityGrid generate(const FamilySpec& spec) {
    const auto& names = family_names();
    if (std::find(names.begin(), names.end(), spec.name) == names.end())
        bad("unknown family '" + spec.name + "'");
    if (spec.dim < 1 || spec.dim > kMaxDim) bad("family dimension must be 1..3");
    if (!(spec.h > 0.0) || !std::isfinite(spec.h)) bad("grid spacing must be positive");
    if (spec.params.size() > 1 && spec.params.size() != spec.dim)
        bad("give one parameter or one per axis");
    for (double p : spec.params)
        if (!(p > 0.0) || !std::isfinite(p)) bad("family parameters must be positive");

    if (spec.name == "uniform_ball") {
        if (spec.params.size() > 1) bad("uniform_ball takes a single radius");
        return normalize(ball(spec.dim, axis_param(spec, 0, 1.0), spec.h));
    }
    if (spec.name == "uniform_simplex") {
        if (spec.params.size() > 1) bad("uniform_simplex takes a single scale");
        return normalize(simplex(spec.dim, axis_param(spec, 0, 1.0), spec.h));
    }
    DensityGrid g = factor_1d(spec.name, axis_param(spec, 0, 1.0), spec.h);
    for (std::size_t a = 1; a < spec.dim; ++a)
        g = tensor_product(g, normalize(factor_1d(spec.name, axis_param(spec, a, 1.0), spec.h)));
    return normalize(g);
}

std::vector<FamilySpec> standard_corpus() {
    return {
        {"uniform_box", 1, {1.0}, 0.01},
        {"uniform_box", 1, {2.5}, 0.01},
        {"uniform_ball", 1, {1.0}, 0.01},
        {"uniform_simplex", 1, {1.0}, 0.01},
        {"gaussian", 1, {1.0}, 0.01},
        {"laplace", 1, {1.0}, 0.01},
        {"exponential", 1, {1.0}, 0.01},
        {"triangle", 1, {1.0}, 0.01},

        {"uniform_box", 2, {1.0, 2.0}, 0.05},
        {"uniform_ball", 2, {1.0}, 0.05},
        {"uniform_simplex", 2, {1.0}, 0.05},
        {"gaussian", 2, {1.0, 0.5}, 0.05},
        {"laplace", 2, {2.0}, 0.05},
        {"exponential", 2, {2.0, 1.0}, 0.05},
        {"triangle", 2, {1.0}, 0.05},

        {"uniform_box", 3, {1.0, 1.5, 2.0}, 0.1},
        {"uniform_ball", 3, {1.0}, 0.1},
        {"uniform_simplex", 3, {1.5}, 0.1},
        {"triangle", 3, {1.0}, 0.1},
        {"gaussian", 3, {1.0}, 0.2},
    };
}

FamilySpec spec_with_variance(const std::string& name, std::size_t dim, double variance, double h) {
    if (!(variance > 0.0)) bad("variance must be positive");
    const double d = static_cast<double>(dim);
    double p;
    if (name == "uniform_box") p = std::sqrt(12.0 * variance);
    else if (name == "gaussian") p = std::sqrt(variance);
    else if (name == "laplace") p = std::sqrt(2.0 / variance);
    else if (name == "exponential") p = 1.0 / std::sqrt(variance);
    else if (name == "triangle") p = std::sqrt(6.0 * variance);
    else if (name == "uniform_ball") p = dim == 1 ? std::sqrt(3.0 * variance) : std::sqrt(variance * (d + 2.0));
    else if (name == "uniform_simplex" && dim == 1) p = std::sqrt(12.0 * variance);
    else bad("no diagonal-covariance parametrisation for '" + name + "'");
    return FamilySpec{name, dim, {p}, h};
}

double irwin_hall_density(int n, double x) {
    if (n < 1) bad("Irwin-Hall order must be >= 1");
    if (x < 0.0 || x > n) return 0.0;
    if (x > 0.5 * n) x = n - x;  // symmetric; the short side has less cancellation
    double sum = 0.0;
    const int kmax = static_cast<int>(std::floor(x));
    for (int k = 0; k <= kmax && k <= n; ++k) {
        const double term = binomial(n, k) * std::pow(x - k, n - 1);
        sum += (k % 2 == 0) ? term : -term;
    }
    return sum / factorial(n - 1);
}

double irwin_hall_cdf(int d, double t) {
    if (t <= 0.0) return 0.0;
    if (t >= d) return 1.0;
    double sum = 0.0;
    const int kmax = static_cast<int>(std::floor(t));
    for (int k = 0; k <= kmax; ++k) {
        const double term = binomial(d, k) * std::pow(t - k, d);
        sum += (k % 2 == 0) ? term : -term;
    }
    return std::clamp(sum / factorial(d), 0.0, 1.0);
}

std::vector<CltRow> clt_diagonal_demo(int n_max, double h) {
    if (n_max < 2) bad("n_max must be >= 2");
    if (!(h > 0.0) || h >= 0.5) bad("grid spacing must be in (0, 0.5)");
    // uniform[0,1]: the centred box shifted right by 1/2.
    const DensityGrid centred = box_1d(1.0, h);
    GridGeometry geom = centred.geometry();
    geom.origin[0] += 0.5;
    const DensityGrid unit(geom, std::vector<double>(centred.values().begin(), centred.values().end()));

    std::vector<CltRow> rows;
    DensityGrid sum = unit;
    for (int n = 1; n <= n_max; ++n) {
        if (n > 1) sum = convolve(sum, unit);
        CltRow row{n, 0.0, 0.0};
        for (std::size_t k = 0; k < sum.size(); ++k)
            row.irwin_hall_error = std::max(
                row.irwin_hall_error, std::abs(sum[k] - irwin_hall_density(n, sum.point(k)[0])));

        const DensityGrid iso = isotropize(sum).grid;
        for (std::size_t k = 0; k < iso.size(); ++k)
            row.sup_distance =
                std::max(row.sup_distance, std::abs(iso[k] - gaussian_pdf(iso.point(k)[0], 1.0)));
        // Off the grid the density is 0, so the Gaussian itself is the gap.
        const auto& ig = iso.geometry();
        row.sup_distance = std::max({row.sup_distance, gaussian_pdf(ig.lower(0), 1.0),
                                     gaussian_pdf(ig.upper(0), 1.0)});
        rows.push_back(row);
    }
    return rows;
}

void write_clt_csv(std::ostream& os, const std::vector<CltRow>& rows) {
    os << "n,sup_distance,irwin_hall_error\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g\n", r.n, r.sup_distance, r.irwin_hall_error);
        os << buf;
    }
}

bool is_uniform_box(const DensityGrid& g, double tol) {
    const std::size_t d = g.dim();
    std::vector<std::size_t> imin(d, std::numeric_limits<std::size_t>::max()), imax(d, 0);
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
    if (!any) return false;

    // Interior: the support box minus one boundary layer per face (when the
    // box is thick enough to have one).
    std::vector<std::size_t> lo(d), hi(d);
    for (std::size_t a = 0; a < d; ++a) {
        const bool thick = imax[a] - imin[a] >= 2;
        lo[a] = thick ? imin[a] + 1 : imin[a];
        hi[a] = thick ? imax[a] - 1 : imax[a];
    }
    double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0, edge_max = 0.0;
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const auto idx = g.unravel(flat);
        bool in_box = true, interior = true;
        for (std::size_t a = 0; a < d; ++a) {
            if (idx[a] < imin[a] || idx[a] > imax[a]) in_box = false;
            if (idx[a] < lo[a] || idx[a] > hi[a]) interior = false;
        }
        if (!in_box) continue;
        if (interior) {
            if (g[flat] <= 0.0) return false;
            vmin = std::min(vmin, g[flat]);
            vmax = std::max(vmax, g[flat]);
        } else {
            edge_max = std::max(edge_max, g[flat]);
        }
    }
    return vmax <= (1.0 + tol) * vmin && edge_max <= (1.0 + tol) * vmax;
}

std::vector<ClosureStep> closure_sequence_demo(const std::vector<FamilySpec>& seeds,
                                               const std::vector<LinearMap>& maps, int steps,
                                               double tol) {
    if (seeds.empty()) bad("closure demo needs at least one seed");
    if (steps < 0) bad("steps must be >= 0");
    if (steps > 0 && maps.empty()) bad("closure demo needs maps when steps > 0");

    DensityGrid current = generate(seeds.front());
    for (std::size_t i = 1; i < seeds.size(); ++i) current = tensor_product(current, generate(seeds[i]));

    std::vector<ClosureStep> rows;
    DensityGrid previous_iso;
    for (int k = 0; k <= steps; ++k) {
        if (k > 0) current = normalize(pushforward(current, maps[static_cast<std::size_t>(k - 1) % maps.size()]));
        const DensityGrid iso = isotropize(current).grid;
        ClosureStep row;
        row.step = k;
        row.dim = iso.dim();
        row.uniform_box = is_uniform_box(iso, tol);
        row.log_concave = check_log_concave(iso, {}, 1e-6).log_concave;
        row.sup_distance_prev = (k > 0 && previous_iso.dim() == iso.dim())
                                    ? sup_distance(previous_iso, iso)
                                    : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
        previous_iso = iso;
    }
    return rows;
}

void write_closure_csv(std::ostream& os, const std::vector<ClosureStep>& rows) {
    os << "step,dim,is_uniform_box,log_concave,sup_distance_prev\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%zu,%d,%d,%.10g\n", r.step, r.dim, r.uniform_box ? 1 : 0,
                      r.log_concave ? 1 : 0, r.sup_distance_prev);
        os << buf;
    }
}

}  // namespace logcone
