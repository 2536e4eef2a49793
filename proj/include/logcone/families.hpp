#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "logcone/grid.hpp"
#include "logcone/measure_ops.hpp"

namespace logcone {

/// Named log-concave family sampled on a grid of resolution h.
///   uniform_box      params: widths (one value, or one per axis); default 1
///   uniform_ball     params: radius; default 1
///   uniform_simplex  params: scale s of {x >= 0, sum x <= s}; default 1
///   gaussian         params: sigmas; default 1
///   laplace          params: rates r of (r/2) exp(-r|x|); default 1
///   exponential      params: rates r of r exp(-r x), x >= 0; default 1
///   triangle         params: half-widths a of (1/a)(1 - |x|/a); default 1
/// Product families are tensor products of their 1-D factors.
struct FamilySpec {
    std::string name;
    std::size_t dim = 1;
    std::vector<double> params;
    double h = 0.01;
};

const std::vector<std::string>& family_names();

DensityGrid generate(const FamilySpec& spec);

/// 1-D member of the family with the given variance (the per-axis parameter
/// is solved from the variance). Used for variance-split sweeps.
/// Grid-aligned reference densities in dims 1-3 used by the property suites
/// and the recorded bands.
std::vector<FamilySpec> standard_corpus();

FamilySpec spec_with_variance(const std::string& name, std::size_t dim, double variance, double h);

/// Density of the sum of n independent uniform[0,1] variables.
double irwin_hall_density(int n, double x);
/// Volume of {u in [0,1]^d : sum u <= t}.
double irwin_hall_cdf(int d, double t);

struct CltRow {
    int n = 0;
    double sup_distance = 0.0;       // isotropized n-fold convolution vs N(0,1)
    double irwin_hall_error = 0.0;   // raw grid vs irwin_hall_density
};

std::vector<CltRow> clt_diagonal_demo(int n_max, double h);
void write_clt_csv(std::ostream& os, const std::vector<CltRow>& rows);

/// True iff the positive cells fill an axis-aligned box (up to one boundary
/// cell per face) on which the density is constant within a factor 1 + tol.
bool is_uniform_box(const DensityGrid& g, double tol = 0.05);

struct ClosureStep {
    int step = 0;
    std::size_t dim = 0;
    bool uniform_box = false;
    bool log_concave = false;
    double sup_distance_prev = 0.0;  // NaN when the previous iterate has another dimension
};

/// mu_0 = tensor product of the seeds; mu_k = T_k(mu_{k-1}) with maps cycled.
/// Every iterate is isotropized before it is inspected.
std::vector<ClosureStep> closure_sequence_demo(const std::vector<FamilySpec>& seeds,
                                               const std::vector<LinearMap>& maps, int steps,
                                               double tol = 0.05);
void write_closure_csv(std::ostream& os, const std::vector<ClosureStep>& rows);

}  // namespace logcone
