// Recomputes the empirical constants in include/logcone/bands.hpp from the
// standard corpus and prints a replacement header on stdout.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "logcone/families.hpp"
#include "logcone/lipschitz.hpp"
#include "logcone/measure_ops.hpp"

using namespace logcone;

namespace {

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

constexpr double kMargin = 0.1;  // bands are widened by 10% on each side

}  // namespace

int main() {
    std::map<std::size_t, Range> retention, iso_const, slice_mass, lip, mainlemma;

    for (const auto& spec : standard_corpus()) {
        const DensityGrid g = generate(spec);
        const MomentSummary m = moments(g);
        for (std::size_t a = 0; a < g.dim(); ++a) {
            const DensityGrid s = symmetrize(g, a);
            const MomentSummary ms = moments(s);
            const double second = m.cov(a, a) + m.mean[a] * m.mean[a];
            const double second_s = ms.cov(a, a) + ms.mean[a] * ms.mean[a];
            retention[g.dim()].add(second_s / second);
        }
        const DensityGrid iso = isotropize(g).grid;
        iso_const[g.dim()].add(isotropic_constant(iso));
        if (g.dim() >= 2)
            for (std::size_t a = 0; a < g.dim(); ++a)
                slice_mass[g.dim()].add(mass(restrict_hyperplane(iso, a, 0.0)));
        std::fprintf(stderr, "corpus %s dim %zu done\n", spec.name.c_str(), spec.dim);
    }

    const std::vector<std::pair<std::string, std::string>> pairs{
        {"uniform_box", "uniform_box"}, {"gaussian", "gaussian"}, {"uniform_box", "gaussian"}};
    const std::vector<double> splits{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    for (std::size_t d = 1; d <= 2; ++d) {
        const double h = d == 1 ? 0.01 : 0.1;
        for (const auto& [fx, fy] : pairs) {
            for (const auto& row : lipschitz_sweep(fx, fy, d, h, splits)) lip[d].add(row.product);
            // Profiles are cheap, so the covariance contract is met on a finer grid.
            const double hm = 0.01;
            for (double v : splits) {
                const DensityGrid x = generate(spec_with_variance(fx, d, v, hm));
                const DensityGrid y = generate(spec_with_variance(fy, d, 1.0 - v, hm));
                const std::vector<double> z(d - 1, 0.0);
                mainlemma[d].add(mainlemma_integral(x, y, 0, z).product());
            }
            std::fprintf(stderr, "pair %s*%s dim %zu done\n", fx.c_str(), fy.c_str(), d);
        }
    }

    auto print_band = [](const char* name, std::map<std::size_t, Range>& r, std::size_t first) {
        std::printf("// recorded: ");
        for (auto& [d, v] : r) std::printf("dim %zu [%.6f, %.6f]  ", d, v.lo, v.hi);
        std::printf("\ninline constexpr Band %s[] = {\n", name);
        for (std::size_t d = 1; d < first; ++d) std::printf("    {0.0, 0.0},  // unused\n");
        for (auto& [d, v] : r)
            std::printf("    {%.4f, %.4f},  // dim %zu\n", v.lo * (1 - kMargin), v.hi * (1 + kMargin), d);
        std::printf("};\n\n");
    };

    std::printf("#pragma once\n\n// Generated by tools/record_bands from the standard corpus; bands are the\n"
                "// observed extremes widened by %.0f%%. Index 0 is dimension 1.\n\n"
                "namespace logcone::bands {\n\nstruct Band {\n    double lo;\n    double hi;\n"
                "    constexpr bool contains(double v) const { return lo <= v && v <= hi; }\n};\n\n",
                kMargin * 100);
    std::printf("// E(X_i^2) after symmetrization over before, per dimension.\n");
    print_band("kVarianceRetention", retention, 1);
    std::printf("// sup-density^(1/d) of the isotropic image.\n");
    print_band("kIsotropicConstant", iso_const, 1);
    std::printf("// Mass of the central coordinate slice of the isotropic image.\n");
    print_band("kSliceMass", slice_mass, 2);
    std::printf("// Lipschitz constant of X + Y along e_0 times sqrt(Var X_0 Var Y_0).\n");
    print_band("kLipschitzProduct", lip, 1);
    std::printf("// Profile-convolution value at 0 times sqrt(Var g_0 Var h_0).\n");
    print_band("kMainLemmaProduct", mainlemma, 1);
    std::printf("}  // namespace logcone::bands\n");
    return 0;
}
