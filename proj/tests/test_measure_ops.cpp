#include <doctest.h>

#include <cmath>
#include <functional>

#include "logcone/bands.hpp"
#include "logcone/error.hpp"
#include "logcone/families.hpp"
#include "logcone/measure_ops.hpp"
#include "support.hpp"

using namespace logcone;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::InternalContractViolation;
}

DensityGrid tiled(std::vector<double> lo, std::vector<double> hi, std::vector<std::size_t> n, double value) {
    const auto geom = tiling_geometry(lo, hi, n);
    return DensityGrid(geom, std::vector<double>(geom.size(), value));
}

DensityGrid unit_interval(std::size_t n) { return tiled({0.0}, {1.0}, {n}, 1.0); }

double max_error(const DensityGrid& g, const std::function<double(std::span<const double>)>& f) {
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const auto x = g.point(k);
        worst = std::max(worst, std::abs(g[k] - f(x)));
    }
    return worst;
}

}  // namespace

TEST_SUITE("measure_ops") {

TEST_CASE("tensor products") {
    const DensityGrid u = unit_interval(20);
    const DensityGrid sq = tensor_product(u, u);
    CHECK(sq.dim() == 2);
    for (double v : sq.values()) CHECK(v == 1.0);

    const DensityGrid a = tiled({0.0}, {1.0}, {10}, 2.0), b = tiled({0.0}, {2.0}, {8}, 0.75);
    CHECK(mass(tensor_product(a, b)) == doctest::Approx(mass(a) * mass(b)).epsilon(1e-15));

    const DensityGrid g = generate({"gaussian", 1, {1.0}, 0.05});
    const DensityGrid gg = tensor_product(g, g);
    CHECK(max_error(gg, [](std::span<const double> x) {
              return testing::normal_pdf(x[0]) * testing::normal_pdf(x[1]);
          }) <= 1e-12);
    CHECK(code_of([&] { tensor_product(gg, gg); }) == ErrorCode::DimensionOverflow);
}

TEST_CASE("linear images") {
    const DensityGrid g = generate({"triangle", 2, {1.0}, 0.05});
    const LinearMap id(Matrix::identity(2));
    CHECK(linear_image(g, id) == g);

    const DensityGrid u = tiled({-1.0}, {1.0}, {40}, 0.5);
    const DensityGrid s = linear_image(u, LinearMap(Matrix{{2.0}}));
    CHECK(s.geometry().lower(0) == doctest::Approx(-2.0));
    CHECK(s.geometry().upper(0) == doctest::Approx(2.0));
    for (double v : s.values()) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));

    const DensityGrid flipped = linear_image(generate({"exponential", 1, {1.0}, 0.01}), LinearMap(Matrix{{-1.0}}));
    CHECK(flipped.geometry().upper(0) == doctest::Approx(0.0));
    CHECK(flipped.values().back() == doctest::Approx(std::exp(-0.005) / mass(generate({"exponential", 1, {1.0}, 0.01}))));

    const DensityGrid e = generate({"exponential", 2, {1.0, 3.0}, 0.05});
    const DensityGrid swapped = linear_image(e, LinearMap(Matrix{{0.0, 2.0}, {1.0, 0.0}}));
    CHECK(swapped.shape()[0] == e.shape()[1]);
    CHECK(swapped.spacing()[0] == doctest::Approx(0.1));
    CHECK(moments(swapped).mean[0] == doctest::Approx(2.0 * moments(e).mean[1]).epsilon(1e-12));
    CHECK(mass(swapped) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(code_of([&] { linear_image(g, LinearMap(Matrix{{1.0, 2.0}, {2.0, 4.0}})); }) == ErrorCode::SingularMap);
}

TEST_CASE("rotating an isotropic Gaussian leaves it unchanged") {
    const double h = 0.005;
    const DensityGrid g = DensityGrid::from_function(testing::centred(2, 1200, h), [](std::span<const double> x) {
        return testing::normal_pdf(x[0]) * testing::normal_pdf(x[1]);
    });
    const double c = std::cos(std::numbers::pi / 6), s = std::sin(std::numbers::pi / 6);
    const LinearMap rot(Matrix{{c, -s}, {s, c}});
    const DensityGrid r = linear_image(g, rot, testing::centred(2, 300, h));
    CHECK(max_error(r, [](std::span<const double> x) {
              return testing::normal_pdf(x[0]) * testing::normal_pdf(x[1]);
          }) <= 2e-6);

    const DensityGrid coarse = generate({"gaussian", 2, {1.0}, 0.05});
    CHECK(mass(linear_image(coarse, rot)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("projections") {
    const DensityGrid sq = tensor_product(unit_interval(50), unit_interval(50));
    const DensityGrid e1 = project(sq, {{1.0, 0.0}});
    CHECK(e1.dim() == 1);
    for (double v : e1.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));

    // (x + y) / sqrt(2) for x, y uniform on [0,1]: sqrt(2) f_2(sqrt(2) t).
    const double r2 = std::sqrt(2.0);
    const DensityGrid diag = project(sq, {{1.0 / r2, 1.0 / r2}});
    const double h = diag.spacing()[0];
    CHECK(max_error(diag, [&](std::span<const double> t) { return r2 * irwin_hall_density(2, r2 * t[0]); }) <= 2.0 * h);
    CHECK(mass(diag) == doctest::Approx(1.0).epsilon(1e-3));

    const DensityGrid g = generate({"gaussian", 2, {1.0, 2.0}, 0.02});
    const DensityGrid y = project(g, {{0.0, 1.0}});
    CHECK(max_error(y, [](std::span<const double> t) { return testing::normal_pdf(t[0], 4.0); }) <= 1e-6);

    const DensityGrid neg = project(g, {{0.0, -1.0}});
    CHECK(neg.values().front() == y.values().back());

    CHECK(code_of([&] { project(g, {{1.0, 1.0}}); }) == ErrorCode::NotOrthonormal);
    CHECK(code_of([&] { project(g, {{1.0, 0.0}, {0.0, 1.0}}); }) == ErrorCode::NotOrthonormal);
}

TEST_CASE("projecting a tensor product onto a factor returns the factor") {
    const DensityGrid a = generate({"laplace", 1, {2.0}, 0.02});
    const DensityGrid b = generate({"triangle", 1, {1.0}, 0.02});
    const DensityGrid p = project(tensor_product(a, b), {{1.0, 0.0}});
    CHECK(testing::max_abs_diff(p.values(), a.values()) <= 1e-12);
    const DensityGrid q = project(tensor_product(a, b), {{0.0, 1.0}});
    CHECK(testing::max_abs_diff(q.values(), b.values()) <= 1e-12);
}

TEST_CASE("pushforward dispatches on the map") {
    const DensityGrid g = generate({"gaussian", 2, {1.0, 2.0}, 0.05});
    const DensityGrid marg = pushforward(g, LinearMap(Matrix{{0.0, 1.0}}));
    CHECK(marg.dim() == 1);
    const DensityGrid via_p = pushforward(g, LinearMap(Matrix{{0.0, 0.0}, {0.0, 1.0}}));
    CHECK(via_p == marg);
    CHECK(pushforward(g, LinearMap(Matrix{{2.0, 0.0}, {0.0, 1.0}})).dim() == 2);
    CHECK(code_of([&] { pushforward(g, LinearMap(Matrix{{1.0, 1.0}, {1.0, 1.0}})); }) == ErrorCode::SingularMap);
}

TEST_CASE("convolution oracles") {
    const double h = 0.01;
    const DensityGrid u = generate({"uniform_box", 1, {1.0}, h});
    const DensityGrid t = convolve(u, u);
    CHECK(max_error(t, [](std::span<const double> x) { return std::max(0.0, 1.0 - std::abs(x[0])); }) <= h);
    CHECK(mass(t) == doctest::Approx(1.0).epsilon(1e-9));

    const DensityGrid g1 = generate({"gaussian", 1, {0.6}, 0.005});
    const DensityGrid g2 = generate({"gaussian", 1, {0.8}, 0.005});
    const DensityGrid g = convolve(g1, g2);
    CHECK(max_error(g, [](std::span<const double> x) { return testing::normal_pdf(x[0], 1.0); }) <= 1e-5);

    const DensityGrid a = generate({"exponential", 2, {1.0, 3.0}, 0.05});
    const DensityGrid b = generate({"triangle", 2, {0.5}, 0.05});
    const DensityGrid ab = convolve(a, b), ba = convolve(b, a);
    CHECK(ab == ba);
    CHECK(std::abs(mass(ab) - mass(a) * mass(b)) <= 1e-9);
    CHECK(check_log_concave(ab).log_concave);

    const DensityGrid spike = generate({"uniform_box", 1, {0.01}, h});
    const DensityGrid lap = generate({"laplace", 1, {1.0}, h});
    CHECK(sup_distance(convolve(spike, lap), lap) <= 2.0 * h);

    CHECK(code_of([&] { convolve(u, a); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("convolution resamples mismatched spacings") {
    const DensityGrid a = generate({"gaussian", 1, {0.5}, 0.01});
    const DensityGrid b = generate({"gaussian", 1, {0.5}, 0.02});
    const DensityGrid c = convolve(a, b);
    CHECK(c.spacing()[0] == 0.01);
    CHECK(mass(c) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(max_error(c, [](std::span<const double> x) { return testing::normal_pdf(x[0], 0.5); }) <= 1e-3);
}

TEST_CASE("symmetrization examples") {
    const DensityGrid tri = generate({"triangle", 1, {1.0}, 0.01});
    CHECK(sup_distance(symmetrize(tri, 0), tri) <= 1e-12);

    const DensityGrid u = symmetrize(unit_interval(40), 0);
    CHECK(u.geometry().lower(0) == doctest::Approx(-0.5));
    CHECK(u.geometry().upper(0) == doctest::Approx(0.5));
    for (double v : u.values()) CHECK(v == 1.0);

    const double h = 0.01;
    const DensityGrid e = generate({"exponential", 1, {1.0}, h});
    const DensityGrid se = symmetrize(e, 0);
    CHECK(max_error(se, [](std::span<const double> x) { return std::exp(-2.0 * std::abs(x[0])); }) <= 2.0 * h);
}

TEST_CASE("symmetrization preserves line multisets, mass and the other axes") {
    const DensityGrid g = generate({"exponential", 2, {1.0, 2.0}, 0.05});
    const MomentSummary m = moments(g);
    for (std::size_t axis = 0; axis < 2; ++axis) {
        const DensityGrid s = symmetrize(g, axis);
        CHECK(std::abs(mass(s) - mass(g)) <= 1e-12);
        const MomentSummary ms = moments(s);
        const std::size_t other = 1 - axis;
        CHECK(std::abs(ms.cov(other, other) - m.cov(other, other)) <= 1e-10);
        CHECK(std::abs(ms.mean[other] - m.mean[other]) <= 1e-12);
        // An even line cannot be mirrored exactly about its centre.
        CHECK(std::abs(ms.mean[axis]) <= 0.5 * g.spacing()[axis]);
        CHECK(ms.cov(axis, axis) <= m.cov(axis, axis) + m.mean[axis] * m.mean[axis] + 1e-8);
        CHECK(std::abs(ms.cov(0, 1)) <= 1e-12);
        CHECK(check_log_concave(s, {}, 1e-6).log_concave);

        std::vector<double> before(g.values().begin(), g.values().end());
        std::vector<double> after(s.values().begin(), s.values().end());
        std::sort(before.begin(), before.end());
        std::sort(after.begin(), after.end());
        CHECK(before == after);
    }
}

TEST_CASE("isotropization") {
    const DensityGrid u = tiled({0.0}, {2.0}, {400}, 0.5);
    const Isotropized iu = isotropize(u);
    const double r3 = std::sqrt(3.0);
    CHECK(iu.map.linear(0, 0) == doctest::Approx(r3).epsilon(1e-4));
    CHECK(iu.map.offset[0] == doctest::Approx(-r3).epsilon(1e-4));
    CHECK(iu.grid.geometry().lower(0) == doctest::Approx(-r3).epsilon(1e-4));
    CHECK(iu.grid.geometry().upper(0) == doctest::Approx(r3).epsilon(1e-4));
    CHECK(is_isotropic(moments(iu.grid)));

    const Isotropized again = isotropize(iu.grid);
    CHECK((again.map.linear - Matrix::identity(1)).max_abs() <= 1e-4);
    CHECK(std::abs(again.map.offset[0]) <= 1e-4);

    const DensityGrid corr = DensityGrid::from_function(testing::centred(2, 240, 0.05), [](std::span<const double> x) {
        // covariance [[2,1],[1,2]]: inverse (1/3)[[2,-1],[-1,2]], det 3
        const double q = (2 * x[0] * x[0] - 2 * x[0] * x[1] + 2 * x[1] * x[1]) / 3.0;
        return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(3.0));
    });
    const Isotropized ic = isotropize(corr);
    const MomentSummary mc = moments(ic.grid);
    CHECK((mc.cov.matrix() - Matrix::identity(2)).max_abs() <= 1e-4);
    CHECK(std::abs(mc.mean[0]) <= 1e-6);
    CHECK(max_error(ic.grid, [](std::span<const double> x) {
              return testing::normal_pdf(x[0]) * testing::normal_pdf(x[1]);
          }) <= 1e-4);

    const DensityGrid flat = tensor_product(generate({"gaussian", 1, {1.0}, 0.1}),
                                            DensityGrid(GridGeometry{{1}, {0.0}, {0.1}}, {10.0}));
    CHECK(code_of([&] { isotropize(flat); }) == ErrorCode::DegenerateCovariance);
}

TEST_CASE("every corpus member isotropizes") {
    for (const auto& spec : standard_corpus()) {
        CAPTURE(spec.name);
        CAPTURE(spec.dim);
        const DensityGrid iso = isotropize(generate(spec)).grid;
        const MomentSummary m = moments(iso);
        for (double x : m.mean) CHECK(std::abs(x) <= 1e-6);
        CHECK((m.cov.matrix() - Matrix::identity(spec.dim)).max_abs() <= 1e-4);
        CHECK(bands::kIsotropicConstant[spec.dim - 1].contains(isotropic_constant(iso)));
        if (spec.dim >= 2)
            for (std::size_t a = 0; a < spec.dim; ++a)
                CHECK(bands::kSliceMass[spec.dim - 1].contains(mass(restrict_hyperplane(iso, a, 0.0))));
    }
}

TEST_CASE("sup profiles") {
    const DensityGrid a = generate({"laplace", 1, {2.0}, 0.05});
    const DensityGrid b = generate({"triangle", 1, {1.0}, 0.05});
    const ProfileGrid p = sup_profile(tensor_product(a, b), 1);
    CHECK(p.axis == 1);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(p.grid[k] == a[k] * b.max_value());
    CHECK(check_log_concave(p.grid).log_concave);

    const DensityGrid g = DensityGrid::from_function(testing::centred(2, 40, 0.05), [](std::span<const double> x) {
        return std::exp(-(x[0] - 0.3) * (x[0] - 0.3) - (x[0] - x[1]) * (x[0] - x[1]) - std::abs(x[1] + 0.2));
    });
    const DensityGrid s = symmetrize(g, 1);
    REQUIRE(s.shape()[1] % 2 == 1);
    CHECK(sup_profile(s, 1).grid.values().size() == restrict_hyperplane(s, 1, 0.0).size());
    const DensityGrid slice = restrict_hyperplane(s, 1, 0.0);
    const DensityGrid prof = sup_profile(s, 1).grid;
    CHECK(std::equal(prof.values().begin(), prof.values().end(), slice.values().begin()));
    for (std::size_t flat = 0; flat < s.size(); ++flat)
        CHECK(prof[s.unravel(flat)[0]] >= s[flat]);

    CHECK(code_of([&] { sup_profile(a, 0); }) == ErrorCode::DimensionTooLow);
}

TEST_CASE("hyperplane restriction") {
    const DensityGrid sq = tensor_product(unit_interval(20), unit_interval(20));
    const DensityGrid mid = restrict_hyperplane(sq, 1, 0.5);
    CHECK(mid.dim() == 1);
    for (double v : mid.values()) CHECK(v == doctest::Approx(1.0));

    const DensityGrid g = generate({"gaussian", 2, {1.0}, 0.05});
    const DensityGrid slice = restrict_hyperplane(g, 0, 0.0);
    CHECK(max_error(slice, [](std::span<const double> y) {
              return std::exp(-0.5 * y[0] * y[0]) / (2.0 * std::numbers::pi);
          }) <= 1e-12);

    // Uniform disc of radius 2 has identity covariance; the central chord
    // carries 2r / (pi r^2) = 1/pi.
    const DensityGrid disc = generate({"uniform_ball", 2, {2.0}, 0.01});
    CHECK(mass(restrict_hyperplane(disc, 0, 0.0)) == doctest::Approx(1.0 / std::numbers::pi).epsilon(5e-3));

    CHECK(code_of([&] { restrict_hyperplane(sq, 0, 1.2); }) == ErrorCode::LevelOutOfRange);
    CHECK(code_of([&] { restrict_hyperplane(unit_interval(4), 0, 0.5); }) == ErrorCode::DimensionTooLow);
}

}  // TEST_SUITE
