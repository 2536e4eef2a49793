#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "logcone/error.hpp"
#include "logcone/families.hpp"
#include "support.hpp"

using namespace logcone;

TEST_SUITE("families") {

TEST_CASE("generated examples") {
    const DensityGrid box = generate({"uniform_box", 1, {1.0}, 0.01});
    CHECK(box.size() == 100);
    CHECK(mass(box) == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : box.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    const DensityGrid g = generate({"gaussian", 1, {1.0}, 0.01});
    const double m = mass(g);
    CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        worst = std::max(worst, std::abs(g[k] - testing::normal_pdf(g.point(k)[0])));
    CHECK(worst <= 1e-12);

    const MomentSummary lap = moments(generate({"laplace", 1, {1.0}, 0.01}));
    CHECK(lap.cov(0, 0) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(std::abs(lap.mean[0]) <= 1e-9);

    const MomentSummary ex = moments(generate({"exponential", 1, {2.0}, 0.005}));
    CHECK(ex.mean[0] == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(ex.cov(0, 0) == doctest::Approx(0.25).epsilon(1e-3));

    const DensityGrid disc = generate({"uniform_ball", 2, {1.0}, 0.01});
    CHECK(disc.max_value() == doctest::Approx(1.0 / std::numbers::pi).epsilon(5e-3));
    const DensityGrid tet = generate({"uniform_simplex", 3, {1.0}, 0.05});
    CHECK(moments(tet).mean[2] == doctest::Approx(0.25).epsilon(1e-3));

    CHECK(family_names().size() == 7);
}

TEST_CASE("parameter validation") {
    auto code = [](const FamilySpec& s) {
        try {
            generate(s);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InternalContractViolation;
    };
    CHECK(code({"cauchy", 1, {}, 0.01}) == ErrorCode::BadParameters);
    CHECK(code({"gaussian", 4, {}, 0.01}) == ErrorCode::BadParameters);
    CHECK(code({"gaussian", 2, {1.0, 2.0, 3.0}, 0.01}) == ErrorCode::BadParameters);
    CHECK(code({"laplace", 1, {-1.0}, 0.01}) == ErrorCode::BadParameters);
    CHECK(code({"uniform_box", 1, {1.0}, 0.0}) == ErrorCode::BadParameters);
    CHECK(code({"uniform_ball", 2, {1.0, 2.0}, 0.1}) == ErrorCode::BadParameters);
    CHECK_THROWS_AS(spec_with_variance("uniform_simplex", 2, 0.5, 0.1), Error);
    CHECK_THROWS_AS(spec_with_variance("gaussian", 1, 0.0, 0.1), Error);
}

TEST_CASE("variance parametrisation") {
    for (const auto& name : family_names()) {
        if (name == "uniform_simplex") continue;
        for (std::size_t dim : {1, 2}) {
            CAPTURE(name);
            CAPTURE(dim);
            const FamilySpec spec = spec_with_variance(name, dim, 0.3, dim == 1 ? 0.002 : 0.01);
            const MomentSummary m = moments(generate(spec));
            for (std::size_t a = 0; a < dim; ++a) CHECK(m.cov(a, a) == doctest::Approx(0.3).epsilon(0.01));
        }
    }
}

TEST_CASE("Irwin-Hall oracle") {
    CHECK(irwin_hall_density(1, 0.5) == 1.0);
    CHECK(irwin_hall_density(2, 1.0) == doctest::Approx(1.0));
    CHECK(irwin_hall_density(3, 1.5) == doctest::Approx(0.75));
    CHECK(irwin_hall_density(3, -0.1) == 0.0);
    CHECK(irwin_hall_density(3, 3.1) == 0.0);
    CHECK(irwin_hall_cdf(2, 1.0) == doctest::Approx(0.5));
    CHECK(irwin_hall_cdf(3, 1.0) == doctest::Approx(1.0 / 6.0));
    CHECK(irwin_hall_cdf(3, 3.0) == doctest::Approx(1.0));
    CHECK(irwin_hall_cdf(3, 1.5) == doctest::Approx(0.5));
    // density integrates to 1
    double s = 0.0;
    const int n = 6;
    for (int k = 0; k < 6000; ++k) s += irwin_hall_density(n, (k + 0.5) * 1e-3) * 1e-3;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(irwin_hall_density(0, 0.5), Error);
}

TEST_CASE("CLT along the cube diagonal") {
    const double h = 0.01;
    const auto rows = clt_diagonal_demo(12, h);
    REQUIRE(rows.size() == 12);
    for (const auto& r : rows) CHECK(r.irwin_hall_error <= 2.0 * h);
    for (std::size_t k = 2; k < rows.size(); ++k) CHECK(rows[k].sup_distance < rows[k - 1].sup_distance);
    CHECK(rows.back().sup_distance < rows[2].sup_distance);

    std::ostringstream os;
    write_clt_csv(os, rows);
    CHECK(os.str().rfind("n,sup_distance,irwin_hall_error\n1,", 0) == 0);
    CHECK_THROWS_AS(clt_diagonal_demo(1, h), Error);
}

TEST_CASE("uniform box detector") {
    CHECK(is_uniform_box(generate({"uniform_box", 2, {1.0, 2.0}, 0.05})));
    CHECK(is_uniform_box(generate({"uniform_box", 3, {1.0}, 0.1})));
    CHECK(is_uniform_box(generate({"uniform_box", 1, {2.5}, 0.01})));
    for (const char* name : {"gaussian", "laplace", "exponential", "triangle", "uniform_ball", "uniform_simplex"}) {
        CAPTURE(name);
        CHECK_FALSE(is_uniform_box(generate({name, 2, {1.0}, 0.05})));
    }
    const DensityGrid sq = generate({"uniform_box", 2, {1.0}, 0.02});
    const double c = std::cos(0.4), s = std::sin(0.4);
    CHECK_FALSE(is_uniform_box(linear_image(sq, LinearMap(Matrix{{c, -s}, {s, c}}))));
    CHECK(is_uniform_box(linear_image(sq, LinearMap(Matrix{{2.0, 0.0}, {0.0, 0.5}}))));
}

TEST_CASE("closure sequences") {
    const FamilySpec u{"uniform_box", 1, {1.0}, 0.05};
    const LinearMap stretch(Matrix{{2.0, 0.0}, {0.0, 0.5}});
    const auto cube = closure_sequence_demo({u, u}, {stretch}, 2);
    REQUIRE(cube.size() == 3);
    for (const auto& r : cube) {
        CHECK(r.dim == 2);
        CHECK(r.uniform_box);
        CHECK(r.log_concave);
    }
    CHECK(std::isnan(cube[0].sup_distance_prev));
    CHECK(cube[1].sup_distance_prev <= 1e-6);

    const FamilySpec t{"triangle", 1, {1.0}, 0.05};
    for (const auto& r : closure_sequence_demo({u, t}, {stretch}, 1)) CHECK_FALSE(r.uniform_box);

    const auto shadow = closure_sequence_demo({u, u}, {LinearMap(Matrix{{0.6, 0.8}})}, 1);
    CHECK(shadow[0].uniform_box);
    CHECK(shadow[1].dim == 1);
    CHECK_FALSE(shadow[1].uniform_box);
    CHECK(shadow[1].log_concave);

    std::ostringstream os;
    write_closure_csv(os, cube);
    CHECK(os.str().rfind("step,dim,is_uniform_box,log_concave,sup_distance_prev\n0,2,1,1,", 0) == 0);
    CHECK_THROWS_AS(closure_sequence_demo({}, {}, 0), Error);
}

TEST_CASE("corpus") {
    const auto corpus = standard_corpus();
    CHECK(corpus.size() >= 20);
    std::size_t dims[4] = {0, 0, 0, 0};
    for (const auto& spec : corpus) {
        CAPTURE(spec.name);
        ++dims[spec.dim];
        const DensityGrid g = generate(spec);
        CHECK(std::abs(mass(g) - 1.0) <= 1e-12);
        CHECK(check_log_concave(g, DirectionSet{true, true}).log_concave);
    }
    CHECK(dims[1] >= 7);
    CHECK(dims[2] >= 7);
    CHECK(dims[3] >= 4);
}

}  // TEST_SUITE
