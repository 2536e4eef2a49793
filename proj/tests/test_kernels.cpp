#include <doctest.h>

#include <cmath>

#include "logcone/families.hpp"
#include "logcone/kernels.hpp"
#include "support.hpp"

using namespace logcone;

TEST_SUITE("kernels") {

TEST_CASE("parallel convolution agrees with the serial one") {
    const DensityGrid a = generate({"gaussian", 2, {1.0, 0.5}, 0.1});
    const DensityGrid b = generate({"exponential", 2, {2.0, 1.0}, 0.1});
    const auto par = kernels::convolve(a, b), ser = reference::convolve(a, b);
    REQUIRE(par.size() == ser.size());
    CHECK(testing::max_abs_diff(par, ser) <= 1e-14);

    const DensityGrid c = generate({"laplace", 1, {1.0}, 0.01});
    const DensityGrid d = generate({"triangle", 1, {0.5}, 0.01});
    CHECK(testing::max_abs_diff(kernels::convolve(c, d), reference::convolve(c, d)) <= 1e-14);
}

TEST_CASE("line rearrangement is identical") {
    const DensityGrid g = generate({"uniform_simplex", 3, {1.5}, 0.1});
    for (std::size_t axis = 0; axis < 3; ++axis)
        CHECK(kernels::rearrange_lines(g, axis) == reference::rearrange_lines(g, axis));
}

TEST_CASE("resampling is identical") {
    const DensityGrid g = generate({"gaussian", 2, {1.0}, 0.05});
    const Matrix inv{{0.8, -0.3}, {0.2, 1.1}};
    const std::vector<double> offset{0.1, -0.2};
    const GridGeometry out = testing::centred(2, 60, 0.07);
    for (std::size_t s : {1, 3}) {
        CAPTURE(s);
        CHECK(kernels::resample(g, inv, offset, out, 1.3, s) == reference::resample(g, inv, offset, out, 1.3, s));
    }
    const DensityGrid g3 = generate({"triangle", 3, {1.0}, 0.1});
    const Matrix inv3{{1.0, 0.1, 0.0}, {0.0, 1.0, 0.2}, {0.3, 0.0, 1.0}};
    const std::vector<double> off3{0.0, 0.0, 0.0};
    const GridGeometry out3 = testing::centred(3, 12, 0.1);
    CHECK(kernels::resample(g3, inv3, off3, out3, 1.0, 2) == reference::resample(g3, inv3, off3, out3, 1.0, 2));
}

TEST_CASE("axis maxima are identical") {
    const DensityGrid g = generate({"uniform_ball", 3, {1.0}, 0.1});
    for (std::size_t axis = 0; axis < 3; ++axis) {
        const auto s = kernels::sup_along_axis(g, axis);
        CHECK(s == reference::sup_along_axis(g, axis));
        CHECK(s.size() == g.size() / g.shape()[axis]);
    }
}

}  // TEST_SUITE
