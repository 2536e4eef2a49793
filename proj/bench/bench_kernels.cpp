// Times the OpenMP kernels against their serial reference versions.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "logcone/families.hpp"
#include "logcone/kernels.hpp"

using namespace logcone;

namespace {

double seconds(const std::function<void()>& f, int reps) {
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / reps;
}

void row(const std::string& name, double parallel, double serial) {
    std::printf("%-28s %12.6f %12.6f %8.2fx\n", name.c_str(), parallel, serial, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::stoi(argv[1]) : 3;
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %12s %12s %9s\n", "kernel", "parallel[s]", "serial[s]", "speedup");

    const DensityGrid a = generate({"gaussian", 2, {1.0}, 0.1});
    const DensityGrid b = generate({"uniform_box", 2, {1.0}, 0.1});
    row("convolve 2-D", seconds([&] { kernels::convolve(a, b); }, reps),
        seconds([&] { reference::convolve(a, b); }, reps));

    const DensityGrid c = generate({"laplace", 3, {4.0}, 0.1});
    row("rearrange_lines 3-D", seconds([&] { kernels::rearrange_lines(c, 1); }, reps),
        seconds([&] { reference::rearrange_lines(c, 1); }, reps));

    const Matrix rot{{0.8, -0.6}, {0.6, 0.8}};
    const std::vector<double> zero{0.0, 0.0};
    const DensityGrid g = generate({"gaussian", 2, {1.0}, 0.02});
    row("resample 2-D (x4 supersample)",
        seconds([&] { kernels::resample(g, rot, zero, g.geometry(), 1.0, 4); }, reps),
        seconds([&] { reference::resample(g, rot, zero, g.geometry(), 1.0, 4); }, reps));

    row("sup_along_axis 3-D", seconds([&] { kernels::sup_along_axis(c, 0); }, reps),
        seconds([&] { reference::sup_along_axis(c, 0); }, reps));
    return 0;
}
