#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>

#include "logcone/error.hpp"
#include "logcone/families.hpp"
#include "logcone/json_io.hpp"
#include "logcone/lcgrid_io.hpp"
#include "logcone/lipschitz.hpp"
#include "logcone/measure_ops.hpp"
#include "logcone/suites.hpp"

namespace logcone::cli {

namespace {

// Writes to `path`, or to `out` when no path was given.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
    if (path.empty()) {
        body(out);
        return;
    }
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::ParseError, "cannot write " + path);
    body(f);
}

void write_pgm(std::ostream& os, const DensityGrid& g) {
    if (g.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "render needs a 2-D grid");
    const std::size_t nx = g.shape()[0], ny = g.shape()[1];
    const double top = g.max_value();
    os << "P5\n" << nx << ' ' << ny << "\n255\n";
    // Axis 0 runs left to right, axis 1 bottom to top.
    std::string row(nx, '\0');
    for (std::size_t r = 0; r < ny; ++r) {
        const std::size_t j = ny - 1 - r;
        for (std::size_t i = 0; i < nx; ++i) {
            const double v = top > 0.0 ? g[i * ny + j] / top : 0.0;
            row[i] = static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v)));
        }
        os.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
}

Json suite_json(const std::string& suite, std::size_t d, const SuiteReport& r) {
    Json j{{"suite", suite},
           {"dim", d},
           {"trials", r.trials},
           {"violations", r.violations},
           {"seconds", r.seconds}};
    if (!r.outcomes.empty()) j["outcomes"] = r.outcomes;
    if (!r.first_failure.empty()) j["first_failure"] = r.first_failure;
    return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Log-concave densities on grids: build, transform, verify.", "logcone"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    std::string in, out_path, map_path, dirs_path, refined, config;
    std::vector<std::string> inputs, families;
    std::string family;
    std::vector<double> params;
    std::size_t dim = 1, axis = 0, trials = 1000;
    double h = 0.01, eps = 0.0, tol = 0.05;
    std::uint64_t seed = 0;
    int n = 12;
    bool diagonals = false;

    auto* gen = app.add_subcommand("gen", "Sample a named family to an LCGRID file");
    gen->add_option("family", family, "Family name")->required()->check(CLI::IsMember(family_names()));
    gen->add_option("params", params, "Family parameters (one, or one per axis)");
    gen->add_option("--dim", dim, "Dimension")->check(CLI::Range(1, 3));
    gen->add_option("--h", h, "Grid spacing");
    gen->add_option("-o,--output", out_path, "Output LCGRID")->required();

    auto* sym = app.add_subcommand("symmetrize", "Symmetric-decreasing rearrangement along one axis");
    sym->add_option("-i,--input", in)->required();
    sym->add_option("--axis", axis)->required();
    sym->add_option("-o,--output", out_path)->required();

    auto* conv = app.add_subcommand("convolve", "Density of the sum of two independent variables");
    conv->add_option("-i,--input", inputs)->required()->expected(2);
    conv->add_option("-o,--output", out_path)->required();

    auto* iso = app.add_subcommand("isotropize", "Affine image with mean 0 and identity covariance");
    iso->add_option("-i,--input", in)->required();
    iso->add_option("-o,--output", out_path)->required();
    iso->add_option("--map", map_path, "Write the applied affine map as JSON");

    auto* proj = app.add_subcommand("project", "Orthogonal projection onto a span of directions");
    proj->add_option("-i,--input", in)->required();
    proj->add_option("--dirs", dirs_path, "JSON list of orthonormal directions")->required();
    proj->add_option("-o,--output", out_path)->required();

    auto* stats = app.add_subcommand("stats", "Moments and isotropic constant as JSON");
    stats->add_option("-i,--input", in)->required();

    auto* check = app.add_subcommand("check", "Log-concavity report as JSON");
    check->add_option("-i,--input", in)->required();
    check->add_flag("--diagonals", diagonals, "Also check diagonal lines");
    check->add_option("--tol", tol, "Tolerance on log values")->default_val(kLogConcaveTol);

    auto* lip = app.add_subcommand("lipschitz", "Directional Lipschitz constant as JSON");
    lip->add_option("-i,--input", in)->required();
    lip->add_option("--axis", axis)->required();
    lip->add_option("--refined", refined, "Same density at half the spacing");

    auto* split = app.add_subcommand("split-cov", "Split a decomposition of the identity");
    split->add_option("-i,--input", in, "JSON {d, matrices, eps}")->required();

    auto* sweep = app.add_subcommand("sweep-lipschitz", "Lipschitz products over variance splits 0.1..0.9");
    sweep->add_option("--family", families, "Family of X, then of Y")->required()->expected(1, 2);
    sweep->add_option("--dim", dim)->check(CLI::Range(1, 3));
    sweep->add_option("--h", h);
    sweep->add_option("--axis", axis);
    sweep->add_option("-o,--output", out_path, "CSV (stdout if omitted)");

    auto* demo = app.add_subcommand("demo", "Demonstration pipelines");
    demo->require_subcommand(1);
    auto* clt = demo->add_subcommand("clt", "Sums of uniforms against the Gaussian");
    clt->add_option("--n", n, "Largest number of summands")->check(CLI::Range(2, 64));
    clt->add_option("--h", h);
    clt->add_option("-o,--output", out_path, "CSV (stdout if omitted)");
    auto* para = demo->add_subcommand("parallelotope", "Iterated products and linear images");
    para->add_option("--config", config, "JSON {seeds, maps, steps, tol}")->required();
    para->add_option("-o,--output", out_path, "CSV (stdout if omitted)");

    auto* render = app.add_subcommand("render", "8-bit PGM of a 2-D grid");
    render->add_option("-i,--input", in)->required();
    render->add_option("-o,--output", out_path)->required();

    auto* verify = app.add_subcommand("verify", "Randomized property suites");
    std::string suite;
    verify->add_option("suite", suite)->required()->check(CLI::IsMember({"addsections", "split-cov"}));
    verify->add_option("--dim", dim);
    verify->add_option("--trials", trials);
    verify->add_option("--seed", seed);
    verify->add_option("--eps", eps, "Split tolerance (default 0.5/(d+1)^2)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*gen) {
            save_lcgrid(out_path, generate(FamilySpec{family, dim, params, h}));
        } else if (*sym) {
            save_lcgrid(out_path, symmetrize(load_lcgrid(in), axis));
        } else if (*conv) {
            save_lcgrid(out_path, convolve(load_lcgrid(inputs[0]), load_lcgrid(inputs[1])));
        } else if (*iso) {
            const Isotropized r = isotropize(load_lcgrid(in));
            save_lcgrid(out_path, r.grid);
            if (!map_path.empty()) emit(map_path, out, [&](std::ostream& os) { os << to_json(r.map).dump(2) << '\n'; });
        } else if (*proj) {
            save_lcgrid(out_path, project(load_lcgrid(in), directions_from_json(load_json(dirs_path))));
        } else if (*stats) {
            const DensityGrid g = load_lcgrid(in);
            const MomentSummary m = moments(g);
            Json j = to_json(m);
            j["dim"] = g.dim();
            j["is_isotropic"] = is_isotropic(m);
            j["isotropic_constant"] = is_isotropic(m) ? Json(isotropic_constant(g)) : Json(nullptr);
            out << j.dump(2) << '\n';
        } else if (*check) {
            out << to_json(check_log_concave(load_lcgrid(in), DirectionSet{true, diagonals}, tol)).dump(2) << '\n';
        } else if (*lip) {
            const DensityGrid g = load_lcgrid(in);
            std::optional<DensityGrid> fine;
            if (!refined.empty()) fine = load_lcgrid(refined);
            out << to_json(directional_lipschitz(g, axis, fine ? &*fine : nullptr)).dump(2) << '\n';
        } else if (*split) {
            const SplitInput s = split_input_from_json(load_json(in));
            out << to_json(split_covariance(s.parts, s.eps)).dump(2) << '\n';
        } else if (*sweep) {
            const std::string fy = families.size() > 1 ? families[1] : families[0];
            const std::vector<double> splits{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
            const auto rows = lipschitz_sweep(families[0], fy, dim, h, splits, axis);
            emit(out_path, out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
        } else if (*clt) {
            const auto rows = clt_diagonal_demo(n, h);
            emit(out_path, out, [&](std::ostream& os) { write_clt_csv(os, rows); });
        } else if (*para) {
            const ClosureConfig c = closure_config_from_json(load_json(config));
            const auto rows = closure_sequence_demo(c.seeds, c.maps, c.steps, c.tol);
            emit(out_path, out, [&](std::ostream& os) { write_closure_csv(os, rows); });
        } else if (*render) {
            const DensityGrid g = load_lcgrid(in);
            std::ofstream f(out_path, std::ios::binary);
            if (!f) throw Error(ErrorCode::ParseError, "cannot write " + out_path);
            write_pgm(f, g);
        } else if (*verify) {
            const double e = eps > 0.0 ? eps : 0.5 / ((dim + 1.0) * (dim + 1.0));
            const SuiteReport r = suite == "addsections" ? addsections_suite(dim, trials, seed)
                                                          : split_suite(dim, trials, e, seed);
            out << suite_json(suite, dim, r).dump(2) << '\n';
            if (r.violations > 0) return 1;
        }
    } catch (const Error& e) {
        err << e.what() << '\n';
        return e.code() == ErrorCode::ParseError || e.code() == ErrorCode::BadParameters ? 2 : 1;
    }
    return 0;
}

}  // namespace logcone::cli
