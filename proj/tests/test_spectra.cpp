#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "logcone/error.hpp"
#include "logcone/spectra.hpp"
#include "logcone/suites.hpp"

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

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
    return e;
}

CovMatrix diag(std::initializer_list<double> v) {
    const std::vector<double> d(v);
    return CovMatrix::diagonal(d);
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("CovMatrix rejects asymmetric input") {
    CHECK(code_of([] { CovMatrix(Matrix{{1.0, 0.5}, {0.4, 1.0}}); }) == ErrorCode::BadParameters);
    const CovMatrix c(Matrix{{1.0, 0.5}, {0.5 + 1e-15, 1.0}});
    CHECK(c(0, 1) == c(1, 0));
}

TEST_CASE("eigendecompose worked examples") {
    const auto e = eigendecompose(diag({1.0, 2.0, 3.0}));
    CHECK(e.values[0] == doctest::Approx(1.0));
    CHECK(e.values[2] == doctest::Approx(3.0));
    CHECK(std::abs(e.vectors(0, 0) - 1.0) <= 1e-14);

    const auto f = eigendecompose(CovMatrix(Matrix{{2.0, 1.0}, {1.0, 2.0}}));
    CHECK(std::abs(f.values[0] - 1.0) <= 1e-14);
    CHECK(std::abs(f.values[1] - 3.0) <= 1e-14);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(f.vectors(0, 0) - s) <= 1e-14);
    CHECK(std::abs(f.vectors(1, 0) + s) <= 1e-14);
    CHECK(std::abs(f.vectors(0, 1) - s) <= 1e-14);
    CHECK(std::abs(f.vectors(1, 1) - s) <= 1e-14);
}

TEST_CASE("eigendecompose agrees with an independent solver") {
    Rng rng(7);
    for (std::size_t d : {1, 2, 3, 5, 8, 12}) {
        for (int t = 0; t < 50; ++t) {
            const CovMatrix a = random_spd(rng, d, 0.0, 3.0);
            const auto ours = eigendecompose(a);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(to_eigen(a.matrix()));
            const double scale = std::max(1.0, a.matrix().max_abs());
            for (std::size_t k = 0; k < d; ++k) CHECK(std::abs(ours.values[k] - ref.eigenvalues()(k)) <= 1e-10 * scale);

            const Eigen::MatrixXd v = to_eigen(ours.vectors);
            CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-10);
            const Eigen::MatrixXd lam = Eigen::VectorXd::Map(ours.values.data(), d).asDiagonal();
            CHECK((to_eigen(a.matrix()) * v - v * lam).cwiseAbs().maxCoeff() <= 1e-9 * scale);
            CHECK((v * lam * v.transpose() - to_eigen(a.matrix())).cwiseAbs().maxCoeff() <= 1e-10 * scale);
        }
    }
}

TEST_CASE("rotation-conjugated diagonal recovers its spectrum") {
    Rng rng(11);
    const Matrix q = random_orthogonal(rng, 4);
    const std::vector<double> lam{0.1, 0.7, 0.7, 2.5};
    const auto e = eigendecompose(CovMatrix(q * Matrix::diagonal(lam) * q.transposed()));
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(e.values[k] - lam[k]) <= 1e-10);
}

TEST_CASE("split: single part with a middle eigenvalue") {
    const std::vector<CovMatrix> parts{diag({0.5}), diag({0.5})};
    const SplitResult r = split_covariance(parts, 0.1);
    const auto& m = std::get<MiddleEigen>(r);
    CHECK(m.subset == std::vector<std::size_t>{0});
    CHECK(m.lambda == doctest::Approx(0.5));
    CHECK(m.step == 1);
}

TEST_CASE("split: full decomposition") {
    const std::vector<CovMatrix> parts{diag({0.98, 0.0}), diag({0.02, 0.02}), diag({0.0, 0.98})};
    const auto full = std::get<FullDecomposition>(split_covariance(parts, 0.05));
    REQUIRE(full.subspaces.size() == 2);
    CHECK(full.subspaces[0].index == 0);
    CHECK(full.subspaces[1].index == 2);
    CHECK(std::abs(full.subspaces[0].basis[0][0] - 1.0) <= 1e-12);
    CHECK(std::abs(full.subspaces[1].basis[0][1] - 1.0) <= 1e-12);
}

TEST_CASE("split: prefix-sum branch") {
    const std::vector<CovMatrix> parts(10, diag({0.1}));
    const auto m = std::get<MiddleEigen>(split_covariance(parts, 0.2));
    CHECK(m.step == 3);
    CHECK(m.subset == std::vector<std::size_t>{0, 1});
    CHECK(std::abs(m.lambda - 0.2) <= 1e-12);
}

TEST_CASE("split: prefix-sum branch takes parts with no large eigenvalue first") {
    // Part 0 owns e1 entirely; the rest split e2 into tenths.
    std::vector<CovMatrix> parts{diag({1.0, 0.0})};
    for (int i = 0; i < 10; ++i) parts.push_back(diag({0.0, 0.1}));
    const auto m = std::get<MiddleEigen>(split_covariance(parts, 0.1));
    CHECK(m.step == 3);
    CHECK(m.subset == std::vector<std::size_t>{1, 2});
    CHECK(std::abs(m.lambda - 0.2) <= 1e-12);
    verify_split(SplitResult{m}, parts, 0.1);
}

TEST_CASE("split: precondition errors") {
    const std::vector<CovMatrix> halves{diag({0.5}), diag({0.5})};
    CHECK(code_of([&] { split_covariance(halves, 0.25); }) == ErrorCode::EpsOutOfRange);
    CHECK(code_of([&] { split_covariance(halves, 0.0); }) == ErrorCode::EpsOutOfRange);
    const std::vector<CovMatrix> short_sum{diag({0.5}), diag({0.4})};
    CHECK(code_of([&] { split_covariance(short_sum, 0.1); }) == ErrorCode::NotIdentitySum);
    const std::vector<CovMatrix> indefinite{diag({1.5, 0.5}), diag({-0.5, 0.5})};
    CHECK(code_of([&] { split_covariance(indefinite, 0.05); }) == ErrorCode::NotPSD);
}

TEST_CASE("verify_split rejects doctored results") {
    const std::vector<CovMatrix> parts{diag({0.5}), diag({0.5})};
    CHECK(code_of([&] { verify_split(SplitResult{MiddleEigen{{0}, 0.05, {1.0}, 1}}, parts, 0.1); }) ==
          ErrorCode::InternalContractViolation);
    CHECK(code_of([&] { verify_split(SplitResult{MiddleEigen{{0}, 0.5, {0.6}, 1}}, parts, 0.1); }) ==
          ErrorCode::InternalContractViolation);
    FullDecomposition bogus;
    bogus.subspaces.push_back({0, {{1.0}}});
    CHECK(code_of([&] { verify_split(SplitResult{bogus}, parts, 0.1); }) == ErrorCode::InternalContractViolation);
}

TEST_CASE("full decompositions are nearly orthogonal") {
    // Each subspace vector v of part i has <A_i v, v> > 1 - eps, so for u, v
    // from different parts <u, v>^2 <= eps / (1 - eps). Exact orthogonality
    // only holds when the parts commute.
    Rng rng(3);
    std::size_t fulls = 0;
    for (std::size_t d : {2, 3, 5}) {
        const double eps = 0.5 / ((d + 1.0) * (d + 1.0));
        for (int t = 0; t < 400; ++t) {
            const auto parts = random_identity_decomposition(rng, d, eps);
            const SplitResult r = split_covariance(parts, eps);
            const auto* full = std::get_if<FullDecomposition>(&r);
            if (!full) continue;
            ++fulls;
            const double bound = std::sqrt(eps / (1.0 - eps)) + 1e-9;
            for (std::size_t a = 0; a < full->subspaces.size(); ++a)
                for (std::size_t b = a + 1; b < full->subspaces.size(); ++b)
                    for (const auto& u : full->subspaces[a].basis)
                        for (const auto& v : full->subspaces[b].basis) CHECK(std::abs(dot(u, v)) <= bound);
        }
    }
    CHECK(fulls > 50);

    const double c = std::cos(0.3), s = std::sin(0.3);
    const Matrix q{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}};
    std::vector<CovMatrix> parts;
    for (const auto& dg : {std::vector<double>{0.99, 0.0, 0.0}, std::vector<double>{0.01, 0.995, 0.0},
                           std::vector<double>{0.0, 0.005, 1.0}})
        parts.emplace_back(q * Matrix::diagonal(dg) * q.transposed());
    const auto full = std::get<FullDecomposition>(split_covariance(parts, 0.05));
    for (std::size_t a = 0; a < full.subspaces.size(); ++a)
        for (std::size_t b = a + 1; b < full.subspaces.size(); ++b)
            CHECK(std::abs(dot(full.subspaces[a].basis[0], full.subspaces[b].basis[0])) <= 1e-8);
}

TEST_CASE("addsections bounds") {
    const std::vector<double> half(2, 1.0 / std::sqrt(2.0)), one(2, 1.0), zero(2, 0.0);
    const EigenBounds b = addsections_eig_bounds(CovMatrix::identity(2), CovMatrix::identity(2), half, half);
    CHECK(std::abs(b.min_eig - 1.0) <= 1e-12);
    CHECK(std::abs(b.max_eig - 1.0) <= 1e-12);

    const CovMatrix g1(Matrix{{2.0, 0.5}, {0.5, 1.0}});
    const auto ge = eigendecompose(g1);
    const EigenBounds w = addsections_eig_bounds(g1, CovMatrix::identity(2), one, zero);
    CHECK(std::abs(w.min_eig - ge.values[0]) <= 1e-12);
    CHECK(std::abs(w.max_eig - ge.values[1]) <= 1e-12);
    const EigenBounds v = addsections_eig_bounds(CovMatrix::identity(2), g1, zero, one);
    CHECK(std::abs(v.max_eig - ge.values[1]) <= 1e-12);

    const std::vector<double> bad{0.9, 0.9};
    CHECK(code_of([&] { addsections_eig_bounds(g1, g1, bad, bad); }) == ErrorCode::DiagonalConstraintViolated);
}

TEST_CASE("randomized suites report zero violations") {
    CHECK(addsections_suite(3, 200, 1).violations == 0);
    const SuiteReport r = split_suite(2, 500, 0.9 / 9.0, 1);
    CHECK(r.violations == 0);
    CHECK(r.outcomes.count("step3") == 1);
}

}  // TEST_SUITE
