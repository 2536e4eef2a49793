#include "logcone/suites.hpp"

#include <chrono>
#include <cmath>

#include "logcone/error.hpp"

namespace logcone {

namespace {

std::vector<double> gaussian_vector(Rng& rng, std::size_t d) {
    std::normal_distribution<double> n01;
    std::vector<double> v(d);
    for (auto& x : v) x = n01(rng);
    return v;
}

Matrix outer(const std::vector<double>& u, double w) {
    const std::size_t d = u.size();
    Matrix m(d, d, 0.0);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) m(r, c) = w * u[r] * u[c];
    return m;
}

// Random weights over k parts summing to 1: nearly even (every weight below
// eps, when k allows it), concentrated on one part up to a remainder near
// eps, or exponential spacings.
std::vector<double> part_weights(Rng& rng, std::size_t k, double eps) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(k, 0.0);
    const double style = u01(rng);
    if (static_cast<double>(k) * eps >= 1.1 && style < 0.3) {
        double total = 0.0;
        for (auto& x : w) total += x = 1.0 + 0.05 * u01(rng);
        for (auto& x : w) x /= total;
        return w;
    }
    if (style < 0.65) {
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        const double rest = eps * (u01(rng) < 0.5 ? 0.5 * u01(rng) : 2.0 * u01(rng));
        const std::size_t dom = pick(rng);
        std::vector<double> spread(k);
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            if (i != dom) total += spread[i] = expo(rng);
        for (std::size_t i = 0; i < k; ++i) w[i] = i == dom ? 1.0 - rest : (total > 0 ? rest * spread[i] / total : 0.0);
        if (k == 1) w[0] = 1.0;
        return w;
    }
    double total = 0.0;
    for (auto& x : w) total += x = expo(rng);
    for (auto& x : w) x /= total;
    return w;
}

}  // namespace

Matrix random_orthogonal(Rng& rng, std::size_t d) {
    Matrix q(d, d, 0.0);
    std::vector<std::vector<double>> cols;
    while (cols.size() < d) {
        auto v = gaussian_vector(rng, d);
        for (const auto& c : cols) {
            const double p = dot(v, c);
            for (std::size_t i = 0; i < d; ++i) v[i] -= p * c[i];
        }
        const double n = norm2(v);
        if (n < 1e-6) continue;
        for (auto& x : v) x /= n;
        cols.push_back(std::move(v));
    }
    for (std::size_t c = 0; c < d; ++c)
        for (std::size_t r = 0; r < d; ++r) q(r, c) = cols[c][r];
    return q;
}

CovMatrix random_spd(Rng& rng, std::size_t d, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> lambda(d);
    for (auto& x : lambda) x = u(rng);
    const Matrix q = random_orthogonal(rng, d);
    return CovMatrix(q * Matrix::diagonal(lambda) * q.transposed());
}

std::vector<CovMatrix> random_identity_decomposition(Rng& rng, std::size_t d, double eps) {
    std::uniform_int_distribution<std::size_t> count(2, 20);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const std::size_t k = count(rng);
    std::vector<Matrix> parts(k, Matrix(d, d, 0.0));

    if (u01(rng) < 0.6) {
        const Matrix q = random_orthogonal(rng, d);
        for (std::size_t j = 0; j < d; ++j) {
            const auto w = part_weights(rng, k, eps);
            const auto col = q.column(j);
            for (std::size_t i = 0; i < k; ++i)
                if (w[i] > 0.0) parts[i] = parts[i] + outer(col, w[i]);
        }
    } else {
        // m rank-1 projectors u uᵀ, whitened by S^{-1/2} with S = Σ u uᵀ.
        const std::size_t m = d + std::uniform_int_distribution<std::size_t>(0, 2 * d + 2)(rng);
        std::vector<std::vector<double>> us;
        Matrix s(d, d, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            auto v = gaussian_vector(rng, d);
            const double n = norm2(v);
            for (auto& x : v) x /= n;
            s = s + outer(v, 1.0);
            us.push_back(std::move(v));
        }
        const CovMatrix inv_sqrt = spectral_function(CovMatrix(s), [](double x) { return 1.0 / std::sqrt(x); });
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        for (const auto& v : us) {
            const auto wv = logcone::apply(inv_sqrt.matrix(), v);
            const std::size_t i = pick(rng);
            parts[i] = parts[i] + outer(wv, 1.0);
        }
    }
    std::vector<CovMatrix> out;
    out.reserve(k);
    for (auto& p : parts) out.emplace_back(std::move(p));
    return out;
}

SuiteReport addsections_suite(std::size_t d, std::size_t trials, std::uint64_t seed, double lo, double hi) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    SuiteReport rep;
    for (std::size_t t = 0; t < trials; ++t) {
        const CovMatrix g1 = random_spd(rng, d, lo, hi), g2 = random_spd(rng, d, lo, hi);
        std::vector<double> w(d), v(d);
        for (std::size_t i = 0; i < d; ++i) {
            w[i] = u01(rng);
            v[i] = std::sqrt(1.0 - w[i] * w[i]);
        }
        const EigenBounds b = addsections_eig_bounds(g1, g2, w, v);
        ++rep.trials;
        if (b.min_eig < lo - 1e-9 || b.max_eig > hi + 1e-9) {
            if (rep.violations++ == 0)
                rep.first_failure = "trial " + std::to_string(t) + ": [" + std::to_string(b.min_eig) +
                                    ", " + std::to_string(b.max_eig) + "]";
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

SuiteReport split_suite(std::size_t d, std::size_t trials, double eps, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(seed);
    SuiteReport rep;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto parts = random_identity_decomposition(rng, d, eps);
        ++rep.trials;
        try {
            const SplitResult r = split_covariance(parts, eps);
            verify_split(r, parts, eps);
            if (std::holds_alternative<FullDecomposition>(r)) {
                ++rep.outcomes["full"];
            } else {
                ++rep.outcomes["step" + std::to_string(std::get<MiddleEigen>(r).step)];
            }
        } catch (const Error& e) {
            if (rep.violations++ == 0) rep.first_failure = "trial " + std::to_string(t) + ": " + e.what();
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace logcone
