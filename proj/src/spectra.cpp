#include "logcone/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "logcone/error.hpp"

namespace logcone {

CovMatrix::CovMatrix(Matrix m) : m_(std::move(m)) {
    if (!m_.square()) throw Error(ErrorCode::BadParameters, "covariance matrix must be square");
    const double scale = std::max(m_.max_abs(), 1.0);
    for (std::size_t r = 0; r < m_.rows(); ++r) {
        for (std::size_t c = r + 1; c < m_.cols(); ++c) {
            const double a = m_(r, c);
            const double b = m_(c, r);
            if (!std::isfinite(a) || !std::isfinite(b) || std::abs(a - b) > 1e-12 * scale) {
                throw Error(ErrorCode::BadParameters, "covariance matrix is not symmetric");
            }
            const double avg = 0.5 * (a + b);
            m_(r, c) = avg;
            m_(c, r) = avg;
        }
        if (!std::isfinite(m_(r, r))) throw Error(ErrorCode::BadParameters, "non-finite entry");
    }
}

EigenDecomposition eigendecompose(const CovMatrix& input) {
    const std::size_t n = input.dim();
    Matrix a = input.matrix();
    Matrix v = Matrix::identity(n);

    double frob = 0.0;
    for (double x : a.entries()) frob += x * x;
    frob = std::sqrt(frob);
    const double target = 1e-13 * frob;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
                if (p != q) s += a(p, q) * a(p, q);
        return std::sqrt(s);
    };

    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        const double off = off_norm();
        if (off <= target || off == 0.0) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double x = a(k, p), y = a(k, q);
                    a(k, p) = c * x - s * y;
                    a(k, q) = s * x + c * y;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double x = a(p, k), y = a(q, k);
                    a(p, k) = c * x - s * y;
                    a(q, k) = s * x + c * y;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double x = v(k, p), y = v(k, q);
                    v(k, p) = c * x - s * y;
                    v(k, q) = s * x + c * y;
                }
            }
        }
    }
    if (sweep == kMaxSweeps) {
        throw Error(ErrorCode::NoConvergence, "Jacobi iteration did not converge");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    EigenDecomposition out{std::vector<double>(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.values[k] = a(src, src);
        double sign = 1.0;
        for (std::size_t r = 0; r < n; ++r) {
            if (std::abs(v(r, src)) > 1e-12) {
                sign = v(r, src) < 0 ? -1.0 : 1.0;
                break;
            }
        }
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = sign * v(r, src);
    }
    return out;
}

CovMatrix spectral_function(const CovMatrix& a, const std::function<double(double)>& f) {
    const auto eig = eigendecompose(a);
    const std::size_t n = a.dim();
    Matrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double fk = f(eig.values[k]);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                out(r, c) += fk * eig.vectors(r, k) * eig.vectors(c, k);
    }
    // Rounding can leave a 1-ulp asymmetry; mirror the upper triangle.
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r + 1; c < n; ++c) out(c, r) = out(r, c);
    return CovMatrix(std::move(out));
}

void require_psd(const CovMatrix& a, double tol) {
    const auto eig = eigendecompose(a);
    if (!eig.values.empty() && eig.values.front() < -tol) {
        std::ostringstream msg;
        msg << "smallest eigenvalue " << eig.values.front() << " < -" << tol;
        throw Error(ErrorCode::NotPSD, msg.str());
    }
}

namespace {

bool is_large(double lambda, double eps) { return lambda > 1.0 - eps - 1e-12; }

Matrix sum_of(std::span<const CovMatrix> parts, std::span<const std::size_t> subset) {
    Matrix s(parts.front().dim(), parts.front().dim());
    for (std::size_t i : subset) s = s + parts[i].matrix();
    return s;
}

[[noreturn]] void contract_violation(const std::string& what) {
    throw Error(ErrorCode::InternalContractViolation, what);
}

}  // namespace

SplitResult split_covariance(std::span<const CovMatrix> parts, double eps) {
    if (parts.empty()) throw Error(ErrorCode::BadParameters, "no covariance parts given");
    const std::size_t d = parts.front().dim();
    if (d == 0) throw Error(ErrorCode::BadParameters, "zero-dimensional covariance");
    for (const auto& p : parts)
        if (p.dim() != d) throw Error(ErrorCode::DimensionMismatch, "parts differ in dimension");

    const double eps_max = 1.0 / static_cast<double>((d + 1) * (d + 1));
    if (!(eps > 0.0 && eps < eps_max)) {
        std::ostringstream msg;
        msg << "eps=" << eps << " outside (0, " << eps_max << ")";
        throw Error(ErrorCode::EpsOutOfRange, msg.str());
    }

    Matrix total(d, d);
    for (const auto& p : parts) total = total + p.matrix();
    if ((total - Matrix::identity(d)).max_abs() > 1e-8) {
        throw Error(ErrorCode::NotIdentitySum, "parts do not sum to the identity");
    }

    std::vector<EigenDecomposition> eigs;
    eigs.reserve(parts.size());
    for (const auto& p : parts) {
        eigs.push_back(eigendecompose(p));
        if (eigs.back().values.front() < -1e-10) {
            throw Error(ErrorCode::NotPSD, "a part has a negative eigenvalue");
        }
    }

    SplitResult result;

    // Step 1: some single part already has a middle eigenvalue.
    for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            const double lambda = eigs[i].values[k];
            if (lambda > eps && !is_large(lambda, eps)) {
                result = MiddleEigen{{i}, lambda, eigs[i].vector(k), 1};
                verify_split(result, parts, eps);
                return result;
            }
        }
    }

    // Step 2: count near-unit eigenvalues.
    std::vector<std::size_t> large_count(parts.size(), 0);
    std::size_t total_large = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        for (double lambda : eigs[i].values)
            if (is_large(lambda, eps)) ++large_count[i];
        total_large += large_count[i];
    }
    if (total_large > d) contract_violation("more near-unit eigenvalues than the dimension");
    if (total_large == d) {
        FullDecomposition full;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (large_count[i] == 0) continue;
            FullDecomposition::Subspace sub{i, {}};
            for (std::size_t k = 0; k < d; ++k)
                if (is_large(eigs[i].values[k], eps)) sub.basis.push_back(eigs[i].vector(k));
            full.subspaces.push_back(std::move(sub));
        }
        result = std::move(full);
        verify_split(result, parts, eps);
        return result;
    }

    // Step 3: prefix sums of traces over the parts with no large eigenvalue.
    std::vector<std::size_t> small_parts;
    for (std::size_t i = 0; i < parts.size(); ++i)
        if (large_count[i] == 0) small_parts.push_back(i);

    const double threshold = static_cast<double>(d) * eps;
    double prefix = 0.0;
    std::size_t m0 = 0;
    for (std::size_t m = 0; m < small_parts.size(); ++m) {
        prefix += parts[small_parts[m]].trace();
        if (prefix >= threshold) {
            m0 = m + 1;
            break;
        }
    }
    if (m0 == 0) contract_violation("trace prefix sums never reach d*eps");

    const std::vector<std::size_t> subset(small_parts.begin(),
                                          small_parts.begin() + static_cast<std::ptrdiff_t>(m0));
    const auto eig = eigendecompose(CovMatrix(sum_of(parts, subset)));
    result = MiddleEigen{subset, eig.values.back(), eig.vector(d - 1), 3};
    verify_split(result, parts, eps);
    return result;
}

void verify_split(const SplitResult& result, std::span<const CovMatrix> parts, double eps) {
    const std::size_t d = parts.front().dim();
    if (const auto* full = std::get_if<FullDecomposition>(&result)) {
        std::size_t total = 0;
        for (const auto& sub : full->subspaces) {
            if (sub.index >= parts.size()) contract_violation("subspace index out of range");
            total += sub.basis.size();
            for (std::size_t a = 0; a < sub.basis.size(); ++a) {
                const auto& v = sub.basis[a];
                if (std::abs(norm2(v) - 1.0) > 1e-9) contract_violation("basis vector not unit");
                for (std::size_t b = a + 1; b < sub.basis.size(); ++b)
                    if (std::abs(dot(v, sub.basis[b])) > 1e-9)
                        contract_violation("basis not orthonormal");
                const auto av = logcone::apply(parts[sub.index].matrix(), v);
                if (dot(av, v) <= 1.0 - eps - 1e-9)
                    contract_violation("basis vector Rayleigh quotient below 1-eps");
            }
        }
        if (total != d) contract_violation("subspace dimensions do not sum to d");
        return;
    }

    const auto& mid = std::get<MiddleEigen>(result);
    if (mid.subset.empty()) contract_violation("empty subset");
    std::vector<std::size_t> sorted = mid.subset;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() ||
        sorted.back() >= parts.size())
        contract_violation("subset indices invalid");
    const double lambda = mid.lambda;
    if (lambda < eps - 1e-9 || lambda > 1.0 - eps + 1e-9)
        contract_violation("middle eigenvalue outside [eps, 1-eps]");
    if (!(lambda > eps / 2 && lambda < 1.0 - eps / 2))
        contract_violation("middle eigenvalue outside (eps/2, 1-eps/2)");
    if (mid.vector.size() != d || std::abs(norm2(mid.vector) - 1.0) > 1e-9)
        contract_violation("eigenvector not unit");
    const auto sv = logcone::apply(sum_of(parts, mid.subset), mid.vector);
    double residual = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const double r = sv[k] - lambda * mid.vector[k];
        residual += r * r;
    }
    if (std::sqrt(residual) > 1e-8) contract_violation("eigenvector residual too large");
}

EigenBounds addsections_eig_bounds(const CovMatrix& g1, const CovMatrix& g2,
                                   std::span<const double> w_diag,
                                   std::span<const double> v_diag) {
    const std::size_t d = g1.dim();
    if (g2.dim() != d || w_diag.size() != d || v_diag.size() != d)
        throw Error(ErrorCode::DimensionMismatch, "addsections operands differ in dimension");
    for (std::size_t k = 0; k < d; ++k) {
        if (std::abs(w_diag[k] * w_diag[k] + v_diag[k] * v_diag[k] - 1.0) > 1e-10) {
            throw Error(ErrorCode::DiagonalConstraintViolated, "W^2 + V^2 != Id");
        }
    }
    require_psd(g1);
    require_psd(g2);
    const Matrix w = Matrix::diagonal(w_diag);
    const Matrix v = Matrix::diagonal(v_diag);
    const Matrix mixed = w * g1.matrix() * w + v * g2.matrix() * v;
    const auto eig = eigendecompose(CovMatrix(mixed));
    return {eig.values.front(), eig.values.back()};
}

}  // namespace logcone
