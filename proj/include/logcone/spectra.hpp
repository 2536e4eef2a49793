#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "logcone/linalg.hpp"

namespace logcone {

/// Symmetric positive-semidefinite matrix. Construction enforces exact
/// symmetry (entries that disagree by more than 1e-12 relative are rejected,
/// the rest are averaged); positive-semidefiniteness is checked by the
/// operations that need it.
class CovMatrix {
public:
    CovMatrix() = default;
    explicit CovMatrix(Matrix m);
    static CovMatrix identity(std::size_t d) { return CovMatrix(Matrix::identity(d)); }
    static CovMatrix diagonal(std::span<const double> diag) { return CovMatrix(Matrix::diagonal(diag)); }

    std::size_t dim() const noexcept { return m_.rows(); }
    double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
    const Matrix& matrix() const noexcept { return m_; }
    double trace() const { return m_.trace(); }

    friend CovMatrix operator+(const CovMatrix& a, const CovMatrix& b) {
        return CovMatrix(a.m_ + b.m_);
    }

private:
    Matrix m_;
};

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k pairs with values[k]
    std::vector<double> vector(std::size_t k) const { return vectors.column(k); }
};

// Cyclic Jacobi. Eigenvectors are sign-normalised so that their first
// non-negligible component is positive.
EigenDecomposition eigendecompose(const CovMatrix& a);

// V f(Λ) Vᵀ
CovMatrix spectral_function(const CovMatrix& a, const std::function<double(double)>& f);

void require_psd(const CovMatrix& a, double tol = 1e-10);

/// Outcome of splitting a decomposition of the identity into covariance parts.
struct FullDecomposition {
    struct Subspace {
        std::size_t index;                       // which input matrix
        std::vector<std::vector<double>> basis;  // orthonormal eigenvectors with eigenvalue > 1-eps
    };
    std::vector<Subspace> subspaces;
};

struct MiddleEigen {
    std::vector<std::size_t> subset;  // original indices, ascending order of selection
    double lambda = 0.0;
    std::vector<double> vector;
    int step = 0;  // 1: a single part had a middle eigenvalue; 3: prefix-sum branch
};

using SplitResult = std::variant<FullDecomposition, MiddleEigen>;

/// Either every direction is captured by a part with a near-unit eigenvalue
/// (FullDecomposition), or some sub-sum has an eigenvalue in [eps, 1-eps]
/// (MiddleEigen). Requires 0 < eps < (d+1)^-2 and sum(parts) = Id.
SplitResult split_covariance(std::span<const CovMatrix> parts, double eps);

/// Checks the SplitResult invariants; throws InternalContractViolation.
void verify_split(const SplitResult& result, std::span<const CovMatrix> parts, double eps);

struct EigenBounds {
    double min_eig = 0.0;
    double max_eig = 0.0;
};

/// Extreme eigenvalues of W·G1·W + V·G2·V for diagonal W, V with W² + V² = Id.
EigenBounds addsections_eig_bounds(const CovMatrix& g1, const CovMatrix& g2,
                                   std::span<const double> w_diag,
                                   std::span<const double> v_diag);

}  // namespace logcone
