#include "logcone/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "logcone/error.hpp"

namespace logcone {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorCode::BadParameters, "matrix entry count does not match shape");
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw Error(ErrorCode::BadParameters, "ragged matrix literal");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

std::vector<double> Matrix::row(std::size_t r) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double Matrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

bool Matrix::is_diagonal(double tol) const {
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (r != c && std::abs((*this)(r, c)) > tol) return false;
    return true;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shapes");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw Error(ErrorCode::DimensionMismatch, "matrix sum shapes");
    Matrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    return a + (-1.0) * b;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix out = a;
    for (double& v : out.data_) v *= s;
    return out;
}

std::vector<double> apply(const Matrix& m, std::span<const double> x) {
    if (m.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector shapes");
    std::vector<double> y(m.rows(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) y[r] += m(r, c) * x[c];
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

namespace {

struct LuResult {
    Matrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;
};

LuResult lu_decompose(const Matrix& m) {
    if (!m.square()) throw Error(ErrorCode::DimensionMismatch, "LU needs a square matrix");
    const std::size_t n = m.rows();
    LuResult res{m, std::vector<std::size_t>(n), 1};
    std::iota(res.perm.begin(), res.perm.end(), 0);
    Matrix& a = res.lu;
    const double scale = std::max(m.max_abs(), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(a(r, k)) > std::abs(a(piv, k))) piv = r;
        if (std::abs(a(piv, k)) <= 1e-14 * scale) {
            throw Error(ErrorCode::SingularMap, "matrix is numerically singular");
        }
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
            std::swap(res.perm[k], res.perm[piv]);
            res.sign = -res.sign;
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            a(r, k) /= a(k, k);
            for (std::size_t c = k + 1; c < n; ++c) a(r, c) -= a(r, k) * a(k, c);
        }
    }
    return res;
}

}  // namespace

double determinant(const Matrix& m) {
    if (!m.square()) throw Error(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
    if (m.rows() == 0) return 1.0;
    try {
        const auto res = lu_decompose(m);
        double det = res.sign;
        for (std::size_t i = 0; i < m.rows(); ++i) det *= res.lu(i, i);
        return det;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::SingularMap) return 0.0;
        throw;
    }
}

Matrix inverse(const Matrix& m) {
    const auto res = lu_decompose(m);
    const std::size_t n = m.rows();
    Matrix inv(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = res.perm[i] == col ? 1.0 : 0.0;
            for (std::size_t j = 0; j < i; ++j) s -= res.lu(i, j) * x[j];
            x[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= res.lu(i, j) * x[j];
            x[i] = s / res.lu(i, i);
        }
        for (std::size_t i = 0; i < n; ++i) inv(i, col) = x[i];
    }
    return inv;
}

}  // namespace logcone
