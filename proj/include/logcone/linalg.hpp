#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace logcone {

// Small dense row-major matrix. Sizes here never exceed a few dozen.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<double>& entries() const noexcept { return data_; }
    std::vector<double> row(std::size_t r) const;
    std::vector<double> column(std::size_t c) const;

    Matrix transposed() const;
    double max_abs() const;
    double trace() const;
    bool is_diagonal(double tol) const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend Matrix operator*(double s, const Matrix& a);
    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

std::vector<double> apply(const Matrix& m, std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

// LU with partial pivoting. Throws SingularMap when a pivot vanishes.
double determinant(const Matrix& m);
Matrix inverse(const Matrix& m);

}  // namespace logcone
