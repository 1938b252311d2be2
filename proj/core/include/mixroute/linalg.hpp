#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace mixroute {

// Dense row-major matrix, sized for desk-scale feature dimensions.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n, double scale = 1.0);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Max |A(i,j) - A(j,i)| over a square matrix.
double symmetry_gap(const Matrix& a);

// Lower-triangular L with L L^T = A, or nullopt when A is not positive
// definite. Plain inner-product Cholesky; deterministic.
std::optional<Matrix> cholesky(const Matrix& a);

// Solves L y = b for lower-triangular L by forward substitution.
std::vector<double> forward_substitute(const Matrix& l, const std::vector<double>& b);

// 2 * sum(log L(i,i)): log-determinant of A given its Cholesky factor.
double log_det_from_cholesky(const Matrix& l);

}  // namespace mixroute
