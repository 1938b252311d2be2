#include "mixroute/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace mixroute {

Matrix Matrix::identity(std::size_t n, double scale) {
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = scale;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) {
            throw std::invalid_argument("Matrix::from_rows: ragged rows");
        }
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

double symmetry_gap(const Matrix& a) {
    if (!a.square()) throw std::invalid_argument("symmetry_gap: matrix not square");
    double gap = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            gap = std::max(gap, std::abs(a(i, j) - a(j, i)));
        }
    }
    return gap;
}

std::optional<Matrix> cholesky(const Matrix& a) {
    if (!a.square()) throw std::invalid_argument("cholesky: matrix not square");
    const std::size_t n = a.rows();
    Matrix l(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (!(s > 0.0)) return std::nullopt;  // not PD (also catches NaN)
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

std::vector<double> forward_substitute(const Matrix& l, const std::vector<double>& b) {
    const std::size_t n = l.rows();
    if (b.size() != n) throw std::invalid_argument("forward_substitute: size mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    return y;
}

double log_det_from_cholesky(const Matrix& l) {
    double s = 0.0;
    for (std::size_t i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
    return 2.0 * s;
}

}  // namespace mixroute
