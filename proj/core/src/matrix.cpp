#include "prada/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace prada {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix dimension mismatch");
    Matrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const double v = (*this)(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < rhs.cols_; ++j) out(i, j) += v * rhs(k, j);
        }
    }
    return out;
}

Matrix Matrix::power(int n) const {
    if (rows_ != cols_) throw std::invalid_argument("power of non-square matrix");
    if (n < 0) throw std::invalid_argument("negative matrix power");
    Matrix result = identity(rows_);
    Matrix base = *this;
    while (n > 0) {
        if (n & 1) result = result * base;
        base = base * base;
        n >>= 1;
    }
    return result;
}

std::vector<double> Matrix::left_apply(const std::vector<double>& v) const {
    if (static_cast<int>(v.size()) != rows_) throw std::invalid_argument("vector dimension mismatch");
    std::vector<double> out(cols_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        const double vi = v[i];
        if (vi == 0.0) continue;
        for (int j = 0; j < cols_; ++j) out[j] += vi * (*this)(i, j);
    }
    return out;
}

bool Matrix::is_row_stochastic(double tol) const {
    for (int i = 0; i < rows_; ++i) {
        double sum = 0.0;
        for (int j = 0; j < cols_; ++j) {
            const double v = (*this)(i, j);
            if (v < -tol || v > 1.0 + tol) return false;
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol) return false;
    }
    return true;
}

std::optional<std::vector<double>> stationary_distribution(const Matrix& p, double pivot_tol) {
    const int n = p.rows();
    if (n == 0 || p.cols() != n) throw std::invalid_argument("stationary of non-square matrix");

    // Solve x (P - I) = 0 with sum(x) = 1: columns of (P^T - I), last row
    // replaced by the normalization constraint.
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (int i = 0; i < n - 1; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = p(j, i) - (i == j ? 1.0 : 0.0);
    }
    for (int j = 0; j < n; ++j) a[n - 1][j] = 1.0;
    a[n - 1][n] = 1.0;

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < pivot_tol) return std::nullopt;  // reducible
        std::swap(a[col], a[pivot]);
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a[r][col] / a[col][col];
            if (factor == 0.0) continue;
            for (int c = col; c <= n; ++c) a[r][c] -= factor * a[col][c];
        }
    }

    std::vector<double> x(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        x[i] = a[i][n] / a[i][i];
        if (x[i] < 0.0 && x[i] > -1e-12) x[i] = 0.0;
        if (x[i] < 0.0) return std::nullopt;
        sum += x[i];
    }
    for (double& v : x) v /= sum;
    return x;
}

}  // namespace prada
