#pragma once

#include <optional>
#include <vector>

namespace prada {

/// Small dense row-major matrix of doubles. Sized for the chains in this
/// project (at most a few hundred rows), not for general linear algebra.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return a_; }

    Matrix operator*(const Matrix& rhs) const;
    Matrix power(int n) const;

    /// v^T * M for a row vector v.
    std::vector<double> left_apply(const std::vector<double>& v) const;

    bool is_row_stochastic(double tol) const;

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

/// Stationary distribution of a row-stochastic matrix, via Gaussian
/// elimination on (P^T - I) with the normalization row appended.
/// Returns nullopt when the chain is reducible (singular system).
std::optional<std::vector<double>> stationary_distribution(const Matrix& p, double pivot_tol = 1e-12);

}  // namespace prada
