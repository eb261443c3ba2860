#pragma once

// Small dense matrices and a cyclic Jacobi eigensolver, enough to standardize
// a degree-count vector by Sigma_0^{-1/2}.

#include <algorithm>
#include <cmath>
#include <vector>

#include "error.hpp"

namespace irgdeg {

class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(const std::vector<double>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    require(x.cols_ == y.rows_, "matrix product: shape mismatch");
    Matrix z(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k)
        for (std::size_t j = 0; j < y.cols_; ++j) z(i, j) += x(i, k) * y(k, j);
    return z;
  }

  std::vector<double> apply(const std::vector<double>& v) const {
    require(v.size() == cols_, "matrix-vector product: shape mismatch");
    std::vector<double> out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  /// max |a_ij|
  double max_abs() const {
    double m = 0.0;
    for (double x : a_) m = std::max(m, std::abs(x));
    return m;
  }

  bool is_symmetric(double tol = 0.0) const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    return true;
  }

  friend Matrix operator-(Matrix x, const Matrix& y) {
    require(x.rows_ == y.rows_ && x.cols_ == y.cols_, "matrix difference: shape mismatch");
    for (std::size_t k = 0; k < x.a_.size(); ++k) x.a_[k] -= y.a_[k];
    return x;
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

struct EigenDecomposition {
  std::vector<double> values;
  Matrix vectors; // columns are eigenvectors
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below `tol`.
inline EigenDecomposition jacobi_eigen(Matrix a, double tol = 1e-13, int max_sweeps = 100) {
  require(a.is_symmetric(), "jacobi_eigen: matrix must be square and symmetric");
  const std::size_t n = a.rows();
  Matrix v = Matrix::identity(n);
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  int sweep = 0;
  for (; sweep < max_sweeps && off_norm() >= tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  EigenDecomposition out{std::vector<double>(n), std::move(v), sweep};
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
  return out;
}

/// S^{-1/2} for symmetric positive-definite S (smallest eigenvalue must exceed 1e-12).
inline Matrix inv_sqrt(const Matrix& s) {
  require(s.rows() == s.cols() && s.rows() > 0, "inv_sqrt: matrix must be square and non-empty");
  require(s.is_symmetric(1e-12 * std::max(1.0, s.max_abs())), "inv_sqrt: matrix is not symmetric");
  Matrix sym = s;
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = i + 1; j < s.cols(); ++j) sym(i, j) = sym(j, i) = 0.5 * (s(i, j) + s(j, i));
  const auto eig = jacobi_eigen(sym);
  const double smallest = *std::min_element(eig.values.begin(), eig.values.end());
  require(smallest > 1e-12, "inv_sqrt: matrix is not positive definite (smallest eigenvalue " +
                                std::to_string(smallest) + ")");
  std::vector<double> scale(eig.values.size());
  std::transform(eig.values.begin(), eig.values.end(), scale.begin(), [](double l) { return 1.0 / std::sqrt(l); });
  return eig.vectors * Matrix::diagonal(scale) * eig.vectors.transpose();
}

} // namespace irgdeg
