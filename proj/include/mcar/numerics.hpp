#pragma once

// Dense symmetric linear algebra and the special functions used by the tests.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace mcar {

/// Dense column-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }

  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Symmetric matrix. Both triangles are stored; set() keeps them equal.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim, double fill = 0.0) : dim_(dim), data_(dim * dim, fill) {}

  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> diag);

  /// Throws InvalidInput unless `m` is square, finite and symmetric within 1e-10 relative.
  static SymMatrix from_matrix(const Matrix& m);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * dim_ + i]; }
  void set(std::size_t i, std::size_t j, double v) {
    data_[j * dim_ + i] = v;
    data_[i * dim_ + j] = v;
  }

  double trace() const;
  bool all_finite() const;
  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const SymMatrix& a, const SymMatrix& b);
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix to_matrix(const SymMatrix& s);
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Eigenvalues in ascending order; column k of `vectors` pairs with values[k].
struct Eigen {
  std::vector<double> values;
  Matrix vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi. Converges when the off-diagonal Frobenius norm drops below
/// 1e-12 of the total; one further sweep then polishes the small eigenvalues.
Eigen jacobi_eigen(const SymMatrix& m);

struct InverseResult {
  SymMatrix matrix;
  std::size_t rank = 0;
  bool used_pseudoinverse = false;
};

/// Default relative singular-value cutoff: dim * machine epsilon.
double default_pinv_tolerance(std::size_t dim);

/// Exact inverse when sigma_min > tol * sigma_max, else the Moore-Penrose
/// pseudoinverse with singular values below tol * sigma_max dropped.
/// A negative `tol` selects default_pinv_tolerance(dim).
InverseResult invert_or_pseudo(const SymMatrix& m, double tol = -1.0);

/// Quadratic form v' A v.
double quadratic_form(const SymMatrix& a, std::span<const double> v);

/// Lower Cholesky factor of an SPD matrix. ok() is false when a pivot is not positive.
class Cholesky {
 public:
  explicit Cholesky(const SymMatrix& m);

  bool ok() const noexcept { return ok_; }
  std::size_t dim() const noexcept { return lower_.rows(); }
  const Matrix& lower() const noexcept { return lower_; }
  double log_det() const;
  /// Solves A x = b in place.
  void solve_in_place(std::span<double> b) const;
  SymMatrix inverse() const;

 private:
  Matrix lower_;
  bool ok_ = false;
};

// Special functions.

/// log Gamma(x) for x > 0.
double log_gamma(double x);
/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly.
double gamma_q(double a, double x);
/// x with P(a, x) = p, to 1e-12 relative in x.
double gamma_p_inverse(double a, double p);

/// P(chi2_df > x).
double chisq_sf(double x, int df);
/// P(chi2_df <= x).
double chisq_cdf(double x, int df);

/// Unbiased sample covariance, denominator n - 1. Two-pass.
double sample_cov(std::span<const double> a, std::span<const double> b);
double mean(std::span<const double> a);

/// Average ranks (1-based) with ties sharing the mean rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Median with the average of the two middle order statistics for even sizes.
double median(std::span<const double> values);

}  // namespace mcar
