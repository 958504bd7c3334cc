#include <algorithm>
#include <cmath>
#include <numeric>

#include "mcar/error.hpp"
#include "mcar/numerics.hpp"

namespace mcar {

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
  return m;
}

SymMatrix SymMatrix::from_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("SymMatrix: matrix is not square");
  const std::size_t d = m.rows();
  double scale = 0.0;
  for (double v : m.data()) {
    if (!std::isfinite(v)) throw InvalidInput("SymMatrix: non-finite entry");
    scale = std::max(scale, std::abs(v));
  }
  SymMatrix s(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-10 * scale) {
        throw InvalidInput("SymMatrix: matrix is not symmetric");
      }
      s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
    }
  }
  return s;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

bool SymMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix to_matrix(const SymMatrix& s) {
  Matrix m(s.dim(), s.dim());
  for (std::size_t j = 0; j < s.dim(); ++j)
    for (std::size_t i = 0; i < s.dim(); ++i) m(i, j) = s(i, j);
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InvalidInput("multiply: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) += a(i, k) * bkj;
    }
  return c;
}

Matrix multiply(const SymMatrix& a, const SymMatrix& b) {
  return multiply(to_matrix(a), to_matrix(b));
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidInput("max_abs_diff: dimension mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    d = std::max(d, std::abs(a.data()[k] - b.data()[k]));
  return d;
}

Eigen jacobi_eigen(const SymMatrix& m) {
  const std::size_t n = m.dim();
  Matrix a = to_matrix(m);
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  constexpr int kMaxSweeps = 100;
  bool polishing = false;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const double sq = a(i, j) * a(i, j);
        total += sq;
        if (i != j) off += sq;
      }
    if (off == 0.0) break;
    if (std::sqrt(off) < 1e-12 * std::sqrt(total)) {
      if (polishing) break;
      polishing = true;
    }

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  Eigen out;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

double default_pinv_tolerance(std::size_t dim) {
  return static_cast<double>(std::max<std::size_t>(dim, 1)) *
         std::numeric_limits<double>::epsilon();
}

InverseResult invert_or_pseudo(const SymMatrix& m, double tol) {
  if (!m.all_finite()) throw InvalidInput("invert_or_pseudo: non-finite entries");
  const std::size_t n = m.dim();
  if (tol < 0.0) tol = default_pinv_tolerance(n);

  InverseResult result;
  result.matrix = SymMatrix(n);
  if (n == 0) return result;

  const Eigen eig = jacobi_eigen(m);
  double smax = 0.0;
  double smin = std::numeric_limits<double>::infinity();
  for (double lambda : eig.values) {
    smax = std::max(smax, std::abs(lambda));
    smin = std::min(smin, std::abs(lambda));
  }

  const double threshold = tol * smax;
  result.used_pseudoinverse = !(smax > 0.0 && smin > threshold);

  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < n; ++k)
    if (smax > 0.0 && std::abs(eig.values[k]) > threshold) kept.push_back(k);
  result.rank = kept.size();

  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      double s = 0.0;
      for (std::size_t k : kept)
        s += eig.vectors(i, k) * eig.vectors(j, k) / eig.values[k];
      result.matrix.set(i, j, s);
    }
  }
  return result;
}

double quadratic_form(const SymMatrix& a, std::span<const double> v) {
  if (v.size() != a.dim()) throw InvalidInput("quadratic_form: dimension mismatch");
  double total = 0.0;
  for (std::size_t j = 0; j < a.dim(); ++j) {
    double row = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) row += a(i, j) * v[i];
    total += row * v[j];
  }
  return total;
}

Cholesky::Cholesky(const SymMatrix& m) : lower_(m.dim(), m.dim()) {
  const std::size_t n = m.dim();
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= lower_(j, k) * lower_(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return;
    const double ljj = std::sqrt(d);
    lower_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower_(i, k) * lower_(j, k);
      lower_(i, j) = s / ljj;
    }
  }
  ok_ = true;
}

double Cholesky::log_det() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) s += std::log(lower_(i, i));
  return 2.0 * s;
}

void Cholesky::solve_in_place(std::span<double> b) const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * b[k];
    b[i] = s / lower_(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= lower_(k, i) * b[k];
    b[i] = s / lower_(i, i);
  }
}

SymMatrix Cholesky::inverse() const {
  const std::size_t n = dim();
  SymMatrix inv(n);
  std::vector<double> e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    solve_in_place(e);
    for (std::size_t i = 0; i <= j; ++i) inv.set(i, j, e[i]);
  }
  return inv;
}

}  // namespace mcar
