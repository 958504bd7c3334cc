#include <algorithm>
#include <cmath>
#include <limits>

#include "mcar/data.hpp"
#include "mcar/error.hpp"

namespace mcar {

namespace {
constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
}

IncompleteMatrix::IncompleteMatrix(std::vector<std::string> names, Matrix values,
                                   std::vector<std::uint8_t> observed)
    : names_(std::move(names)), values_(std::move(values)), observed_(std::move(observed)) {
  if (names_.size() != values_.cols())
    throw InvalidInput("IncompleteMatrix: name count does not match column count");
  if (observed_.size() != values_.rows() * values_.cols())
    throw InvalidInput("IncompleteMatrix: mask size does not match table size");
  for (std::size_t j = 0; j < cols(); ++j)
    for (std::size_t i = 0; i < rows(); ++i) {
      if (!observed_[j * rows() + i]) {
        values_(i, j) = kMissing;
      } else if (!std::isfinite(values_(i, j))) {
        throw InvalidInput("IncompleteMatrix: observed cell is not finite");
      }
    }
}

IncompleteMatrix IncompleteMatrix::complete(Matrix values, std::vector<std::string> names) {
  if (names.empty())
    for (std::size_t j = 0; j < values.cols(); ++j) names.push_back("V" + std::to_string(j + 1));
  std::vector<std::uint8_t> mask(values.rows() * values.cols(), 1);
  return IncompleteMatrix(std::move(names), std::move(values), std::move(mask));
}

void IncompleteMatrix::set_missing(std::size_t i, std::size_t j) {
  observed_[j * rows() + i] = 0;
  values_(i, j) = kMissing;
}

void IncompleteMatrix::set_value(std::size_t i, std::size_t j, double v) {
  if (!std::isfinite(v)) throw InvalidInput("IncompleteMatrix: value is not finite");
  observed_[j * rows() + i] = 1;
  values_(i, j) = v;
}

std::size_t IncompleteMatrix::missing_count(std::size_t j) const {
  const auto begin = observed_.begin() + static_cast<std::ptrdiff_t>(j * rows());
  return static_cast<std::size_t>(
      std::count(begin, begin + static_cast<std::ptrdiff_t>(rows()), std::uint8_t{0}));
}

bool IncompleteMatrix::row_has_observed(std::size_t i) const {
  for (std::size_t j = 0; j < cols(); ++j)
    if (observed(i, j)) return true;
  return false;
}

std::size_t IncompleteMatrix::fully_missing_rows() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < rows(); ++i)
    if (!row_has_observed(i)) ++count;
  return count;
}

bool operator==(const IncompleteMatrix& a, const IncompleteMatrix& b) {
  if (a.names_ != b.names_ || a.observed_ != b.observed_) return false;
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (a.observed(i, j) && a.value(i, j) != b.value(i, j)) return false;
  return true;
}

ColumnRoles classify_columns(const IncompleteMatrix& m, std::span<const std::size_t> force_y) {
  for (std::size_t j : force_y)
    if (j >= m.cols()) throw InvalidInput("classify_columns: forced column out of range");
  ColumnRoles roles;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const bool forced = std::find(force_y.begin(), force_y.end(), j) != force_y.end();
    if (forced || m.missing_count(j) > 0) roles.y.push_back(j);
    else roles.x.push_back(j);
  }
  return roles;
}

double IndicatorMatrix::observed_count(std::size_t v) const {
  double s = 0.0;
  for (double x : r.col(v)) s += x;
  return s;
}

IndicatorMatrix indicators(const IncompleteMatrix& m, const ColumnRoles& roles) {
  IndicatorMatrix out{Matrix(m.rows(), roles.q())};
  for (std::size_t v = 0; v < roles.q(); ++v)
    for (std::size_t i = 0; i < m.rows(); ++i) out.r(i, v) = m.observed(i, roles.y[v]) ? 1.0 : 0.0;
  return out;
}

Matrix zero_fill(const IncompleteMatrix& m, const ColumnRoles& roles) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = m.observed(i, j) ? m.value(i, j) : 0.0;
  // X columns must be complete.
  for (std::size_t j : roles.x)
    if (m.missing_count(j) > 0) throw InvalidInput("zero_fill: X column has missing cells");
  return out;
}

}  // namespace mcar
