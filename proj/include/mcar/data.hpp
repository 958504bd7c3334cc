#pragma once

// Incomplete samples: values, observation mask, column roles and CSV I/O.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mcar/numerics.hpp"

namespace mcar {

/// n x d table of reals with an observation mask. Missing cells hold NaN.
class IncompleteMatrix {
 public:
  IncompleteMatrix() = default;

  /// `observed` is column-major, n*d entries, nonzero = observed.
  IncompleteMatrix(std::vector<std::string> names, Matrix values, std::vector<std::uint8_t> observed);

  /// A fully observed table. Empty `names` yields V1..Vd.
  static IncompleteMatrix complete(Matrix values, std::vector<std::string> names = {});

  std::size_t rows() const noexcept { return values_.rows(); }
  std::size_t cols() const noexcept { return values_.cols(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  bool observed(std::size_t i, std::size_t j) const { return observed_[j * rows() + i] != 0; }
  double value(std::size_t i, std::size_t j) const { return values_(i, j); }
  std::span<const double> column(std::size_t j) const { return values_.col(j); }
  const Matrix& values() const noexcept { return values_; }

  void set_missing(std::size_t i, std::size_t j);
  void set_value(std::size_t i, std::size_t j, double v);

  std::size_t missing_count(std::size_t j) const;
  bool row_has_observed(std::size_t i) const;
  std::size_t fully_missing_rows() const;

  friend bool operator==(const IncompleteMatrix& a, const IncompleteMatrix& b);

 private:
  std::vector<std::string> names_;
  Matrix values_;
  std::vector<std::uint8_t> observed_;
};

/// Partition of column indices into complete (X) and incomplete (Y) columns.
struct ColumnRoles {
  std::vector<std::size_t> x;
  std::vector<std::size_t> y;

  std::size_t p() const noexcept { return x.size(); }
  std::size_t q() const noexcept { return y.size(); }
};

/// Columns without a realized hole go to X, the rest to Y. Indices listed in
/// `force_y` go to Y regardless.
ColumnRoles classify_columns(const IncompleteMatrix& m, std::span<const std::size_t> force_y = {});

/// n x q response indicators; column v belongs to roles.y[v].
struct IndicatorMatrix {
  Matrix r;

  std::span<const double> column(std::size_t v) const { return r.col(v); }
  double observed_count(std::size_t v) const;
};

IndicatorMatrix indicators(const IncompleteMatrix& m, const ColumnRoles& roles);

/// Same shape and column order as `m`; missing cells become 0.
Matrix zero_fill(const IncompleteMatrix& m, const ColumnRoles& roles);

struct CsvOptions {
  std::string na_marker = "NA";
};

IncompleteMatrix read_csv(std::istream& in, const CsvOptions& opts = {});
IncompleteMatrix read_csv(const std::filesystem::path& path, const CsvOptions& opts = {});
/// Observed values are written with 17 significant digits.
void write_csv(const IncompleteMatrix& m, std::ostream& out, const CsvOptions& opts = {});
void write_csv(const IncompleteMatrix& m, const std::filesystem::path& path, const CsvOptions& opts = {});

}  // namespace mcar
