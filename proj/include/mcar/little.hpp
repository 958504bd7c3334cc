#pragma once

// Little's d2 baseline: EM for a multivariate normal with arbitrary
// missingness patterns, then a pattern-wise comparison of observed means.

#include <cstdint>
#include <vector>

#include "mcar/data.hpp"
#include "mcar/numerics.hpp"
#include "mcar/ustat.hpp"

namespace mcar {

struct PatternGroup {
  std::vector<std::uint8_t> pattern;          // per column, 1 = observed
  std::vector<std::size_t> rows;
  std::vector<std::size_t> observed_columns;  // indices where pattern is 1
  std::vector<double> observed_mean;          // aligned with observed_columns

  std::size_t count() const noexcept { return rows.size(); }
};

/// Groups rows by missingness pattern, in order of first appearance. Fully
/// missing rows are skipped and counted in `dropped_rows`.
std::vector<PatternGroup> group_patterns(const IncompleteMatrix& m, std::size_t* dropped_rows = nullptr);

struct MvnEstimate {
  std::vector<double> mean;
  SymMatrix cov;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Observed-data log-likelihood before each EM update.
  std::vector<double> loglik_trace;
};

struct EmOptions {
  double tol = 1e-6;  // relative log-likelihood change
  int max_iter = 500;
};

/// Observed-data normal log-likelihood of (mean, cov).
double observed_loglik(const IncompleteMatrix& m, std::span<const double> mean, const SymMatrix& cov);

/// Throws NumericalError naming the pattern when an observed block of the
/// covariance is not positive definite.
MvnEstimate em_mvn(const IncompleteMatrix& m, const EmOptions& opts = {});

/// d2 = sum_J n_J (xbar_J - mu_J)' Sigma_J^-1 (xbar_J - mu_J), df = sum_J d_J - d.
TestReport little_d2(const IncompleteMatrix& m, const EmOptions& em = {}, const TestOptions& opts = {});

}  // namespace mcar
