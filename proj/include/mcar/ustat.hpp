#pragma once

// Covariance-between-data-and-indicator statistics and the quadratic-form MCAR
// tests built from them: A_n (complete columns only) and A_n' (which also uses
// the zero-filled incomplete columns).

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcar/data.hpp"
#include "mcar/numerics.hpp"

namespace mcar {

enum class PairKind { X, Y };

/// One pairwise statistic. `u` indexes roles.x (X-pair) or roles.y (Y-pair);
/// `v` indexes roles.y, the indicator column.
struct PairStat {
  PairKind kind = PairKind::X;
  std::size_t u = 0;
  std::size_t v = 0;
  double value = 0.0;

  friend bool operator==(const PairStat&, const PairStat&) = default;
};

/// X-pairs (u outer over p, v inner over q) followed by Y-pairs (u outer over
/// q, v inner over q, v != u).
struct StatVector {
  std::size_t p = 0;
  std::size_t q = 0;
  std::vector<PairStat> pairs;

  std::vector<double> values() const;
};

struct LambdaMatrix {
  SymMatrix matrix;
  InverseResult inverse;
};

enum class Method { An, AnPrime, LittleD2 };
std::string_view method_name(Method m);

enum class DfMode {
  Nominal,  // pq + q(q-1) (or pq) regardless of rank
  Rank,     // rank of the covariance estimate
};

struct TestOptions {
  DfMode df_mode = DfMode::Nominal;
  /// Relative singular-value cutoff; negative selects dim * epsilon.
  double pinv_tolerance = -1.0;
};

struct TestReport {
  Method method = Method::AnPrime;
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  bool rank_deficient = false;
  std::size_t rank = 0;
  std::vector<PairStat> pair_stats;
  std::vector<std::string> warnings;
};

/// ((sum x)(sum r) - n sum xr) / (n(n-1)), i.e. minus the sample covariance.
double t_x(std::span<const double> x, std::span<const double> r);

/// t_x of the zero-filled column (y where r_u = 1, else 0) against r_v.
/// Missing entries of `y` may hold anything, NaN included.
double t_y_hat(std::span<const double> y, std::span<const double> r_u, std::span<const double> r_v);

/// Complete-case statistic restricted to rows with r_u = 1. Diagnostic only.
/// Throws InsufficientObserved when fewer than two rows are observed.
double t_y_complete_case(std::span<const double> y, std::span<const double> r_u,
                         std::span<const double> r_v);

StatVector stat_vector(const IncompleteMatrix& m, const ColumnRoles& roles);

/// Entry for pairs (a, v), (b, s): cov(col_a, col_b) * cov(R_v, R_s), with
/// col an X column or a zero-filled Y column. Not inverted.
SymMatrix lambda_matrix(const IncompleteMatrix& m, const ColumnRoles& roles, bool include_y_pairs = true);

LambdaMatrix lambda_hat(const IncompleteMatrix& m, const ColumnRoles& roles,
                        const TestOptions& opts = {});

TestReport test_an_prime(const IncompleteMatrix& m, const ColumnRoles& roles,
                         const TestOptions& opts = {});
TestReport test_an(const IncompleteMatrix& m, const ColumnRoles& roles, const TestOptions& opts = {});

/// Optional per-column monotone pre-transform applied to observed cells.
enum class Transform { Identity, Log, Rank };

/// Log requires strictly positive observed values. Rank uses average ranks
/// among the observed cells of each column.
IncompleteMatrix apply_transform(const IncompleteMatrix& m, Transform t);

}  // namespace mcar
