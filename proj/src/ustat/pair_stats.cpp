#include <vector>

#include "mcar/error.hpp"
#include "mcar/ustat.hpp"

namespace mcar {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidInput("pair statistic: column lengths differ");
  if (a < 2) throw InvalidInput("pair statistic: need at least two rows");
}

std::vector<double> zero_filled(std::span<const double> y, std::span<const double> r_u) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = r_u[i] != 0.0 ? y[i] : 0.0;
  return out;
}

}  // namespace

std::vector<double> StatVector::values() const {
  std::vector<double> v;
  v.reserve(pairs.size());
  for (const auto& p : pairs) v.push_back(p.value);
  return v;
}

double t_x(std::span<const double> x, std::span<const double> r) {
  check_lengths(x.size(), r.size());
  return -sample_cov(x, r);
}

double t_y_hat(std::span<const double> y, std::span<const double> r_u, std::span<const double> r_v) {
  check_lengths(y.size(), r_v.size());
  check_lengths(y.size(), r_u.size());
  const auto filled = zero_filled(y, r_u);
  return t_x(filled, r_v);
}

double t_y_complete_case(std::span<const double> y, std::span<const double> r_u,
                         std::span<const double> r_v) {
  if (y.size() != r_u.size() || y.size() != r_v.size())
    throw InvalidInput("t_y_complete_case: column lengths differ");
  double n_obs = 0.0, sy = 0.0, sr = 0.0, syr = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (r_u[i] == 0.0) continue;
    n_obs += 1.0;
    sy += y[i];
    sr += r_v[i];
    syr += y[i] * r_v[i];
  }
  if (n_obs < 2.0) throw InsufficientObserved("t_y_complete_case: fewer than two observed rows");
  // Double sum over observed i != j of y_i r_j, minus the diagonal term.
  return (sy * sr - syr) / (n_obs * (n_obs - 1.0)) - syr / n_obs;
}

StatVector stat_vector(const IncompleteMatrix& m, const ColumnRoles& roles) {
  if (roles.q() == 0) throw InapplicableTest(InapplicableTest::Reason::NothingToTest,
                                             "no incomplete columns: nothing to test");
  if (m.rows() < 2) throw InvalidInput("stat_vector: need at least two rows");

  const IndicatorMatrix ind = indicators(m, roles);
  const Matrix filled = zero_fill(m, roles);

  StatVector out;
  out.p = roles.p();
  out.q = roles.q();
  out.pairs.reserve(out.p * out.q + out.q * (out.q - 1));
  for (std::size_t u = 0; u < roles.p(); ++u)
    for (std::size_t v = 0; v < roles.q(); ++v)
      out.pairs.push_back({PairKind::X, u, v, t_x(filled.col(roles.x[u]), ind.column(v))});
  for (std::size_t u = 0; u < roles.q(); ++u)
    for (std::size_t v = 0; v < roles.q(); ++v) {
      if (v == u) continue;
      out.pairs.push_back({PairKind::Y, u, v, t_x(filled.col(roles.y[u]), ind.column(v))});
    }
  return out;
}

SymMatrix lambda_matrix(const IncompleteMatrix& m, const ColumnRoles& roles, bool include_y_pairs) {
  if (m.rows() < 2) throw InvalidInput("lambda_matrix: need at least two rows");
  const std::size_t p = roles.p();
  const std::size_t q = roles.q();
  const IndicatorMatrix ind = indicators(m, roles);
  const Matrix filled = zero_fill(m, roles);

  // Data columns in pair order: X^(1..p) then Ytilde^(1..q).
  std::vector<std::size_t> data_cols(roles.x);
  data_cols.insert(data_cols.end(), roles.y.begin(), roles.y.end());
  const std::size_t d = data_cols.size();

  SymMatrix data_cov(d);
  for (std::size_t b = 0; b < d; ++b)
    for (std::size_t a = 0; a <= b; ++a)
      data_cov.set(a, b, sample_cov(filled.col(data_cols[a]), filled.col(data_cols[b])));
  SymMatrix ind_cov(q);
  for (std::size_t s = 0; s < q; ++s)
    for (std::size_t v = 0; v <= s; ++v) ind_cov.set(v, s, sample_cov(ind.column(v), ind.column(s)));

  // (data column index into data_cols, indicator index) for each pair.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t u = 0; u < p; ++u)
    for (std::size_t v = 0; v < q; ++v) pairs.emplace_back(u, v);
  if (include_y_pairs)
    for (std::size_t u = 0; u < q; ++u)
      for (std::size_t v = 0; v < q; ++v)
        if (v != u) pairs.emplace_back(p + u, v);

  SymMatrix lambda(pairs.size());
  for (std::size_t l = 0; l < pairs.size(); ++l)
    for (std::size_t k = 0; k <= l; ++k)
      lambda.set(k, l, data_cov(pairs[k].first, pairs[l].first) *
                           ind_cov(pairs[k].second, pairs[l].second));
  return lambda;
}

LambdaMatrix lambda_hat(const IncompleteMatrix& m, const ColumnRoles& roles, const TestOptions& opts) {
  LambdaMatrix out;
  out.matrix = lambda_matrix(m, roles, true);
  out.inverse = invert_or_pseudo(out.matrix, opts.pinv_tolerance);
  return out;
}

}  // namespace mcar
