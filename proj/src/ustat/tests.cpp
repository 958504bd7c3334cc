#include <algorithm>

#include "mcar/error.hpp"
#include "mcar/ustat.hpp"

namespace mcar {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::An: return "A_n";
    case Method::AnPrime: return "A_n_prime";
    case Method::LittleD2: return "little_d2";
  }
  return "unknown";
}

namespace {

void check_rows(const IncompleteMatrix& m) {
  if (m.rows() < 2) throw InvalidInput("test: need at least two rows");
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!m.row_has_observed(i))
      throw InvalidInput("test: row " + std::to_string(i + 1) + " is entirely missing");
}

// n * t' L^- t with the chi-square reference; shared by A_n and A_n'.
TestReport quadratic_test(Method method, std::vector<PairStat> pairs, const SymMatrix& lambda,
                          std::size_t n, const TestOptions& opts) {
  if (pairs.empty())
    throw InapplicableTest(InapplicableTest::Reason::NothingToTest, "statistic vector is empty");
  const InverseResult inv = invert_or_pseudo(lambda, opts.pinv_tolerance);
  if (inv.rank == 0)
    throw InapplicableTest(InapplicableTest::Reason::DegenerateSample,
                           "covariance estimate is identically zero");

  std::vector<double> t(pairs.size());
  std::transform(pairs.begin(), pairs.end(), t.begin(), [](const PairStat& s) { return s.value; });

  TestReport r;
  r.method = method;
  r.statistic = std::max(0.0, static_cast<double>(n) * quadratic_form(inv.matrix, t));
  r.rank = inv.rank;
  r.rank_deficient = inv.used_pseudoinverse;
  r.df = opts.df_mode == DfMode::Rank ? static_cast<int>(inv.rank) : static_cast<int>(pairs.size());
  r.p_value = chisq_sf(r.statistic, r.df);
  r.pair_stats = std::move(pairs);
  return r;
}

}  // namespace

TestReport test_an_prime(const IncompleteMatrix& m, const ColumnRoles& roles, const TestOptions& opts) {
  if (roles.q() == 0)
    throw InapplicableTest(InapplicableTest::Reason::NothingToTest,
                           "no incomplete columns: nothing to test");
  check_rows(m);
  StatVector t = stat_vector(m, roles);
  const SymMatrix lambda = lambda_matrix(m, roles, true);
  return quadratic_test(Method::AnPrime, std::move(t.pairs), lambda, m.rows(), opts);
}

TestReport test_an(const IncompleteMatrix& m, const ColumnRoles& roles, const TestOptions& opts) {
  if (roles.q() == 0)
    throw InapplicableTest(InapplicableTest::Reason::NothingToTest,
                           "no incomplete columns: nothing to test");
  if (roles.p() == 0)
    throw InapplicableTest(InapplicableTest::Reason::OldTestInapplicable,
                           "A_n needs at least one complete column");
  check_rows(m);
  StatVector t = stat_vector(m, roles);
  t.pairs.resize(t.p * t.q);
  const SymMatrix sigma = lambda_matrix(m, roles, false);
  return quadratic_test(Method::An, std::move(t.pairs), sigma, m.rows(), opts);
}

}  // namespace mcar
