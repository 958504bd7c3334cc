#include <algorithm>

#include "mcar/error.hpp"
#include "mcar/little.hpp"

namespace mcar {

TestReport little_d2(const IncompleteMatrix& m, const EmOptions& em, const TestOptions& opts) {
  std::size_t dropped = 0;
  const auto groups = group_patterns(m, &dropped);

  long df = -static_cast<long>(m.cols());
  for (const auto& g : groups) df += static_cast<long>(g.observed_columns.size());
  if (groups.size() < 2 || df < 1)
    throw InapplicableTest(InapplicableTest::Reason::SinglePattern,
                           "Little's test needs at least two missingness patterns (df = " +
                               std::to_string(std::max(df, 0L)) + ")");

  const MvnEstimate est = em_mvn(m, em);

  TestReport r;
  r.method = Method::LittleD2;
  r.df = static_cast<int>(df);
  if (dropped > 0)
    r.warnings.push_back("dropped " + std::to_string(dropped) + " entirely missing row(s)");
  if (!est.converged) r.warnings.push_back("EM did not converge");

  double d2 = 0.0;
  r.rank = 0;
  for (const auto& g : groups) {
    const auto& obs = g.observed_columns;
    SymMatrix sub(obs.size());
    for (std::size_t b = 0; b < obs.size(); ++b)
      for (std::size_t a = 0; a <= b; ++a) sub.set(a, b, est.cov(obs[a], obs[b]));
    const InverseResult inv = invert_or_pseudo(sub, opts.pinv_tolerance);
    r.rank_deficient = r.rank_deficient || inv.used_pseudoinverse;
    r.rank += inv.rank;

    std::vector<double> diff(obs.size());
    for (std::size_t o = 0; o < obs.size(); ++o) diff[o] = g.observed_mean[o] - est.mean[obs[o]];
    d2 += static_cast<double>(g.count()) * quadratic_form(inv.matrix, diff);
  }
  r.statistic = std::max(0.0, d2);
  r.p_value = chisq_sf(r.statistic, r.df);
  return r;
}

}  // namespace mcar
