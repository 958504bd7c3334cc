#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "mcar/error.hpp"
#include "mcar/little.hpp"

namespace mcar {

namespace {

std::string describe(const PatternGroup& g) {
  std::string s = "pattern ";
  for (auto b : g.pattern) s += b ? '1' : '0';
  return s;
}

SymMatrix submatrix(const SymMatrix& s, std::span<const std::size_t> idx) {
  SymMatrix out(idx.size());
  for (std::size_t b = 0; b < idx.size(); ++b)
    for (std::size_t a = 0; a <= b; ++a) out.set(a, b, s(idx[a], idx[b]));
  return out;
}

struct Moments {
  std::vector<double> mean;
  SymMatrix cov;
};

// Complete-case ML moments, or available-case means with a diagonal
// covariance when fewer than two rows are complete.
Moments initial_moments(const IncompleteMatrix& m, const std::vector<PatternGroup>& groups) {
  const std::size_t d = m.cols();
  Moments mo{std::vector<double>(d, 0.0), SymMatrix(d)};

  std::vector<std::size_t> complete;
  for (const auto& g : groups)
    if (g.observed_columns.size() == d) complete.insert(complete.end(), g.rows.begin(), g.rows.end());

  if (complete.size() >= 2) {
    const double n = static_cast<double>(complete.size());
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i : complete) mo.mean[j] += m.value(i, j);
      mo.mean[j] /= n;
    }
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t a = 0; a <= b; ++a) {
        double s = 0.0;
        for (std::size_t i : complete) s += (m.value(i, a) - mo.mean[a]) * (m.value(i, b) - mo.mean[b]);
        mo.cov.set(a, b, s / n);
      }
    if (Cholesky(mo.cov).ok()) return mo;
  }

  for (std::size_t j = 0; j < d; ++j) {
    double s = 0.0, ss = 0.0, cnt = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (m.observed(i, j)) {
        s += m.value(i, j);
        ss += m.value(i, j) * m.value(i, j);
        cnt += 1.0;
      }
    if (cnt == 0.0) throw InvalidInput("em_mvn: column '" + m.names()[j] + "' is entirely missing");
    mo.mean[j] = s / cnt;
    const double var = ss / cnt - mo.mean[j] * mo.mean[j];
    mo.cov.set(j, j, var > 0.0 ? var : 1.0);
    for (std::size_t a = 0; a < j; ++a) mo.cov.set(a, j, 0.0);
  }
  return mo;
}

// One pass over the patterns: the observed-data log-likelihood at (mean, cov)
// and, when `next` is given, the EM update.
double em_pass(const IncompleteMatrix& m, const std::vector<PatternGroup>& groups,
               const std::vector<double>& mu, const SymMatrix& cov, Moments* next) {
  const std::size_t d = m.cols();
  const double log2pi = std::log(2.0 * std::numbers::pi);
  double ll = 0.0;

  std::vector<double> t1(d, 0.0);
  Matrix t2(d, d);
  std::size_t total = 0;

  for (const auto& g : groups) {
    const auto& obs = g.observed_columns;
    std::vector<std::size_t> mis;
    for (std::size_t j = 0; j < d; ++j)
      if (!g.pattern[j]) mis.push_back(j);

    const Cholesky chol(submatrix(cov, obs));
    if (!chol.ok())
      throw NumericalError("em_mvn: observed covariance block is not positive definite for " +
                           describe(g));
    const double logdet = chol.log_det();
    const std::size_t k = obs.size();

    // Regression coefficients B = Sigma_oo^-1 Sigma_om, one column per missing variable.
    std::vector<std::vector<double>> coef(mis.size(), std::vector<double>(k));
    for (std::size_t a = 0; a < mis.size(); ++a) {
      for (std::size_t o = 0; o < k; ++o) coef[a][o] = cov(obs[o], mis[a]);
      chol.solve_in_place(coef[a]);
    }

    std::vector<double> diff(k), z(k), full(d);
    for (std::size_t i : g.rows) {
      for (std::size_t o = 0; o < k; ++o) diff[o] = m.value(i, obs[o]) - mu[obs[o]];
      z = diff;
      chol.solve_in_place(z);
      double quad = 0.0;
      for (std::size_t o = 0; o < k; ++o) quad += diff[o] * z[o];
      ll -= 0.5 * (static_cast<double>(k) * log2pi + logdet + quad);

      if (!next) continue;
      for (std::size_t o = 0; o < k; ++o) full[obs[o]] = m.value(i, obs[o]);
      for (std::size_t a = 0; a < mis.size(); ++a) {
        double e = mu[mis[a]];
        for (std::size_t o = 0; o < k; ++o) e += coef[a][o] * diff[o];
        full[mis[a]] = e;
      }
      for (std::size_t b = 0; b < d; ++b) {
        t1[b] += full[b];
        for (std::size_t a = 0; a <= b; ++a) t2(a, b) += full[a] * full[b];
      }
    }
    if (!next) continue;
    total += g.count();

    // Conditional covariance of the missing block, added once per row.
    const double cnt = static_cast<double>(g.count());
    for (std::size_t bb = 0; bb < mis.size(); ++bb)
      for (std::size_t aa = 0; aa <= bb; ++aa) {
        double c = cov(mis[aa], mis[bb]);
        for (std::size_t o = 0; o < k; ++o) c -= cov(mis[aa], obs[o]) * coef[bb][o];
        const std::size_t lo = std::min(mis[aa], mis[bb]);
        const std::size_t hi = std::max(mis[aa], mis[bb]);
        t2(lo, hi) += cnt * c;
      }
  }

  if (next) {
    const double n = static_cast<double>(total);
    next->mean.assign(d, 0.0);
    next->cov = SymMatrix(d);
    for (std::size_t j = 0; j < d; ++j) next->mean[j] = t1[j] / n;
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t a = 0; a <= b; ++a)
        next->cov.set(a, b, t2(a, b) / n - next->mean[a] * next->mean[b]);
  }
  return ll;
}

}  // namespace

std::vector<PatternGroup> group_patterns(const IncompleteMatrix& m, std::size_t* dropped_rows) {
  std::map<std::vector<std::uint8_t>, std::size_t> index;
  std::vector<PatternGroup> groups;
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<std::uint8_t> pat(m.cols());
    bool any = false;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      pat[j] = m.observed(i, j) ? 1 : 0;
      any = any || pat[j];
    }
    if (!any) {
      ++dropped;
      continue;
    }
    auto [it, inserted] = index.try_emplace(pat, groups.size());
    if (inserted) {
      PatternGroup g;
      g.pattern = pat;
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (pat[j]) g.observed_columns.push_back(j);
      groups.push_back(std::move(g));
    }
    groups[it->second].rows.push_back(i);
  }
  for (auto& g : groups) {
    g.observed_mean.assign(g.observed_columns.size(), 0.0);
    for (std::size_t o = 0; o < g.observed_columns.size(); ++o) {
      for (std::size_t i : g.rows) g.observed_mean[o] += m.value(i, g.observed_columns[o]);
      g.observed_mean[o] /= static_cast<double>(g.count());
    }
  }
  if (dropped_rows) *dropped_rows = dropped;
  return groups;
}

double observed_loglik(const IncompleteMatrix& m, std::span<const double> mean, const SymMatrix& cov) {
  if (mean.size() != m.cols() || cov.dim() != m.cols())
    throw InvalidInput("observed_loglik: parameter dimension mismatch");
  const auto groups = group_patterns(m);
  return em_pass(m, groups, std::vector<double>(mean.begin(), mean.end()), cov, nullptr);
}

MvnEstimate em_mvn(const IncompleteMatrix& m, const EmOptions& opts) {
  if (m.cols() == 0) throw InvalidInput("em_mvn: no columns");
  const auto groups = group_patterns(m);
  if (groups.empty()) throw InvalidInput("em_mvn: every row is entirely missing");

  Moments cur = initial_moments(m, groups);
  MvnEstimate est;
  double prev = 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    Moments next;
    const double ll = em_pass(m, groups, cur.mean, cur.cov, &next);
    est.loglik_trace.push_back(ll);
    if (it > 0 && std::abs(ll - prev) <= opts.tol * std::abs(prev)) {
      est.converged = true;
      est.loglik = ll;
      break;
    }
    prev = ll;
    cur = std::move(next);
    est.iterations = it + 1;
  }
  if (!est.converged) est.loglik = em_pass(m, groups, cur.mean, cur.cov, nullptr);
  est.mean = std::move(cur.mean);
  est.cov = std::move(cur.cov);
  return est;
}

}  // namespace mcar
