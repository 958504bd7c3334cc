#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mcar/error.hpp"
#include "mcar/simgen.hpp"
#include "mcar/ustat.hpp"
#include "oracles.hpp"

using namespace mcar;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

using Vec = std::vector<double>;

// n x d normal data with each of the last `q` columns losing cells at `rate`.
IncompleteMatrix random_incomplete(std::size_t n, std::size_t p, std::size_t q, double rate, Rng& rng) {
  Matrix v(n, p + q);
  for (std::size_t j = 0; j < p + q; ++j)
    for (std::size_t i = 0; i < n; ++i) v(i, j) = rng.normal() + 0.3 * static_cast<double>(j);
  auto m = IncompleteMatrix::complete(v);
  for (std::size_t j = p; j < p + q; ++j) {
    bool holed = false;
    for (std::size_t i = 0; i < n; ++i)
      if (rng.uniform() < rate) {
        m.set_missing(i, j);
        holed = true;
      }
    if (!holed) m.set_missing(rng.below(n), j);
  }
  // Keep every row with at least one observed cell.
  if (p == 0)
    for (std::size_t i = 0; i < n; ++i)
      if (!m.row_has_observed(i)) m.set_value(i, 0, v(i, 0));
  return m;
}

Vec column(const Matrix& m, std::size_t j) { return Vec(m.col(j).begin(), m.col(j).end()); }

// Lambda entry by entry from the pairwise-difference covariance.
SymMatrix oracle_lambda(const IncompleteMatrix& m, const ColumnRoles& roles, bool with_y) {
  const Matrix z = zero_fill(m, roles);
  const auto ind = indicators(m, roles);
  struct P { std::size_t col, v; };
  std::vector<P> pairs;
  for (std::size_t u = 0; u < roles.p(); ++u)
    for (std::size_t v = 0; v < roles.q(); ++v) pairs.push_back({roles.x[u], v});
  if (with_y)
    for (std::size_t u = 0; u < roles.q(); ++u)
      for (std::size_t v = 0; v < roles.q(); ++v)
        if (u != v) pairs.push_back({roles.y[u], v});
  SymMatrix l(pairs.size());
  for (std::size_t a = 0; a < pairs.size(); ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      const Vec ca = column(z, pairs[a].col), cb = column(z, pairs[b].col);
      const Vec ra(ind.column(pairs[a].v).begin(), ind.column(pairs[a].v).end());
      const Vec rb(ind.column(pairs[b].v).begin(), ind.column(pairs[b].v).end());
      l.set(a, b, oracle::pairwise_cov(ca, cb) * oracle::pairwise_cov(ra, rb));
    }
  return l;
}

}  // namespace

TEST_CASE("t_x examples", "[pairs]") {
  CHECK(t_x(Vec{1, 1, 1}, Vec{1, 0, 1}) == 0.0);
  CHECK(t_x(Vec{1, 2, 3}, Vec{1, 1, 1}) == 0.0);
  CHECK_THAT(t_x(Vec{1, 2, 3}, Vec{1, 1, 0}), WithinAbs(0.5, 1e-15));
  CHECK_THAT(oracle::t_double_sum(Vec{1, 2, 3}, Vec{1, 1, 0}), WithinAbs(0.5, 1e-15));
  CHECK_THROWS_AS(t_x(Vec{1, 2}, Vec{1, 1, 0}), InvalidInput);
  CHECK_THROWS_AS(t_x(Vec{1}, Vec{1}), InvalidInput);
}

TEST_CASE("t_y_hat examples", "[pairs]") {
  const double nan = std::nan("");
  // Fully observed y reduces to t_x.
  CHECK(t_y_hat(Vec{1, 2, 3}, Vec{1, 1, 1}, Vec{1, 1, 0}) == t_x(Vec{1, 2, 3}, Vec{1, 1, 0}));
  CHECK(t_y_hat(Vec{nan, nan, nan}, Vec{0, 0, 0}, Vec{1, 0, 1}) == 0.0);
  // Double sum: (7/6) - (1/3) = 5/6.
  CHECK_THAT(t_y_hat(Vec{1, nan, 3}, Vec{1, 0, 1}, Vec{1, 1, 0}), WithinAbs(5.0 / 6.0, 1e-15));
  CHECK_THAT(oracle::t_hat_double_sum(Vec{1, 2, 3}, Vec{1, 0, 1}, Vec{1, 1, 0}), WithinAbs(5.0 / 6.0, 1e-15));
}

TEST_CASE("t_y_complete_case examples", "[pairs]") {
  CHECK(t_y_complete_case(Vec{1, 2, 3}, Vec{1, 1, 1}, Vec{1, 1, 0}) == t_x(Vec{1, 2, 3}, Vec{1, 1, 0}));
  CHECK_THAT(t_y_complete_case(Vec{1, 2, 3}, Vec{1, 0, 1}, Vec{1, 1, 1}), WithinAbs(0.0, 1e-15));
  // Rows 1 and 3 observed: x = (1, 3), r = (1, 0).
  CHECK_THAT(t_y_complete_case(Vec{1, 2, 3}, Vec{1, 0, 1}, Vec{1, 1, 0}), WithinAbs(1.0, 1e-15));
  CHECK_THAT(oracle::t_double_sum(Vec{1, 3}, Vec{1, 0}), WithinAbs(1.0, 1e-15));
  CHECK_THROWS_AS(t_y_complete_case(Vec{1, 2, 3}, Vec{1, 0, 0}, Vec{1, 1, 0}), InsufficientObserved);
}

TEST_CASE("pair statistics match literal double sums", "[pairs][property]") {
  Rng rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rng.below(29);
    Vec x(n), r(n), ru(n), rv(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.normal() * 5.0;
      r[i] = rng.uniform() < 0.6;
      ru[i] = rng.uniform() < 0.7;
      rv[i] = rng.uniform() < 0.7;
    }
    const double tx = t_x(x, r);
    const double ref = oracle::t_double_sum(x, r);
    CHECK(std::abs(tx - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    CHECK(tx == -sample_cov(x, r));
    const double th = t_y_hat(x, ru, rv);
    const double href = oracle::t_hat_double_sum(x, ru, rv);
    CHECK(std::abs(th - href) <= 1e-12 * std::max(1.0, std::abs(href)));
  }
}

TEST_CASE("stat vector order", "[pairs]") {
  Rng rng(32);
  const auto m = random_incomplete(40, 2, 3, 0.2, rng);
  const auto roles = classify_columns(m);
  const auto sv = stat_vector(m, roles);
  REQUIRE(sv.pairs.size() == 12);
  std::size_t k = 0;
  for (std::size_t u = 0; u < 2; ++u)
    for (std::size_t v = 0; v < 3; ++v, ++k) {
      CHECK(sv.pairs[k].kind == PairKind::X);
      CHECK(sv.pairs[k].u == u);
      CHECK(sv.pairs[k].v == v);
    }
  for (std::size_t u = 0; u < 3; ++u)
    for (std::size_t v = 0; v < 3; ++v) {
      if (u == v) continue;
      CHECK(sv.pairs[k].kind == PairKind::Y);
      CHECK(sv.pairs[k].u == u);
      CHECK(sv.pairs[k].v == v);
      ++k;
    }
  const auto empty = IncompleteMatrix::complete(Matrix(5, 2, 1.0));
  CHECK_THROWS_AS(stat_vector(empty, classify_columns(empty)), InapplicableTest);
}

TEST_CASE("lambda entries match definition-level covariances", "[lambda][property]") {
  Rng rng(33);
  for (int rep = 0; rep < 20; ++rep) {
    const auto m = random_incomplete(25 + rng.below(30), 2, 2, 0.25, rng);
    const auto roles = classify_columns(m);
    const SymMatrix l = lambda_matrix(m, roles);
    const SymMatrix ref = oracle_lambda(m, roles, true);
    REQUIRE(l.dim() == 2 * 2 + 2);
    CHECK(max_abs_diff(to_matrix(l), to_matrix(ref)) < 1e-12);
  }
}

TEST_CASE("lambda special cases", "[lambda]") {
  SECTION("constant indicators give a zero matrix") {
    const auto m = IncompleteMatrix::complete(Matrix(6, 3, 1.0));
    const std::vector<std::size_t> force{1, 2};
    const auto l = lambda_matrix(m, classify_columns(m, force));
    for (double v : l.data()) CHECK(v == 0.0);
  }
  SECTION("p = 1, q = 1 is Var(X) Var(R)") {
    Rng rng(34);
    const auto m = random_incomplete(30, 1, 1, 0.3, rng);
    const auto roles = classify_columns(m);
    const auto l = lambda_matrix(m, roles);
    REQUIRE(l.dim() == 1);
    const auto ind = indicators(m, roles);
    CHECK_THAT(l(0, 0), WithinRel(sample_cov(m.column(0), m.column(0)) *
                                      sample_cov(ind.column(0), ind.column(0)), 1e-14));
  }
}

TEST_CASE("A_n' recomputed from an independent Lambda", "[test]") {
  Rng rng(35);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 60 + rng.below(100);
    const auto m = random_incomplete(n, 2, 3, 0.2, rng);
    const auto roles = classify_columns(m);
    const auto r = test_an_prime(m, roles);
    REQUIRE(r.df == 12);
    REQUIRE_FALSE(r.rank_deficient);

    const SymMatrix l = oracle_lambda(m, roles, true);
    const Cholesky c(l);
    REQUIRE(c.ok());
    Vec t;
    for (const auto& s : r.pair_stats) t.push_back(s.value);
    Vec sol = t;
    c.solve_in_place(sol);
    double q = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) q += t[k] * sol[k];
    const double stat = static_cast<double>(n) * q;
    CHECK_THAT(r.statistic, WithinRel(stat, 1e-8));
    CHECK_THAT(r.p_value, WithinRel(chisq_sf(stat, 12), 1e-7));
  }
}

TEST_CASE("A_n degrees of freedom and scalar form", "[test]") {
  Rng rng(36);
  const auto m = random_incomplete(80, 2, 3, 0.2, rng);
  CHECK(test_an(m, classify_columns(m)).df == 6);

  const auto s = random_incomplete(50, 1, 1, 0.3, rng);
  const auto roles = classify_columns(s);
  const auto r = test_an(s, roles);
  const auto ind = indicators(s, roles);
  const double t = t_x(s.column(0), ind.column(0));
  const double expected = 50.0 * t * t /
                          (sample_cov(s.column(0), s.column(0)) * sample_cov(ind.column(0), ind.column(0)));
  CHECK_THAT(r.statistic, WithinRel(expected, 1e-12));
  CHECK(r.df == 1);
}

TEST_CASE("q = 1 reduces A_n' to A_n bit for bit", "[test][property]") {
  Rng rng(37);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t p = 1 + rng.below(4);
    const auto m = random_incomplete(20 + rng.below(200), p, 1, 0.05 + 0.3 * rng.uniform(), rng);
    const auto roles = classify_columns(m);
    const auto a = test_an(m, roles);
    const auto b = test_an_prime(m, roles);
    CHECK(a.statistic == b.statistic);
    CHECK(a.df == b.df);
    CHECK(a.p_value == b.p_value);
  }
}

TEST_CASE("inapplicable and invalid inputs", "[test]") {
  const auto complete = IncompleteMatrix::complete(Matrix(10, 3, 1.0));
  try {
    test_an_prime(complete, classify_columns(complete));
    FAIL("expected InapplicableTest");
  } catch (const InapplicableTest& e) {
    CHECK(e.reason() == InapplicableTest::Reason::NothingToTest);
  }

  Rng rng(38);
  const auto all_y = random_incomplete(30, 0, 3, 0.2, rng);
  try {
    test_an(all_y, classify_columns(all_y));
    FAIL("expected InapplicableTest");
  } catch (const InapplicableTest& e) {
    CHECK(e.reason() == InapplicableTest::Reason::OldTestInapplicable);
  }
  CHECK_NOTHROW(test_an_prime(all_y, classify_columns(all_y)));

  auto holed = random_incomplete(30, 1, 2, 0.2, rng);
  holed.set_missing(4, 0);
  holed.set_missing(4, 1);
  holed.set_missing(4, 2);
  CHECK_THROWS_AS(test_an_prime(holed, classify_columns(holed)), InvalidInput);
}

TEST_CASE("complete indicator column takes the pseudoinverse path", "[test]") {
  Rng rng(39);
  const auto m = random_incomplete(100, 2, 2, 0.2, rng);
  std::vector<std::size_t> force{0};
  const auto roles = classify_columns(m, force);
  REQUIRE(roles.q() == 3);
  const auto a = test_an(m, roles);
  CHECK(a.rank_deficient);
  CHECK(a.df == 3);
  CHECK(std::isfinite(a.p_value));
  const auto b = test_an_prime(m, roles);
  CHECK(b.rank_deficient);
  CHECK(std::isfinite(b.p_value));

  TestOptions opts;
  opts.df_mode = DfMode::Rank;
  const auto c = test_an(m, roles, opts);
  CHECK(c.df == static_cast<int>(c.rank));
  CHECK(c.df < 3);
}

TEST_CASE("statistic and p-value ranges", "[test][property]") {
  Rng rng(40);
  for (int rep = 0; rep < 50; ++rep) {
    const auto m = random_incomplete(30 + rng.below(100), rng.below(3), 2 + rng.below(2), 0.2, rng);
    const auto roles = classify_columns(m);
    const auto r = test_an_prime(m, roles);
    CHECK(r.statistic >= 0.0);
    CHECK((r.p_value >= 0.0 && r.p_value <= 1.0));
    CHECK(r.df == static_cast<int>(roles.p() * roles.q() + roles.q() * (roles.q() - 1)));
  }
}

TEST_CASE("transforms", "[transform]") {
  Matrix v(4, 2);
  v(0, 0) = 1; v(1, 0) = 10; v(2, 0) = 100; v(3, 0) = 10;
  v(0, 1) = 3; v(1, 1) = 1; v(2, 1) = 2; v(3, 1) = 5;
  auto m = IncompleteMatrix::complete(v);
  m.set_missing(3, 1);

  CHECK(apply_transform(m, Transform::Identity) == m);
  const auto lg = apply_transform(m, Transform::Log);
  CHECK_THAT(lg.value(2, 0), WithinAbs(std::log(100.0), 1e-15));
  CHECK_FALSE(lg.observed(3, 1));
  const auto rk = apply_transform(m, Transform::Rank);
  CHECK(rk.value(0, 0) == 1.0);
  CHECK(rk.value(1, 0) == 2.5);
  CHECK(rk.value(3, 0) == 2.5);
  CHECK(rk.value(0, 1) == 3.0);
  CHECK_FALSE(rk.observed(3, 1));

  auto neg = IncompleteMatrix::complete(v);
  neg.set_value(0, 0, -1.0);
  CHECK_THROWS_AS(apply_transform(neg, Transform::Log), InvalidInput);
}

TEST_CASE("rank transform leaves the indicator structure unchanged", "[transform][property]") {
  Rng rng(41);
  const auto m = random_incomplete(60, 2, 3, 0.2, rng);
  const auto r = apply_transform(m, Transform::Rank);
  CHECK(classify_columns(r).y == classify_columns(m).y);
  CHECK(std::isfinite(test_an_prime(r, classify_columns(r)).p_value));
}
