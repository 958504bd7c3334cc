#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "mcar/data.hpp"
#include "mcar/error.hpp"
#include "mcar/rng.hpp"

using namespace mcar;

namespace {

IncompleteMatrix parse(const std::string& text, const CsvOptions& opts = {}) {
  std::istringstream in(text);
  return read_csv(in, opts);
}

}  // namespace

TEST_CASE("CSV with NA markers and empty fields", "[csv]") {
  const auto m = parse("a,b,c\n1,2,3\n4,NA,6\n7,8,\n");
  REQUIRE(m.rows() == 3);
  REQUIRE(m.cols() == 3);
  CHECK(m.names() == std::vector<std::string>{"a", "b", "c"});
  CHECK(m.observed(0, 1));
  CHECK_FALSE(m.observed(1, 1));
  CHECK_FALSE(m.observed(2, 2));
  CHECK(std::isnan(m.value(1, 1)));
  CHECK(m.value(2, 1) == 8.0);
  CHECK(m.missing_count(0) == 0);
  CHECK(m.missing_count(1) == 1);
}

TEST_CASE("CSV custom NA marker", "[csv]") {
  const auto m = parse("a,b\n1,-999\n2,3\n", CsvOptions{"-999"});
  CHECK_FALSE(m.observed(0, 1));
  CHECK(m.observed(1, 1));
}

TEST_CASE("CSV numeric forms", "[csv]") {
  const auto m = parse("a\n+1.5\n-2e3\n 4 \n");
  CHECK(m.value(0, 0) == 1.5);
  CHECK(m.value(1, 0) == -2000.0);
  CHECK(m.value(2, 0) == 4.0);
}

TEST_CASE("CSV errors carry row and column", "[csv]") {
  try {
    parse("a,b\n1,2\n3,oops\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 3);
    CHECK(e.column() == 2);
    CHECK(std::string(e.what()).find("row 3, column 2") != std::string::npos);
  }
  try {
    parse("a,b\n1,2\n3\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 3);
  }
  CHECK_THROWS_AS(parse("a,b\n1,2,3\n"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("CSV round trip preserves values and mask", "[csv][property]") {
  Rng rng(21);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 1 + rng.below(30), d = 1 + rng.below(6);
    Matrix v(n, d);
    std::vector<std::uint8_t> mask(n * d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        v(i, j) = rng.normal() * 1e3;
        mask[j * n + i] = rng.uniform() < 0.8;
      }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < d; ++j) names.push_back("c" + std::to_string(j));
    const IncompleteMatrix m(names, v, mask);
    std::stringstream ss;
    write_csv(m, ss);
    CHECK(read_csv(ss) == m);
  }
}

TEST_CASE("observed cells must be finite", "[data]") {
  Matrix v(2, 1);
  v(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(IncompleteMatrix({"a"}, v, {1, 1}), InvalidInput);
  CHECK_NOTHROW(IncompleteMatrix({"a"}, v, {0, 1}));
}

TEST_CASE("column classification", "[data]") {
  Matrix v(3, 5, 1.0);
  SECTION("complete data") {
    const auto r = classify_columns(IncompleteMatrix::complete(v));
    CHECK(r.p() == 5);
    CHECK(r.q() == 0);
  }
  SECTION("every column holed") {
    auto m = IncompleteMatrix::complete(v);
    for (std::size_t j = 0; j < 5; ++j) m.set_missing(j % 3, j);
    const auto r = classify_columns(m);
    CHECK(r.p() == 0);
    CHECK(r.q() == 5);
  }
  SECTION("2X3Y layout") {
    auto m = IncompleteMatrix::complete(v);
    m.set_missing(0, 2);
    m.set_missing(1, 3);
    m.set_missing(2, 4);
    const auto r = classify_columns(m);
    CHECK(r.x == std::vector<std::size_t>{0, 1});
    CHECK(r.y == std::vector<std::size_t>{2, 3, 4});
  }
  SECTION("forced Y column") {
    auto m = IncompleteMatrix::complete(v);
    m.set_missing(0, 4);
    const std::vector<std::size_t> force{1};
    const auto r = classify_columns(m, force);
    CHECK(r.x == std::vector<std::size_t>{0, 2, 3});
    CHECK(r.y == std::vector<std::size_t>{1, 4});
  }
}

TEST_CASE("indicators", "[data]") {
  Matrix v(4, 3, 2.0);
  auto m = IncompleteMatrix::complete(v);
  for (std::size_t i = 0; i < 4; ++i) m.set_missing(i, 1);
  m.set_missing(1, 2);
  m.set_missing(3, 2);
  const std::vector<std::size_t> force{0};
  const auto roles = classify_columns(m, force);
  const auto ind = indicators(m, roles);
  const auto c0 = ind.column(0), c1 = ind.column(1), c2 = ind.column(2);
  CHECK(std::vector<double>(c0.begin(), c0.end()) == std::vector<double>{1, 1, 1, 1});
  CHECK(std::vector<double>(c1.begin(), c1.end()) == std::vector<double>{0, 0, 0, 0});
  CHECK(std::vector<double>(c2.begin(), c2.end()) == std::vector<double>{1, 0, 1, 0});
  CHECK(ind.observed_count(2) == 2.0);
}

TEST_CASE("zero fill", "[data]") {
  Matrix v(3, 2);
  v(0, 0) = 1; v(1, 0) = 2; v(2, 0) = 3;
  v(0, 1) = 5; v(1, 1) = 4; v(2, 1) = 3;
  auto m = IncompleteMatrix::complete(v);
  m.set_missing(1, 1);
  const auto roles = classify_columns(m);
  const Matrix z = zero_fill(m, roles);
  CHECK(z(0, 0) == 1.0);
  CHECK(z(0, 1) == 5.0);
  CHECK(z(1, 1) == 0.0);
  CHECK(z(2, 1) == 3.0);

  SECTION("no missing cells is the identity") {
    const auto c = IncompleteMatrix::complete(v);
    CHECK(zero_fill(c, classify_columns(c)) == v);
  }
  SECTION("all missing gives a zero column") {
    for (std::size_t i = 0; i < 3; ++i) m.set_missing(i, 1);
    const Matrix zz = zero_fill(m, classify_columns(m));
    for (std::size_t i = 0; i < 3; ++i) CHECK(zz(i, 1) == 0.0);
  }
}

TEST_CASE("fully missing rows are counted", "[data]") {
  auto m = IncompleteMatrix::complete(Matrix(3, 2, 1.0));
  m.set_missing(1, 0);
  m.set_missing(1, 1);
  CHECK(m.fully_missing_rows() == 1);
  CHECK_FALSE(m.row_has_observed(1));
  CHECK(m.row_has_observed(0));
}
