#include <algorithm>
#include <numeric>

#include "mcar/error.hpp"
#include "mcar/numerics.hpp"

namespace mcar {

double mean(std::span<const double> a) {
  if (a.empty()) throw InvalidInput("mean: empty input");
  return std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
}

double sample_cov(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("sample_cov: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) throw InvalidInput("sample_cov: need at least two observations");
  const double ma = mean(a);
  const double mb = mean(b);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / static_cast<double>(n - 1);
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

double median(std::span<const double> values) {
  if (values.empty()) throw InvalidInput("median: empty input");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

}  // namespace mcar
