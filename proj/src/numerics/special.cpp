#include <array>
#include <cmath>
#include <limits>

#include "mcar/error.hpp"
#include "mcar/numerics.hpp"

namespace mcar {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxTerms = 100000;

// Series for P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < kMaxTerms; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Lentz continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidInput("incomplete gamma: shape must be positive");
  if (!(x >= 0.0)) throw InvalidInput("incomplete gamma: argument must be nonnegative");
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw InvalidInput("log_gamma: argument must be positive");
  // Lanczos approximation, g = 7, n = 9.
  static constexpr std::array<double, 9> coef = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // Reflection keeps the approximation in its accurate range.
    return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double sum = coef[0];
  for (std::size_t i = 1; i < coef.size(); ++i) sum += coef[i] / (z + static_cast<double>(i));
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

double gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double gamma_p_inverse(double a, double p) {
  if (!(a > 0.0)) throw InvalidInput("gamma_p_inverse: shape must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("gamma_p_inverse: probability outside [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return std::numeric_limits<double>::infinity();

  // Starting point from the Wilson-Hilferty / small-a approximations.
  const double gln = log_gamma(a);
  double x;
  if (a > 1.0) {
    const double pp = p < 0.5 ? p : 1.0 - p;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
    if (p < 0.5) z = -z;
    x = std::max(1e-3, a * std::pow(1.0 - 1.0 / (9.0 * a) - z / (3.0 * std::sqrt(a)), 3));
  } else {
    const double t = 1.0 - a * (0.253 + a * 0.12);
    x = p < t ? std::pow(p / t, 1.0 / a) : 1.0 - std::log(1.0 - (p - t) / (1.0 - t));
  }

  // Halley steps inside a bisection bracket [lo, hi].
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 200; ++iter) {
    const double err = gamma_p(a, x) - p;
    if (err == 0.0) return x;
    if (err < 0.0) lo = std::max(lo, x);
    else hi = std::min(hi, x);

    const double density = std::exp(-x + (a - 1.0) * std::log(x) - gln);
    double next = x;
    if (density > 0.0 && std::isfinite(density)) {
      const double u = err / density;
      next = x - u / (1.0 - 0.5 * std::min(1.0, u * ((a - 1.0) / x - 1.0)));
    }
    if (!(next > lo && next < hi)) next = std::isinf(hi) ? 2.0 * std::max(x, 1.0) : 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-14 * x) return next;
    x = next;
  }
  return x;
}

double chisq_sf(double x, int df) {
  if (df < 1) throw InvalidInput("chisq_sf: df must be >= 1");
  if (!(x >= 0.0)) throw InvalidInput("chisq_sf: x must be nonnegative");
  return gamma_q(0.5 * df, 0.5 * x);
}

double chisq_cdf(double x, int df) {
  if (df < 1) throw InvalidInput("chisq_cdf: df must be >= 1");
  if (!(x >= 0.0)) throw InvalidInput("chisq_cdf: x must be nonnegative");
  return gamma_p(0.5 * df, 0.5 * x);
}

}  // namespace mcar
