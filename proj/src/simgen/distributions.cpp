#include <cmath>

#include "mcar/error.hpp"
#include "mcar/simgen.hpp"

namespace mcar {

std::string_view distribution_name(DistributionKind k) {
  switch (k) {
    case DistributionKind::StdNormal: return "std_normal";
    case DistributionKind::ClaytonExp1: return "clayton_exp1";
    case DistributionKind::ClaytonChisq4: return "clayton_chisq4";
    case DistributionKind::StudentT2: return "student_t2";
  }
  return "unknown";
}

std::optional<DistributionKind> parse_distribution(std::string_view s) {
  for (auto k : {DistributionKind::StdNormal, DistributionKind::ClaytonExp1,
                 DistributionKind::ClaytonChisq4, DistributionKind::StudentT2})
    if (distribution_name(k) == s) return k;
  return std::nullopt;
}

Matrix clayton_uniforms(std::size_t dim, std::size_t n, Rng& rng) {
  // theta = 1: frailty V ~ Gamma(1/theta) = Exp(1), U_k = (1 + E_k / V)^(-1/theta).
  Matrix u(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = rng.exponential();
    for (std::size_t k = 0; k < dim; ++k) u(i, k) = 1.0 / (1.0 + rng.exponential() / v);
  }
  return u;
}

Matrix sample(const DistributionSpec& dist, std::size_t n, Rng& rng) {
  if (dist.dim == 0) throw InvalidInput("sample: dimension must be positive");
  if (n == 0) throw InvalidInput("sample: n must be positive");
  const std::size_t d = dist.dim;

  switch (dist.kind) {
    case DistributionKind::StdNormal: {
      Matrix out(n, d);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < d; ++k) out(i, k) = rng.normal();
      return out;
    }
    case DistributionKind::ClaytonExp1: {
      Matrix out = clayton_uniforms(d, n, rng);
      for (std::size_t k = 0; k < d; ++k)
        for (double& x : out.col(k)) x = -std::log1p(-x);
      return out;
    }
    case DistributionKind::ClaytonChisq4: {
      Matrix out = clayton_uniforms(d, n, rng);
      for (std::size_t k = 0; k < d; ++k)
        for (double& x : out.col(k)) x = 2.0 * gamma_p_inverse(2.0, x);
      return out;
    }
    case DistributionKind::StudentT2: {
      if (!(dist.scale_offdiag >= 0.0 && dist.scale_offdiag < 1.0))
        throw InvalidInput("sample: t2 scale off-diagonal must lie in [0, 1)");
      SymMatrix scale(d, dist.scale_offdiag);
      for (std::size_t k = 0; k < d; ++k) scale.set(k, k, 1.0);
      const Cholesky chol(scale);
      std::vector<double> z(d);
      Matrix out(n, d);
      for (std::size_t i = 0; i < n; ++i) {
        for (auto& e : z) e = rng.normal();
        // W ~ chi2_2 = 2 * Exp(1), so sqrt(W / 2) = sqrt(Exp(1)).
        const double root = std::sqrt(rng.exponential());
        for (std::size_t k = 0; k < d; ++k) {
          double s = 0.0;
          for (std::size_t l = 0; l <= k; ++l) s += chol.lower()(k, l) * z[l];
          out(i, k) = s / root;
        }
      }
      return out;
    }
  }
  throw InvalidInput("sample: unknown distribution");
}

}  // namespace mcar
