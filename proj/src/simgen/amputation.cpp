#include <algorithm>
#include <cmath>
#include <numeric>

#include "mcar/error.hpp"
#include "mcar/simgen.hpp"

namespace mcar {

std::string_view mechanism_name(MechanismKind k) {
  switch (k) {
    case MechanismKind::Mcar: return "mcar";
    case MechanismKind::Mar1ToX: return "mar_1_to_x";
    case MechanismKind::MarRank: return "mar_rank";
    case MechanismKind::MnarUpperCensor: return "mnar_upper_censor";
  }
  return "unknown";
}

std::optional<MechanismKind> parse_mechanism(std::string_view s) {
  for (auto k : {MechanismKind::Mcar, MechanismKind::Mar1ToX, MechanismKind::MarRank,
                 MechanismKind::MnarUpperCensor})
    if (mechanism_name(k) == s) return k;
  return std::nullopt;
}

std::size_t deletion_count(double rate, std::size_t n) {
  if (!(rate > 0.0 && rate < 1.0)) throw InvalidInput("amputation rate must lie in (0, 1)");
  const auto k = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
  if (k < 1) throw InvalidInput("amputation rate * n rounds to zero deletions");
  if (k >= n) throw WouldEmptyColumn("amputation would delete every cell of a column");
  return k;
}

namespace {

bool is_mar(MechanismKind k) { return k == MechanismKind::Mar1ToX || k == MechanismKind::MarRank; }

void validate_mechanism(const MechanismSpec& mech, std::size_t cols) {
  if (mech.targets.empty()) throw InvalidInput("mechanism has no target columns");
  for (std::size_t t : mech.targets)
    if (t >= cols) throw InvalidInput("mechanism target column out of range");
  if (!(mech.rate > 0.0 && mech.rate < 1.0)) throw InvalidInput("amputation rate must lie in (0, 1)");
  if (!is_mar(mech.kind)) return;
  if (mech.controls.size() != mech.targets.size())
    throw InvalidInput("MAR mechanism needs one control column per target");
  for (std::size_t c : mech.controls) {
    if (c >= cols) throw InvalidInput("mechanism control column out of range");
    if (std::find(mech.targets.begin(), mech.targets.end(), c) != mech.targets.end())
      throw InvalidInput("MAR control column is also a target");
  }
  if (mech.kind == MechanismKind::Mar1ToX && !(mech.x > 0.0))
    throw InvalidInput("mar_1_to_x ratio must be positive");
}

// k draws without replacement, each proportional to the remaining weights.
std::vector<std::size_t> weighted_without_replacement(std::vector<std::size_t> candidates,
                                                      std::vector<double> weights, std::size_t k,
                                                      Rng& rng) {
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (std::size_t draw = 0; draw < k; ++draw) {
    const double target = rng.uniform() * total;
    double cum = 0.0;
    std::size_t pick = candidates.size() - 1;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      cum += weights[c];
      if (target < cum) {
        pick = c;
        break;
      }
    }
    chosen.push_back(candidates[pick]);
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
    weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(pick));
    total = std::accumulate(weights.begin(), weights.end(), 0.0);
  }
  return chosen;
}

std::vector<std::size_t> uniform_without_replacement(std::vector<std::size_t> candidates,
                                                     std::size_t k, Rng& rng) {
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(candidates.size() - i);
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(k);
  return candidates;
}

}  // namespace

void apply_mechanism(IncompleteMatrix& current, const Matrix& original, const MechanismSpec& mech,
                     Rng& rng) {
  const std::size_t n = original.rows();
  if (current.rows() != n || current.cols() != original.cols())
    throw InvalidInput("apply_mechanism: table shapes differ");
  validate_mechanism(mech, original.cols());
  const std::size_t k = deletion_count(mech.rate, n);

  for (std::size_t t = 0; t < mech.targets.size(); ++t) {
    const std::size_t col = mech.targets[t];
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < n; ++i)
      if (current.observed(i, col)) candidates.push_back(i);
    if (k >= candidates.size())
      throw WouldEmptyColumn("amputation would delete every remaining cell of column " +
                             std::to_string(col + 1));

    std::vector<std::size_t> rows;
    switch (mech.kind) {
      case MechanismKind::Mcar:
        rows = uniform_without_replacement(std::move(candidates), k, rng);
        break;
      case MechanismKind::Mar1ToX: {
        const auto control = original.col(mech.controls[t]);
        const double med = median(control);
        std::vector<double> w;
        for (std::size_t i : candidates) w.push_back(control[i] <= med ? 1.0 : mech.x);
        rows = weighted_without_replacement(std::move(candidates), std::move(w), k, rng);
        break;
      }
      case MechanismKind::MarRank: {
        const auto ranks = average_ranks(original.col(mech.controls[t]));
        std::vector<double> w;
        for (std::size_t i : candidates) w.push_back(ranks[i]);
        rows = weighted_without_replacement(std::move(candidates), std::move(w), k, rng);
        break;
      }
      case MechanismKind::MnarUpperCensor: {
        const auto values = original.col(col);
        std::stable_sort(candidates.begin(), candidates.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
        candidates.resize(k);
        rows = std::move(candidates);
        break;
      }
    }
    for (std::size_t i : rows) current.set_missing(i, col);
  }
}

IncompleteMatrix ampute(const Matrix& data, const MechanismSpec& mech, Rng& rng) {
  IncompleteMatrix out = IncompleteMatrix::complete(data);
  apply_mechanism(out, data, mech, rng);
  return out;
}

}  // namespace mcar
