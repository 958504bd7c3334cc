#include "mcar/error.hpp"
#include "mcar/simgen.hpp"

namespace mcar {

void validate(const ScenarioSpec& s) {
  if (s.distribution.dim == 0) throw InvalidInput("scenario '" + s.name + "': dim must be positive");
  if (s.n < 2) throw InvalidInput("scenario '" + s.name + "': n must be at least 2");
  if (s.distribution.kind == DistributionKind::StudentT2 &&
      !(s.distribution.scale_offdiag >= 0.0 && s.distribution.scale_offdiag < 1.0))
    throw InvalidInput("scenario '" + s.name + "': scale_offdiag must lie in [0, 1)");
  for (const auto& m : s.mechanisms) {
    for (std::size_t t : m.targets)
      if (t >= s.distribution.dim)
        throw InvalidInput("scenario '" + s.name + "': target column out of range");
    for (std::size_t c : m.controls)
      if (c >= s.distribution.dim)
        throw InvalidInput("scenario '" + s.name + "': control column out of range");
  }
}

IncompleteMatrix run_scenario(const ScenarioSpec& s, Rng& rng) {
  validate(s);
  const Matrix data = sample(s.distribution, s.n, rng);
  IncompleteMatrix out = IncompleteMatrix::complete(data);
  for (const auto& mech : s.mechanisms) apply_mechanism(out, data, mech, rng);
  return out;
}

IncompleteMatrix run_scenario(const ScenarioSpec& s) {
  Rng rng(s.seed);
  return run_scenario(s, rng);
}

namespace {

using DK = DistributionKind;
using MK = MechanismKind;

ScenarioSpec make(std::string name, std::string description, DK kind, std::size_t dim,
                  std::vector<MechanismSpec> mechs, double offdiag = 0.0) {
  ScenarioSpec s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.distribution = {kind, dim, offdiag};
  s.mechanisms = std::move(mechs);
  return s;
}

MechanismSpec mech(MK kind, std::vector<std::size_t> targets, std::vector<std::size_t> controls = {}) {
  MechanismSpec m;
  m.kind = kind;
  m.targets = std::move(targets);
  m.controls = std::move(controls);
  return m;
}

struct Margin {
  const char* tag;
  const char* label;
  DK kind;
  double offdiag;
};

std::vector<ScenarioSpec> build() {
  // 2X3Y layout: columns 1-2 complete, 3-5 incomplete (0-based 0,1 / 2,3,4).
  const std::vector<std::size_t> y = {2, 3, 4};
  // var. 1 controls var. 3 and var. 5, var. 2 controls var. 4.
  const std::vector<std::size_t> mar_targets = {2, 4, 3};
  const std::vector<std::size_t> mar_controls = {0, 0, 1};

  const Margin normal{"normal", "standard normal", DK::StdNormal, 0.0};
  const Margin exp1{"clayton-exp1", "Clayton(1) copula, Exp(1) margins", DK::ClaytonExp1, 0.0};
  const Margin chisq4{"clayton-chisq4", "Clayton(1) copula, chi2_4 margins", DK::ClaytonChisq4, 0.0};
  const Margin t2{"t2", "standard t2", DK::StudentT2, 0.0};
  const Margin t2_01{"t2-0.1", "t2 with scale off-diagonal 0.1", DK::StudentT2, 0.1};
  const Margin t2_05{"t2-0.5", "t2 with scale off-diagonal 0.5", DK::StudentT2, 0.5};

  std::vector<ScenarioSpec> out;
  auto name = [](const Margin& m, const char* suffix) {
    return std::string("2x3y-") + m.tag + "-" + suffix;
  };

  for (const auto& m : {normal, exp1, chisq4, t2, t2_01, t2_05})
    out.push_back(make(name(m, "mcar"), std::string("2X3Y ") + m.label + ", MCAR in vars 3-5 (size)",
                       m.kind, 5, {mech(MK::Mcar, y)}, m.offdiag));

  for (const auto& m : {normal, exp1, chisq4, t2})
    out.push_back(make(name(m, "mar1to9"),
                       std::string("2X3Y ") + m.label +
                           ", MAR 1-to-9: var 1 controls vars 3 and 5, var 2 controls var 4",
                       m.kind, 5, {mech(MK::Mar1ToX, mar_targets, mar_controls)}, m.offdiag));

  for (const auto& m : {normal, exp1, chisq4, t2})
    out.push_back(make(name(m, "marrank"),
                       std::string("2X3Y ") + m.label +
                           ", MAR rank: var 1 controls vars 3 and 5, var 2 controls var 4",
                       m.kind, 5, {mech(MK::MarRank, mar_targets, mar_controls)}, m.offdiag));

  for (const auto& m : {normal, exp1, chisq4})
    out.push_back(make(name(m, "marrank-mcar3"),
                       std::string("2X3Y ") + m.label +
                           ", MAR rank with var 3 controlling vars 4 and 5, then MCAR in var 3",
                       m.kind, 5, {mech(MK::MarRank, {3, 4}, {2, 2}), mech(MK::Mcar, {2})}, m.offdiag));

  for (const auto& m : {normal, exp1, t2, t2_01, t2_05})
    out.push_back(make(name(m, "censor"),
                       std::string("2X3Y ") + m.label + ", MNAR upper censoring of vars 3-5",
                       m.kind, 5, {mech(MK::MnarUpperCensor, y)}, m.offdiag));

  out.push_back(make("1x2y-normal-marrank", "1X2Y standard normal, MAR rank: var 1 controls vars 2 and 3",
                     DK::StdNormal, 3, {mech(MK::MarRank, {1, 2}, {0, 0})}));
  out.push_back(make("5x5y-normal-marrank", "5X5Y standard normal, MAR rank: vars 1-5 control vars 6-10",
                     DK::StdNormal, 10, {mech(MK::MarRank, {5, 6, 7, 8, 9}, {0, 1, 2, 3, 4})}));
  out.push_back(make("5x5y-normal-mcar", "5X5Y standard normal, MCAR in vars 6-10 (size)",
                     DK::StdNormal, 10, {mech(MK::Mcar, {5, 6, 7, 8, 9})}));
  return out;
}

}  // namespace

const std::vector<ScenarioSpec>& builtin_scenarios() {
  static const std::vector<ScenarioSpec> all = build();
  return all;
}

std::optional<ScenarioSpec> find_builtin(std::string_view name) {
  for (const auto& s : builtin_scenarios())
    if (s.name == name) return s;
  return std::nullopt;
}

}  // namespace mcar
