#pragma once

// Complete-sample generators and amputation mechanisms for size/power studies.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcar/data.hpp"
#include "mcar/numerics.hpp"
#include "mcar/rng.hpp"

namespace mcar {

enum class DistributionKind { StdNormal, ClaytonExp1, ClaytonChisq4, StudentT2 };

struct DistributionSpec {
  DistributionKind kind = DistributionKind::StdNormal;
  std::size_t dim = 1;
  /// Off-diagonal of the t2 scale matrix (unit diagonal). Ignored otherwise.
  double scale_offdiag = 0.0;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

enum class MechanismKind { Mcar, Mar1ToX, MarRank, MnarUpperCensor };

/// Column indices are 0-based. For the MAR kinds controls[k] drives targets[k].
struct MechanismSpec {
  MechanismKind kind = MechanismKind::Mcar;
  std::vector<std::size_t> targets;
  std::vector<std::size_t> controls;
  double rate = 0.1;
  double x = 9.0;

  friend bool operator==(const MechanismSpec&, const MechanismSpec&) = default;
};

struct ScenarioSpec {
  std::string name;
  std::string description;
  DistributionSpec distribution;
  std::size_t n = 200;
  std::vector<MechanismSpec> mechanisms;  // applied in order
  std::uint64_t seed = 1;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

std::string_view distribution_name(DistributionKind k);
std::string_view mechanism_name(MechanismKind k);
std::optional<DistributionKind> parse_distribution(std::string_view s);
std::optional<MechanismKind> parse_mechanism(std::string_view s);

/// n x dim complete sample.
Matrix sample(const DistributionSpec& dist, std::size_t n, Rng& rng);

/// Marshall-Olkin draw from the Clayton(1) copula: n x dim uniforms.
Matrix clayton_uniforms(std::size_t dim, std::size_t n, Rng& rng);

/// round(rate * n); throws InvalidInput below 1 and WouldEmptyColumn at n.
std::size_t deletion_count(double rate, std::size_t n);

/// Deletes round(rate * n) cells from each target column of a complete sample.
IncompleteMatrix ampute(const Matrix& data, const MechanismSpec& mech, Rng& rng);

/// Applies one mechanism to `current`. Weights and censoring read `original`,
/// the complete sample, so controls holed by earlier mechanisms still work.
/// Only currently observed cells of a target are eligible for deletion.
void apply_mechanism(IncompleteMatrix& current, const Matrix& original, const MechanismSpec& mech,
                     Rng& rng);

IncompleteMatrix run_scenario(const ScenarioSpec& s);
IncompleteMatrix run_scenario(const ScenarioSpec& s, Rng& rng);

void validate(const ScenarioSpec& s);

// Plain-text key = value configuration.

struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// '#' starts a comment; blank lines are skipped. Throws ParseError.
std::vector<KeyValue> parse_key_values(std::istream& in);

/// Scenario keys: name, description, distribution, dim, scale_offdiag, n,
/// seed, and repeated `mechanism = <kind> targets=.. [controls=..] rate=.. [x=..]`
/// with 1-based column lists. Unknown keys are an error unless `allow_unknown`.
ScenarioSpec parse_scenario(const std::vector<KeyValue>& kv, bool allow_unknown = false);
ScenarioSpec parse_scenario(std::istream& in);
std::string format_scenario(const ScenarioSpec& s);

/// Named scenarios covering the published simulation settings.
const std::vector<ScenarioSpec>& builtin_scenarios();
std::optional<ScenarioSpec> find_builtin(std::string_view name);

}  // namespace mcar
