#pragma once

// Monte Carlo estimation of empirical size and power over a grid of
// (scenario, sample size, missingness rate) cells.
//
// run_bench() spreads replications over OpenMP threads; run_bench_serial() is
// the single-threaded reference. Both give identical results: replication r of
// a cell always draws from the same RNG substream and the reduction runs in
// replication order.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mcar/little.hpp"
#include "mcar/simgen.hpp"
#include "mcar/ustat.hpp"

namespace mcar {

std::optional<Method> parse_method(std::string_view s);  // an | an-prime | little
std::string_view method_flag(Method m);

struct BenchConfig {
  std::vector<ScenarioSpec> scenarios;  // templates; n and every mechanism rate are overridden per cell
  std::vector<double> rates;
  std::vector<std::size_t> sample_sizes;
  std::vector<Method> methods{Method::An, Method::AnPrime, Method::LittleD2};
  std::size_t replications = 500;
  double alpha = 0.05;
  std::uint64_t master_seed = 20240917;
  int threads = 0;  // 0 = OpenMP default
  TestOptions test_options;
  EmOptions em_options;
};

enum class Profile { Desk, Paper };
/// Desk: N = 500, n in {100, 200}, rates {0.05, 0.15, 0.30}.
/// Paper: N = 2000, n in {100, 200, 300}, rates 0.03 to 0.30.
void apply_profile(BenchConfig& cfg, Profile p);

struct CellResult {
  Method method = Method::AnPrime;
  std::string scenario;
  std::size_t n = 0;
  double rate = 0.0;
  std::size_t replications = 0;
  std::size_t valid = 0;  // replications - failures
  std::size_t rejections = 0;
  std::size_t failures = 0;
  double rejection_rate = 0.0;  // rejections / valid
  double se = 0.0;              // sqrt(r (1 - r) / valid)
  double mean_runtime_ms = 0.0;

  /// Equality ignores runtime.
  bool same_outcome(const CellResult& o) const;
};

struct BenchResult {
  std::vector<CellResult> cells;

  bool any_cell_all_failed() const;
  const CellResult* find(Method m, std::string_view scenario, std::size_t n, double rate) const;
  bool same_outcome(const BenchResult& o) const;
};

/// One replication's verdict for one method.
struct Outcome {
  bool failed = false;
  bool rejected = false;
  double p_value = 1.0;
  double runtime_ms = 0.0;
};

/// The scenario template with n and all mechanism rates replaced.
ScenarioSpec cell_scenario(const ScenarioSpec& tmpl, std::size_t n, double rate);

/// Generates one dataset from `rng` and runs every method on it.
std::vector<Outcome> replicate(const ScenarioSpec& cell, const std::vector<Method>& methods,
                               Rng& rng, const BenchConfig& cfg);

/// p-values of one method over `replications` draws of a cell, in replication
/// order; failed replications are skipped. Parallel over replications.
std::vector<double> collect_p_values(const ScenarioSpec& cell, Method method, std::size_t replications,
                                     std::uint64_t seed, const BenchConfig& cfg = {});

BenchResult run_bench(const BenchConfig& cfg);
BenchResult run_bench_serial(const BenchConfig& cfg);

/// Long format: method,scenario,n,rate_m,rejection_rate,se,failures,replications,mean_runtime_ms
void export_csv(const BenchResult& r, std::ostream& out);
void export_csv(const BenchResult& r, const std::filesystem::path& path);
/// Wide format, one panel per (scenario, n): panel,scenario,n,rate_m,<method>...
void export_plotdata(const BenchResult& r, std::ostream& out);
void export_plotdata(const BenchResult& r, const std::filesystem::path& path);

/// Keys: scenario (built-in name, repeatable), scenario_file (path relative to
/// `base_dir`), rates, sample_sizes, methods, replications, alpha, seed,
/// threads, profile, df_mode; inline scenario keys define one extra scenario.
BenchConfig parse_bench_config(std::istream& in, const std::filesystem::path& base_dir = {});

}  // namespace mcar
