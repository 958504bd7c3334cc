#include <chrono>
#include <cmath>
#include <exception>

#include <omp.h>

#include "mcar/bench.hpp"
#include "mcar/error.hpp"

namespace mcar {

std::optional<Method> parse_method(std::string_view s) {
  if (s == "an") return Method::An;
  if (s == "an-prime" || s == "an_prime") return Method::AnPrime;
  if (s == "little") return Method::LittleD2;
  return std::nullopt;
}

std::string_view method_flag(Method m) {
  switch (m) {
    case Method::An: return "an";
    case Method::AnPrime: return "an-prime";
    case Method::LittleD2: return "little";
  }
  return "unknown";
}

void apply_profile(BenchConfig& cfg, Profile p) {
  if (p == Profile::Desk) {
    cfg.replications = 500;
    cfg.sample_sizes = {100, 200};
    cfg.rates = {0.05, 0.15, 0.30};
  } else {
    cfg.replications = 2000;
    cfg.sample_sizes = {100, 200, 300};
    cfg.rates = {0.03, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
  }
}

bool CellResult::same_outcome(const CellResult& o) const {
  return method == o.method && scenario == o.scenario && n == o.n && rate == o.rate &&
         replications == o.replications && valid == o.valid && rejections == o.rejections &&
         failures == o.failures && rejection_rate == o.rejection_rate && se == o.se;
}

bool BenchResult::any_cell_all_failed() const {
  for (const auto& c : cells)
    if (c.replications > 0 && c.failures == c.replications) return true;
  return false;
}

const CellResult* BenchResult::find(Method m, std::string_view scenario, std::size_t n, double rate) const {
  for (const auto& c : cells)
    if (c.method == m && c.scenario == scenario && c.n == n && c.rate == rate) return &c;
  return nullptr;
}

bool BenchResult::same_outcome(const BenchResult& o) const {
  if (cells.size() != o.cells.size()) return false;
  for (std::size_t k = 0; k < cells.size(); ++k)
    if (!cells[k].same_outcome(o.cells[k])) return false;
  return true;
}

ScenarioSpec cell_scenario(const ScenarioSpec& tmpl, std::size_t n, double rate) {
  ScenarioSpec s = tmpl;
  s.n = n;
  for (auto& m : s.mechanisms) m.rate = rate;
  return s;
}

std::vector<Outcome> replicate(const ScenarioSpec& cell, const std::vector<Method>& methods, Rng& rng,
                               const BenchConfig& cfg) {
  std::vector<Outcome> out(methods.size());
  IncompleteMatrix data;
  try {
    data = run_scenario(cell, rng);
  } catch (const std::exception&) {
    for (auto& o : out) o.failed = true;
    return out;
  }
  const ColumnRoles roles = classify_columns(data);

  for (std::size_t k = 0; k < methods.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    try {
      TestReport r;
      switch (methods[k]) {
        case Method::An: r = test_an(data, roles, cfg.test_options); break;
        case Method::AnPrime: r = test_an_prime(data, roles, cfg.test_options); break;
        case Method::LittleD2: r = little_d2(data, cfg.em_options, cfg.test_options); break;
      }
      out[k].p_value = r.p_value;
      out[k].rejected = r.p_value < cfg.alpha;
    } catch (const std::exception&) {
      out[k].failed = true;
    }
    out[k].runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return out;
}

namespace {

struct Cell {
  std::size_t scenario_index;
  std::size_t n_index;
  std::size_t rate_index;
  ScenarioSpec spec;
};

std::vector<Cell> enumerate_cells(const BenchConfig& cfg) {
  if (cfg.replications < 1) throw InvalidInput("bench: replications must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw InvalidInput("bench: alpha must lie in (0, 1)");
  if (cfg.methods.empty()) throw InvalidInput("bench: no methods selected");
  std::vector<Cell> cells;
  for (std::size_t s = 0; s < cfg.scenarios.size(); ++s)
    for (std::size_t ni = 0; ni < cfg.sample_sizes.size(); ++ni)
      for (std::size_t ri = 0; ri < cfg.rates.size(); ++ri)
        cells.push_back({s, ni, ri, cell_scenario(cfg.scenarios[s], cfg.sample_sizes[ni], cfg.rates[ri])});
  return cells;
}

Rng replication_stream(const BenchConfig& cfg, const Cell& c, std::size_t rep) {
  return Rng::substream(cfg.master_seed, {c.scenario_index, c.n_index, c.rate_index, rep});
}

// Reduction in replication order.
void reduce(const BenchConfig& cfg, const Cell& c, const std::vector<Outcome>& outcomes,
            BenchResult& result) {
  const std::size_t m = cfg.methods.size();
  for (std::size_t k = 0; k < m; ++k) {
    CellResult r;
    r.method = cfg.methods[k];
    r.scenario = c.spec.name;
    r.n = c.spec.n;
    r.rate = cfg.rates[c.rate_index];
    r.replications = cfg.replications;
    double runtime = 0.0;
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
      const Outcome& o = outcomes[rep * m + k];
      runtime += o.runtime_ms;
      if (o.failed) ++r.failures;
      else if (o.rejected) ++r.rejections;
    }
    r.valid = r.replications - r.failures;
    if (r.valid > 0) {
      r.rejection_rate = static_cast<double>(r.rejections) / static_cast<double>(r.valid);
      r.se = std::sqrt(r.rejection_rate * (1.0 - r.rejection_rate) / static_cast<double>(r.valid));
    }
    r.mean_runtime_ms = runtime / static_cast<double>(cfg.replications);
    result.cells.push_back(std::move(r));
  }
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
  const auto cells = enumerate_cells(cfg);
  const std::size_t m = cfg.methods.size();
  const std::size_t reps = cfg.replications;
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();

  BenchResult result;
  std::vector<Outcome> outcomes(reps * m);
  for (const auto& c : cells) {
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
    for (std::size_t rep = 0; rep < reps; ++rep) {
      Rng rng = replication_stream(cfg, c, rep);
      const auto o = replicate(c.spec, cfg.methods, rng, cfg);
      for (std::size_t k = 0; k < m; ++k) outcomes[rep * m + k] = o[k];
    }
    reduce(cfg, c, outcomes, result);
  }
  return result;
}

BenchResult run_bench_serial(const BenchConfig& cfg) {
  const auto cells = enumerate_cells(cfg);
  const std::size_t m = cfg.methods.size();
  BenchResult result;
  std::vector<Outcome> outcomes(cfg.replications * m);
  for (const auto& c : cells) {
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
      Rng rng = replication_stream(cfg, c, rep);
      const auto o = replicate(c.spec, cfg.methods, rng, cfg);
      for (std::size_t k = 0; k < m; ++k) outcomes[rep * m + k] = o[k];
    }
    reduce(cfg, c, outcomes, result);
  }
  return result;
}

std::vector<double> collect_p_values(const ScenarioSpec& cell, Method method, std::size_t replications,
                                     std::uint64_t seed, const BenchConfig& cfg) {
  const std::vector<Method> methods{method};
  std::vector<Outcome> outcomes(replications);
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (std::size_t rep = 0; rep < replications; ++rep) {
    Rng rng = Rng::substream(seed, {rep});
    outcomes[rep] = replicate(cell, methods, rng, cfg)[0];
  }
  std::vector<double> p;
  for (const auto& o : outcomes)
    if (!o.failed) p.push_back(o.p_value);
  return p;
}

}  // namespace mcar
