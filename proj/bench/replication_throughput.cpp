// Replications per second of the serial reference loop against the OpenMP
// loop, on one desk-sized grid. Usage: replication_throughput [reps] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "mcar/bench.hpp"

int main(int argc, char** argv) {
  using clock = std::chrono::steady_clock;

  mcar::BenchConfig cfg;
  cfg.scenarios = {*mcar::find_builtin("2x3y-normal-mar1to9"), *mcar::find_builtin("2x3y-clayton-exp1-mcar")};
  cfg.sample_sizes = {200};
  cfg.rates = {0.05, 0.30};
  cfg.replications = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 200;
  cfg.threads = argc > 2 ? std::atoi(argv[2]) : omp_get_max_threads();

  const std::size_t total = cfg.replications * cfg.scenarios.size() * cfg.sample_sizes.size() * cfg.rates.size();

  auto t0 = clock::now();
  const auto serial = mcar::run_bench_serial(cfg);
  auto t1 = clock::now();
  const auto parallel = mcar::run_bench(cfg);
  auto t2 = clock::now();

  const double ts = std::chrono::duration<double>(t1 - t0).count();
  const double tp = std::chrono::duration<double>(t2 - t1).count();
  std::printf("replications  %zu (x %zu methods)\n", total, cfg.methods.size());
  std::printf("serial        %8.3f s  %9.1f rep/s\n", ts, total / ts);
  std::printf("openmp (%2d)   %8.3f s  %9.1f rep/s\n", cfg.threads, tp, total / tp);
  std::printf("speedup       %8.2f\n", ts / tp);
  std::printf("identical     %s\n", serial.same_outcome(parallel) ? "yes" : "NO");
  return serial.same_outcome(parallel) ? 0 : 1;
}
