#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcar/bench.hpp"
#include "mcar/data.hpp"
#include "mcar/error.hpp"
#include "mcar/little.hpp"
#include "mcar/simgen.hpp"
#include "mcar/ustat.hpp"

namespace mcar::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string_view reason_text(InapplicableTest::Reason r) {
  switch (r) {
    case InapplicableTest::Reason::NothingToTest: return "nothing to test";
    case InapplicableTest::Reason::OldTestInapplicable: return "no complete column";
    case InapplicableTest::Reason::SinglePattern: return "single missingness pattern";
    case InapplicableTest::Reason::DegenerateSample: return "degenerate sample";
    case InapplicableTest::Reason::FullyMissingRow: return "fully missing row";
  }
  return "inapplicable";
}

struct TestArgs {
  std::string file;
  std::string na = "NA";
  std::string method = "an-prime";
  double alpha = 0.05;
  std::vector<std::size_t> y_cols;
  std::string transform = "identity";
  std::string format = "text";
  std::string df_mode = "nominal";
  bool verbose = false;
};

struct SimulateArgs {
  std::string scenario;
  std::string out_csv;
  std::string na = "NA";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::string format = "text";
};

struct BenchArgs {
  std::string config;
  std::string out_dir;
  std::optional<std::string> profile;
  std::optional<std::size_t> replications;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> method;
  std::optional<int> threads;
  bool serial = false;
  std::string format = "text";
};

std::vector<Method> methods_from_flag(const std::string& flag) {
  if (flag == "all") return {Method::An, Method::AnPrime, Method::LittleD2};
  const auto m = parse_method(flag);
  if (!m) throw InvalidInput("unknown method '" + flag + "'");
  return {*m};
}

Transform transform_from_flag(const std::string& flag) {
  if (flag == "identity") return Transform::Identity;
  if (flag == "log") return Transform::Log;
  if (flag == "rank") return Transform::Rank;
  throw InvalidInput("unknown transform '" + flag + "'");
}

std::string pair_label(const PairStat& s, const IncompleteMatrix& m, const ColumnRoles& roles) {
  const auto& names = m.names();
  const std::string data = s.kind == PairKind::X ? names[roles.x[s.u]] : names[roles.y[s.u]] + "~";
  return data + " | R(" + names[roles.y[s.v]] + ")";
}

json report_json(const TestReport& r, const IncompleteMatrix& m, const ColumnRoles& roles, double alpha,
                 bool verbose) {
  json j{{"method", method_name(r.method)},
         {"statistic", r.statistic},
         {"df", r.df},
         {"p_value", r.p_value},
         {"reject", r.p_value < alpha},
         {"rank_deficient", r.rank_deficient},
         {"rank", r.rank},
         {"warnings", r.warnings}};
  if (verbose && !r.pair_stats.empty()) {
    json pairs = json::array();
    for (const auto& s : r.pair_stats)
      pairs.push_back({{"kind", s.kind == PairKind::X ? "X" : "Y"},
                       {"data_column", m.names()[s.kind == PairKind::X ? roles.x[s.u] : roles.y[s.u]]},
                       {"indicator_column", m.names()[roles.y[s.v]]},
                       {"value", s.value}});
    j["pairs"] = pairs;
  }
  return j;
}

void print_report(std::ostream& out, const TestReport& r, const IncompleteMatrix& m, const ColumnRoles& roles,
                  double alpha, bool verbose) {
  out << "method          " << method_name(r.method) << '\n'
      << "statistic       " << sig6(r.statistic) << '\n'
      << "df              " << r.df << '\n'
      << "p-value         " << sig6(r.p_value) << '\n'
      << "rank-deficient  " << (r.rank_deficient ? "yes" : "no");
  if (r.rank_deficient) out << " (rank " << r.rank << ")";
  out << '\n'
      << "decision        " << (r.p_value < alpha ? "reject MCAR" : "do not reject MCAR") << " at alpha "
      << sig6(alpha) << '\n';
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  if (verbose && !r.pair_stats.empty()) {
    out << "pair statistics\n";
    for (const auto& s : r.pair_stats) {
      char line[160];
      std::snprintf(line, sizeof line, "  %-3s %-32s % .10e\n", s.kind == PairKind::X ? "X" : "Y",
                    pair_label(s, m, roles).c_str(), s.value);
      out << line;
    }
  }
}

int cmd_test(const TestArgs& a, std::ostream& out) {
  if (!(a.alpha > 0.0 && a.alpha < 1.0)) throw InvalidInput("--alpha must lie in (0, 1)");
  const auto methods = methods_from_flag(a.method);
  const Transform transform = transform_from_flag(a.transform);
  TestOptions opts;
  if (a.df_mode == "rank") opts.df_mode = DfMode::Rank;
  else if (a.df_mode != "nominal") throw InvalidInput("unknown df mode '" + a.df_mode + "'");

  IncompleteMatrix data = read_csv(fs::path(a.file), CsvOptions{a.na});
  data = apply_transform(data, transform);
  std::vector<std::size_t> force_y;
  for (auto c : a.y_cols) {
    if (c == 0 || c > data.cols())
      throw InvalidInput("--y-cols: column " + std::to_string(c) + " out of range 1.." +
                         std::to_string(data.cols()));
    force_y.push_back(c - 1);
  }
  const ColumnRoles roles = classify_columns(data, force_y);

  const bool as_json = a.format == "json";
  json results = json::array();
  std::size_t completed = 0;
  for (std::size_t k = 0; k < methods.size(); ++k) {
    try {
      TestReport r;
      switch (methods[k]) {
        case Method::An: r = test_an(data, roles, opts); break;
        case Method::AnPrime: r = test_an_prime(data, roles, opts); break;
        case Method::LittleD2: r = little_d2(data, EmOptions{}, opts); break;
      }
      ++completed;
      if (as_json) {
        results.push_back(report_json(r, data, roles, a.alpha, a.verbose));
      } else {
        if (k > 0) out << '\n';
        print_report(out, r, data, roles, a.alpha, a.verbose);
      }
    } catch (const InapplicableTest& e) {
      if (as_json) {
        results.push_back({{"method", method_name(methods[k])},
                           {"inapplicable", reason_text(e.reason())},
                           {"message", e.what()}});
      } else {
        if (k > 0) out << '\n';
        out << "method          " << method_name(methods[k]) << '\n'
            << "inapplicable    " << e.what() << '\n';
      }
    } catch (const NumericalError& e) {
      if (as_json) {
        results.push_back({{"method", method_name(methods[k])}, {"inapplicable", "numerical failure"},
                           {"message", e.what()}});
      } else {
        if (k > 0) out << '\n';
        out << "method          " << method_name(methods[k]) << '\n'
            << "inapplicable    numerical failure: " << e.what() << '\n';
      }
    }
  }

  if (as_json) {
    std::vector<std::string> x_names, y_names;
    for (auto c : roles.x) x_names.push_back(data.names()[c]);
    for (auto c : roles.y) y_names.push_back(data.names()[c]);
    json doc{{"file", a.file}, {"n", data.rows()}, {"p", roles.p()}, {"q", roles.q()},
             {"x_columns", x_names}, {"y_columns", y_names}, {"alpha", a.alpha},
             {"transform", a.transform}, {"results", results}};
    out << doc.dump(2) << '\n';
  }
  return completed > 0 ? kOk : kInapplicable;
}

ScenarioSpec load_scenario(const std::string& name_or_path) {
  if (auto s = find_builtin(name_or_path)) return *s;
  std::ifstream in(name_or_path);
  if (!in) throw InvalidInput("'" + name_or_path + "' is neither a built-in scenario nor a readable file");
  ScenarioSpec s = parse_scenario(in);
  if (s.name.empty()) s.name = fs::path(name_or_path).stem().string();
  return s;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  ScenarioSpec s = load_scenario(a.scenario);
  if (a.seed) s.seed = *a.seed;
  if (a.n) s.n = *a.n;
  validate(s);
  const IncompleteMatrix data = run_scenario(s);
  write_csv(data, fs::path(a.out_csv), CsvOptions{a.na});

  if (a.format == "json") {
    json cols = json::array();
    for (std::size_t j = 0; j < data.cols(); ++j) {
      const auto miss = data.missing_count(j);
      cols.push_back({{"column", data.names()[j]}, {"missing", miss},
                      {"rate", static_cast<double>(miss) / static_cast<double>(data.rows())}});
    }
    out << json{{"scenario", s.name}, {"n", data.rows()}, {"seed", s.seed}, {"output", a.out_csv},
                {"columns", cols}}
               .dump(2)
        << '\n';
    return kOk;
  }
  out << "scenario " << s.name << ", n = " << data.rows() << ", seed = " << s.seed << '\n'
      << "wrote " << a.out_csv << '\n'
      << "column    missing   rate\n";
  for (std::size_t j = 0; j < data.cols(); ++j) {
    const auto miss = data.missing_count(j);
    char line[96];
    std::snprintf(line, sizeof line, "%-9s %7zu   %.4f\n", data.names()[j].c_str(), miss,
                  static_cast<double>(miss) / static_cast<double>(data.rows()));
    out << line;
  }
  return kOk;
}

BenchConfig load_bench_config(const std::string& name_or_path) {
  if (auto s = find_builtin(name_or_path)) {
    BenchConfig cfg;
    apply_profile(cfg, Profile::Desk);
    cfg.scenarios.push_back(*s);
    return cfg;
  }
  std::ifstream in(name_or_path);
  if (!in) throw InvalidInput("'" + name_or_path + "' is neither a built-in scenario nor a readable file");
  return parse_bench_config(in, fs::path(name_or_path).parent_path());
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  BenchConfig cfg = load_bench_config(a.config);
  if (a.profile) {
    if (*a.profile == "desk") apply_profile(cfg, Profile::Desk);
    else if (*a.profile == "paper") apply_profile(cfg, Profile::Paper);
    else throw InvalidInput("unknown profile '" + *a.profile + "'");
  }
  if (a.replications) cfg.replications = *a.replications;
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.method) cfg.methods = methods_from_flag(*a.method);
  if (a.threads) cfg.threads = *a.threads;

  const BenchResult result = a.serial ? run_bench_serial(cfg) : run_bench(cfg);
  fs::create_directories(a.out_dir);
  const fs::path csv = fs::path(a.out_dir) / "results.csv";
  const fs::path plot = fs::path(a.out_dir) / "plotdata.csv";
  export_csv(result, csv);
  export_plotdata(result, plot);

  if (a.format == "json") {
    json cells = json::array();
    for (const auto& c : result.cells)
      cells.push_back({{"method", method_name(c.method)}, {"scenario", c.scenario}, {"n", c.n},
                       {"rate_m", c.rate}, {"rejection_rate", c.rejection_rate}, {"se", c.se},
                       {"failures", c.failures}, {"replications", c.replications},
                       {"mean_runtime_ms", c.mean_runtime_ms}});
    out << json{{"results_csv", csv.string()}, {"plotdata_csv", plot.string()}, {"cells", cells}}.dump(2)
        << '\n';
  } else {
    out << "method      scenario                          n   rate    reject      se  failures\n";
    for (const auto& c : result.cells) {
      char line[160];
      std::snprintf(line, sizeof line, "%-11s %-30s %4zu  %5.3f  %7.4f  %6.4f  %8zu\n",
                    std::string(method_name(c.method)).c_str(), c.scenario.c_str(), c.n, c.rate,
                    c.rejection_rate, c.se, c.failures);
      out << line;
    }
    out << "wrote " << csv.string() << " and " << plot.string() << '\n';
  }
  if (result.any_cell_all_failed()) {
    err << "error: at least one grid cell failed in every replication\n";
    return kBenchCellFailed;
  }
  return kOk;
}

int cmd_scenario_list(const std::string& format, std::ostream& out) {
  if (format == "json") {
    json list = json::array();
    for (const auto& s : builtin_scenarios())
      list.push_back({{"name", s.name}, {"description", s.description},
                      {"distribution", distribution_name(s.distribution.kind)}, {"dim", s.distribution.dim}});
    out << list.dump(2) << '\n';
    return kOk;
  }
  for (const auto& s : builtin_scenarios()) {
    char line[256];
    std::snprintf(line, sizeof line, "%-34s %s\n", s.name.c_str(), s.description.c_str());
    out << line;
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"MCAR tests for incomplete numeric data", "mcartest"};
  app.require_subcommand(1);

  TestArgs ta;
  auto* test = app.add_subcommand("test", "Test a CSV file for MCAR");
  test->add_option("file", ta.file, "CSV file with a header row")->required();
  test->add_option("--na", ta.na, "Missing-value marker (empty fields are always missing)");
  test->add_option("--method", ta.method, "an | an-prime | little | all")
      ->check(CLI::IsMember({"an", "an-prime", "little", "all"}));
  test->add_option("--alpha", ta.alpha, "Significance level");
  test->add_option("--y-cols", ta.y_cols, "1-based columns forced into the incomplete group")->delimiter(',');
  test->add_option("--transform", ta.transform, "identity | log | rank")
      ->check(CLI::IsMember({"identity", "log", "rank"}));
  test->add_option("--df-mode", ta.df_mode, "nominal | rank")->check(CLI::IsMember({"nominal", "rank"}));
  test->add_option("--format", ta.format, "text | json")->check(CLI::IsMember({"text", "json"}));
  test->add_flag("-v,--verbose", ta.verbose, "Print the per-pair statistic table");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Generate and ampute one dataset");
  simulate->add_option("scenario", sa.scenario, "Built-in scenario name or scenario config file")->required();
  simulate->add_option("out", sa.out_csv, "Output CSV path")->required();
  simulate->add_option("--na", sa.na, "Missing-value marker written to the CSV");
  simulate->add_option("--seed", sa.seed, "Override the scenario seed");
  simulate->add_option("--n", sa.n, "Override the sample size");
  simulate->add_option("--format", sa.format, "text | json")->check(CLI::IsMember({"text", "json"}));

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Monte Carlo size and power study");
  bench->add_option("config", ba.config, "Bench config file or built-in scenario name")->required();
  bench->add_option("out_dir", ba.out_dir, "Directory for results.csv and plotdata.csv")->required();
  bench->add_option("--profile", ba.profile, "desk | paper")->check(CLI::IsMember({"desk", "paper"}));
  bench->add_option("--replications", ba.replications, "Replications per cell");
  bench->add_option("--seed", ba.seed, "Master seed");
  bench->add_option("--method", ba.method, "an | an-prime | little | all")
      ->check(CLI::IsMember({"an", "an-prime", "little", "all"}));
  bench->add_option("--threads", ba.threads, "Worker threads (0 = all)");
  bench->add_flag("--serial", ba.serial, "Use the single-threaded reference loop");
  bench->add_option("--format", ba.format, "text | json")->check(CLI::IsMember({"text", "json"}));

  std::string list_format = "text";
  auto* list = app.add_subcommand("scenario-list", "List built-in scenarios");
  list->add_option("--format", list_format, "text | json")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*test) return cmd_test(ta, out);
    if (*simulate) return cmd_simulate(sa, out);
    if (*bench) return cmd_bench(ba, out, err);
    return cmd_scenario_list(list_format, out);
  } catch (const InapplicableTest& e) {
    out << "inapplicable: " << e.what() << '\n';
    return kInapplicable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace mcar::cli
