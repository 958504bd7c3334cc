#include <charconv>
#include <fstream>
#include <sstream>

#include "mcar/bench.hpp"
#include "mcar/error.hpp"

namespace mcar {

namespace {

bool is_scenario_key(const std::string& k) {
  return k == "name" || k == "description" || k == "distribution" || k == "dim" ||
         k == "scale_offdiag" || k == "n" || k == "mechanism";
}

template <typename T>
T number(const std::string& text, const KeyValue& kv) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty())
    throw ParseError("invalid value '" + text + "' for '" + kv.key + "'", kv.line, 1);
  return v;
}

template <typename T>
std::vector<T> number_list(const KeyValue& kv) {
  std::vector<T> out;
  std::stringstream ss(kv.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    if (first == std::string::npos) continue;
    out.push_back(number<T>(item.substr(first, last - first + 1), kv));
  }
  return out;
}

}  // namespace

BenchConfig parse_bench_config(std::istream& in, const std::filesystem::path& base_dir) {
  const auto kvs = parse_key_values(in);
  BenchConfig cfg;
  apply_profile(cfg, Profile::Desk);

  // Profile first, explicit keys override it.
  for (const auto& kv : kvs) {
    if (kv.key != "profile") continue;
    if (kv.value == "desk") apply_profile(cfg, Profile::Desk);
    else if (kv.value == "paper") apply_profile(cfg, Profile::Paper);
    else throw ParseError("unknown profile '" + kv.value + "'", kv.line, 1);
  }

  std::vector<KeyValue> inline_scenario;
  for (const auto& kv : kvs) {
    if (kv.key == "profile") continue;
    if (kv.key == "scenario") {
      auto s = find_builtin(kv.value);
      if (!s) throw ParseError("unknown built-in scenario '" + kv.value + "'", kv.line, 1);
      cfg.scenarios.push_back(std::move(*s));
    } else if (kv.key == "scenario_file") {
      std::ifstream f(base_dir / kv.value);
      if (!f) throw ParseError("cannot open scenario file '" + kv.value + "'", kv.line, 1);
      cfg.scenarios.push_back(parse_scenario(f));
    } else if (kv.key == "rates") {
      cfg.rates = number_list<double>(kv);
    } else if (kv.key == "sample_sizes") {
      cfg.sample_sizes = number_list<std::size_t>(kv);
    } else if (kv.key == "methods") {
      cfg.methods.clear();
      std::stringstream ss(kv.value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (item == "all") {
          cfg.methods = {Method::An, Method::AnPrime, Method::LittleD2};
          continue;
        }
        const auto m = parse_method(item);
        if (!m) throw ParseError("unknown method '" + item + "'", kv.line, 1);
        cfg.methods.push_back(*m);
      }
    } else if (kv.key == "replications") {
      cfg.replications = number<std::size_t>(kv.value, kv);
    } else if (kv.key == "alpha") {
      cfg.alpha = number<double>(kv.value, kv);
    } else if (kv.key == "seed") {
      cfg.master_seed = number<std::uint64_t>(kv.value, kv);
    } else if (kv.key == "threads") {
      cfg.threads = number<int>(kv.value, kv);
    } else if (kv.key == "df_mode") {
      if (kv.value == "nominal") cfg.test_options.df_mode = DfMode::Nominal;
      else if (kv.value == "rank") cfg.test_options.df_mode = DfMode::Rank;
      else throw ParseError("unknown df_mode '" + kv.value + "'", kv.line, 1);
    } else if (is_scenario_key(kv.key)) {
      inline_scenario.push_back(kv);
    } else {
      throw ParseError("unknown key '" + kv.key + "'", kv.line, 1);
    }
  }
  if (!inline_scenario.empty()) {
    ScenarioSpec s = parse_scenario(inline_scenario);
    if (s.name.empty()) s.name = "inline";
    cfg.scenarios.push_back(std::move(s));
  }

  if (cfg.scenarios.empty()) throw ParseError("bench config names no scenario", 0, 1);
  if (cfg.replications < 1) throw ParseError("replications must be >= 1", 0, 1);
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ParseError("alpha must lie in (0, 1)", 0, 1);
  if (cfg.methods.empty()) throw ParseError("no methods selected", 0, 1);
  return cfg;
}

}  // namespace mcar
