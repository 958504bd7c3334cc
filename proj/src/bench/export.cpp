#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>

#include "mcar/bench.hpp"
#include "mcar/error.hpp"

namespace mcar {

namespace {

std::string fmt(double v, int digits = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  return out;
}

}  // namespace

void export_csv(const BenchResult& r, std::ostream& out) {
  out << "method,scenario,n,rate_m,rejection_rate,se,failures,replications,mean_runtime_ms\n";
  for (const auto& c : r.cells) {
    out << method_name(c.method) << ',' << c.scenario << ',' << c.n << ',' << fmt(c.rate) << ','
        << fmt(c.rejection_rate, 10) << ',' << fmt(c.se, 10) << ',' << c.failures << ','
        << c.replications << ',' << fmt(c.mean_runtime_ms) << '\n';
  }
}

void export_csv(const BenchResult& r, const std::filesystem::path& path) {
  auto out = open_out(path);
  export_csv(r, out);
}

void export_plotdata(const BenchResult& r, std::ostream& out) {
  std::vector<Method> methods;
  for (const auto& c : r.cells)
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) methods.push_back(c.method);

  // Panels in first-appearance order; rows within a panel by rate.
  std::vector<std::pair<std::string, std::size_t>> panels;
  for (const auto& c : r.cells) {
    const std::pair<std::string, std::size_t> key{c.scenario, c.n};
    if (std::find(panels.begin(), panels.end(), key) == panels.end()) panels.push_back(key);
  }

  out << "panel,scenario,n,rate_m";
  for (auto m : methods) out << ',' << method_name(m);
  out << '\n';
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& [scenario, n] = panels[p];
    std::map<double, std::map<Method, double>> rows;
    for (const auto& c : r.cells)
      if (c.scenario == scenario && c.n == n) rows[c.rate][c.method] = c.rejection_rate;
    for (const auto& [rate, by_method] : rows) {
      out << p + 1 << ',' << scenario << ',' << n << ',' << fmt(rate);
      for (auto m : methods) {
        const auto it = by_method.find(m);
        out << ',';
        if (it != by_method.end()) out << fmt(it->second, 10);
      }
      out << '\n';
    }
  }
}

void export_plotdata(const BenchResult& r, const std::filesystem::path& path) {
  auto out = open_out(path);
  export_plotdata(r, out);
}

}  // namespace mcar
