#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "mcar/data.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "mcartest");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = mcar::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_file(const std::string& name, const std::string& text) {
  std::ofstream(name) << text;
  return name;
}

}  // namespace

TEST_CASE("complete data has nothing to test", "[cli]") {
  const auto f = write_file("cli_complete.csv", "a,b\n1,2\n3,4\n5,5\n");
  const auto r = run({"test", f});
  CHECK(r.code == mcar::cli::kInapplicable);
  CHECK(r.out.find("nothing to test") != std::string::npos);
}

TEST_CASE("malformed CSV reports row and column", "[cli]") {
  const auto f = write_file("cli_bad.csv", "a,b\n1,2\n3,x\n");
  const auto r = run({"test", f});
  CHECK(r.code == mcar::cli::kInputError);
  CHECK(r.err.find("row 3, column 2") != std::string::npos);
  CHECK(run({"test", "no_such_file.csv"}).code == mcar::cli::kInputError);
}

TEST_CASE("argument errors", "[cli]") {
  CHECK(run({}).code == mcar::cli::kInputError);
  CHECK(run({"test"}).code == mcar::cli::kInputError);
  CHECK(run({"frobnicate"}).code == mcar::cli::kInputError);
  CHECK(run({"--help"}).code == mcar::cli::kOk);
  const auto f = write_file("cli_small.csv", "a,b\n1,2\n3,NA\n5,5\n2,7\n");
  CHECK(run({"test", f, "--method", "bogus"}).code == mcar::cli::kInputError);
  CHECK(run({"test", f, "--y-cols", "9"}).code == mcar::cli::kInputError);
  CHECK(run({"test", f, "--alpha", "1.5"}).code == mcar::cli::kInputError);
}

TEST_CASE("simulate then test", "[cli]") {
  auto sim = run({"simulate", "2x3y-normal-mar1to9", "cli_sim.csv", "--n", "300", "--seed", "4"});
  REQUIRE(sim.code == 0);
  CHECK(std::regex_search(sim.out, std::regex("V3 +30 +0\\.1000")));
  CHECK(mcar::read_csv(fs::path("cli_sim.csv")).rows() == 300);

  const auto t = run({"test", "cli_sim.csv", "--method", "all", "-v"});
  REQUIRE(t.code == 0);
  CHECK(t.out.find("A_n_prime") != std::string::npos);
  CHECK(t.out.find("little_d2") != std::string::npos);
  CHECK(t.out.find("df              12") != std::string::npos);
  CHECK(t.out.find("V3~ | R(V4)") != std::string::npos);

  // Six significant digits.
  std::smatch m;
  const std::regex pv("p-value +([0-9.e+-]+)");
  REQUIRE(std::regex_search(t.out, m, pv));
  const std::string digits = std::regex_replace(m[1].str(), std::regex("e.*|^0\\.0*|\\."), "");
  CHECK(digits.size() <= 6);

  const auto j = run({"test", "cli_sim.csv", "--method", "all", "--format", "json", "-v"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["q"] == 3);
  CHECK(doc["results"].size() == 3);
  CHECK(doc["results"][1]["df"] == 12);
  CHECK(doc["results"][1]["pairs"].size() == 12);
}

TEST_CASE("transforms and forced Y columns", "[cli]") {
  REQUIRE(run({"simulate", "2x3y-clayton-exp1-mcar", "cli_exp.csv", "--n", "120"}).code == 0);
  CHECK(run({"test", "cli_exp.csv", "--transform", "log"}).code == 0);
  CHECK(run({"test", "cli_exp.csv", "--transform", "rank"}).code == 0);
  const auto forced = run({"test", "cli_exp.csv", "--y-cols", "1", "--format", "json"});
  REQUIRE(forced.code == 0);
  const auto doc = nlohmann::json::parse(forced.out);
  CHECK(doc["q"] == 4);
  CHECK(doc["results"][0]["rank_deficient"] == true);
}

TEST_CASE("A_n is inapplicable without complete columns", "[cli]") {
  const auto f = write_file("cli_ally.csv", "a,b\n1,NA\nNA,4\n5,5\n2,7\n3,1\n");
  CHECK(run({"test", f, "--method", "an"}).code == mcar::cli::kInapplicable);
  const auto all = run({"test", f, "--method", "all"});
  CHECK(all.code == 0);
  CHECK(all.out.find("inapplicable") != std::string::npos);
}

TEST_CASE("p-values of repeated null runs look uniform", "[cli]") {
  std::vector<double> p;
  for (int seed = 1; seed <= 200; ++seed) {
    REQUIRE(run({"simulate", "2x3y-normal-mcar", "cli_null.csv", "--n", "300", "--seed", std::to_string(seed)})
                .code == 0);
    const auto r = run({"test", "cli_null.csv", "--format", "json"});
    REQUIRE(r.code == 0);
    p.push_back(nlohmann::json::parse(r.out)["results"][0]["p_value"].get<double>());
  }
  // 1% critical value of the KS distance at n = 200 is about 0.115.
  CHECK(oracle::ks_uniform(p) < 0.115);
}

TEST_CASE("bench writes CSVs and flags cells that always fail", "[cli]") {
  write_file("cli_bench.cfg",
             "scenario = 2x3y-normal-mcar\nsample_sizes = 60\nrates = 0.1\nreplications = 10\n");
  const auto ok = run({"bench", "cli_bench.cfg", "cli_bench_out", "--threads", "2"});
  CHECK(ok.code == 0);
  CHECK(fs::exists("cli_bench_out/results.csv"));
  CHECK(fs::exists("cli_bench_out/plotdata.csv"));

  write_file("cli_fail.cfg",
             "distribution = std_normal\ndim = 2\nmechanism = mcar targets=1,2 rate=0.1\n"
             "sample_sizes = 60\nrates = 0.1\nreplications = 5\n");
  const auto bad = run({"bench", "cli_fail.cfg", "cli_fail_out", "--method", "an"});
  CHECK(bad.code == mcar::cli::kBenchCellFailed);

  const auto serial = run({"bench", "cli_bench.cfg", "cli_bench_serial", "--serial", "--format", "json"});
  REQUIRE(serial.code == 0);
  const auto parallel = run({"bench", "cli_bench.cfg", "cli_bench_par", "--format", "json"});
  auto a = nlohmann::json::parse(serial.out)["cells"];
  auto b = nlohmann::json::parse(parallel.out)["cells"];
  for (auto& c : a) c.erase("mean_runtime_ms");
  for (auto& c : b) c.erase("mean_runtime_ms");
  CHECK(a == b);
}

TEST_CASE("scenario list", "[cli]") {
  const auto r = run({"scenario-list"});
  CHECK(r.code == 0);
  for (const char* n : {"2x3y-normal-mar1to9", "2x3y-normal-marrank-mcar3", "2x3y-t2-censor"})
    CHECK(r.out.find(n) != std::string::npos);
  const auto j = nlohmann::json::parse(run({"scenario-list", "--format", "json"}).out);
  CHECK(j.size() > 20);
}
