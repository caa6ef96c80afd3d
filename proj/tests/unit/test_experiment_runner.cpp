#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "experiment_runner.hpp"
#include "q_analysis.hpp"

using namespace embedrmt;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("embedrmt_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_field_error(const json& j) {
  try {
    runner::parse_config(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

json base_config() {
  return {{"N", 4}, {"m", 4}, {"k_list", {4}}, {"beta", 1}, {"members", 200}, {"master_seed", 7}};
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = runner::parse_config(base_config());
  CHECK(c.modes == 4);
  CHECK(c.particles == 4);
  CHECK(c.k_list == std::vector<int>{4});
  CHECK(c.members == 200);
  CHECK(c.master_seed == 7);
  CHECK(c.bins == stats::kDefaultBins);
  CHECK_FALSE(c.emit_raw_eigenvalues);

  const auto back = runner::parse_config(runner::config_to_json(c));
  CHECK(runner::config_to_json(back) == runner::config_to_json(c));
}

TEST_CASE("malformed configs name the offending field") {
  json j = base_config();
  j["colour"] = "red";
  CHECK(config_field_error(j) == "colour");

  j = base_config();
  j.erase("m");
  CHECK(config_field_error(j) == "m");

  j = base_config();
  j["k_list"] = {1, 5};
  CHECK(config_field_error(j) == "k_list");

  j = base_config();
  j["beta"] = 4;
  CHECK(config_field_error(j) == "beta");

  j = base_config();
  j["members"] = "many";
  CHECK(config_field_error(j) == "members");

  j = base_config();
  j["histogram"] = {{"range", {3, 1}}};
  CHECK(config_field_error(j) == "histogram.range");

  j = base_config();
  j["spacing"] = {{"width", 2}};
  CHECK(config_field_error(j) == "spacing.width");

  CHECK(config_field_error(json::array()) == "<root>");
}

TEST_CASE("load_config reports malformed JSON and missing files") {
  const fs::path dir = scratch("badjson");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << "{\"N\": 4,";
  CHECK_THROWS_AS(runner::load_config(dir / "c.json"), ConfigError);
  CHECK_THROWS_AS(runner::load_config(dir / "missing.json"), IoError);
}

TEST_CASE("parallel_for visits every index once and propagates failures") {
  std::vector<int> hits(1000, 0);
  runner::parallel_for(1000, 4, [&](std::uint64_t i) { ++hits[i]; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(runner::parallel_for(10, 3,
                                       [](std::uint64_t i) {
                                         if (i == 5) throw NumericalError("boom");
                                       }),
                  NumericalError);
}

TEST_CASE("runs are reproducible and independent of worker count") {
  auto c = runner::parse_config(base_config());
  c.k_list = {2, 4};
  c.emit_raw_eigenvalues = true;
  c.output_dir = scratch("run_a");
  c.worker_count = 1;
  const auto a = runner::run(c);
  c.output_dir = scratch("run_b");
  c.worker_count = 3;
  const auto b = runner::run(c);
  CHECK(a.complete);
  CHECK(a.json["checksum"] == b.json["checksum"]);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(fs::temp_directory_path() / "embedrmt_test_run_a")) {
    const auto name = entry.path().filename();
    if (name == "manifest.json") continue;  // carries wall-clock time
    CHECK(slurp(entry.path()) == slurp(fs::path(c.output_dir) / name));
    ++compared;
  }
  CHECK(compared == 9);
}

TEST_CASE("checksum changes with the config") {
  auto c = runner::parse_config(base_config());
  c.output_dir = scratch("sum_a");
  const auto a = runner::run(c);
  c.output_dir = scratch("sum_b");
  const auto same = runner::run(c);
  c.output_dir = scratch("sum_c");
  c.master_seed = 8;
  const auto b = runner::run(c);
  CHECK(a.json["checksum"] == same.json["checksum"]);
  CHECK(a.json["checksum"] != b.json["checksum"]);
}

TEST_CASE("run writes the documented files") {
  auto c = runner::parse_config(base_config());
  c.output_dir = scratch("files");
  const auto m = runner::run(c);
  const fs::path d = c.output_dir;
  for (const char* f : {"moments.csv", "hist_lowest_k4.csv", "fits_k4.json", "spacing_k4.csv", "manifest.json"})
    CHECK(fs::exists(d / f));
  CHECK_FALSE(fs::exists(d / "raw_eigs_k4.csv"));
  const std::string moments = slurp(d / "moments.csv");
  CHECK(moments.rfind("k,q_formula,q_mc_mean,lambda_c,sigma_lambda,S,kappa,alpha,alpha_ergodic,mu1,mu2,members\n", 0) == 0);
  CHECK(slurp(d / "hist_lowest_k4.csv").rfind("center,density,gaussian,gumbel,tw\n", 0) == 0);
  CHECK(slurp(d / "spacing_k4.csv").rfind("center,density,poisson,wigner_goe\n", 0) == 0);
  const json fits = json::parse(slurp(d / "fits_k4.json"));
  CHECK(fits["fits"].size() == 3);
  for (const auto& f : fits["fits"]) {
    CHECK(f.contains("kind"));
    CHECK(f["rss"].get<double>() >= 0.0);
    CHECK(f["bins"] == 40);
    CHECK(f["n_samples"].get<int>() <= 200);
  }
  CHECK(m.json["binning"]["lowest"]["bins"] == 40);
  CHECK(m.json["ranks"][0]["status"] == "ok");
}

TEST_CASE("k = m run: edge statistics beat the Gaussian, GOE spacing") {
  // TW against the fitted Gumbel is decided in the acceptance run; at this
  // size a Gumbel with mu ~ 20 matches TW below histogram noise.
  auto c = runner::parse_config(
      {{"N", 4}, {"m", 4}, {"k_list", {4}}, {"members", 1000}, {"master_seed", 7}});
  c.output_dir = scratch("kmax");
  runner::run(c);
  const json fits = json::parse(slurp(fs::path(c.output_dir) / "fits_k4.json"));
  const double gauss = fits["fits"][0]["rss"], gumbel = fits["fits"][1]["rss"], tw = fits["fits"][2]["rss"];
  CHECK(tw < gauss);
  CHECK(gumbel < gauss);
  CHECK(fits["winner"] != "gaussian");
  CHECK(fits["spacing_winner"] == "wigner_goe");
  const auto a = runner::analyze_rank(c, 4);
  CHECK(std::abs(a.alpha - 0.5) < 0.05);
}

TEST_CASE("q sweep over the default grid") {
  const auto rows = runner::sweep_q(runner::default_q_grid());
  std::size_t expected = 0;
  for (int m = 4; m <= 14; ++m) expected += static_cast<std::size_t>(m);
  for (int m = 5; m <= 11; ++m) expected += static_cast<std::size_t>(m);
  for (int m = 6; m <= 9; ++m) expected += static_cast<std::size_t>(m);
  CHECK(rows.size() == expected);
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].modes == rows[i - 1].modes && rows[i].particles == rows[i - 1].particles)
      CHECK(rows[i].q <= rows[i - 1].q);
  std::ostringstream os;
  runner::write_q_sweep_csv(rows, os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "N,m,k,k_over_m,q");
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const double q = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(q > 0.0);
    CHECK(q <= 1.0);
    ++n;
  }
  CHECK(n == expected);
}

TEST_CASE("fnv1a reference values") {
  CHECK(runner::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(runner::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(runner::fnv1a("foobar") == 0x85944171f73967e8ULL);
}
