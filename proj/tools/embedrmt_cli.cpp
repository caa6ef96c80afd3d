// Command-line front end. Talks to the library only through the C API.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "embedrmt/embedrmt.h"

namespace {

const char* status_name(ermt_status s) {
  switch (s) {
    case ERMT_OK:
      return "ok";
    case ERMT_INVALID_ARGUMENT:
      return "invalid_argument";
    case ERMT_OVERFLOW:
      return "overflow";
    case ERMT_NUMERICAL:
      return "numerical";
    case ERMT_IO:
      return "io";
    case ERMT_CONFIG:
      return "config";
    case ERMT_INTERNAL:
      break;
  }
  return "internal";
}

// Prints a JSON error record on stderr and returns the exit code.
int report(ermt_status s, const std::string& command) {
  nlohmann::json j = {{"error", status_name(s)},
                      {"code", static_cast<int>(s)},
                      {"command", command},
                      {"message", ermt_last_error()}};
  const std::string field = ermt_last_error_field();
  if (!field.empty()) j["field"] = field;
  std::cerr << j.dump() << "\n";
  return 2;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  ermt_string_free(s);
  return out;
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  std::optional<std::size_t> bins;
};

int do_run(const RunArgs& a) {
  ermt_config* c = nullptr;
  ermt_status s = ermt_config_load(a.config.c_str(), &c);
  if (s != ERMT_OK) return report(s, "run");
  if (s == ERMT_OK && a.seed) s = ermt_config_set_seed(c, *a.seed);
  if (s == ERMT_OK && a.workers) s = ermt_config_set_workers(c, *a.workers);
  if (s == ERMT_OK && a.out) s = ermt_config_set_output_dir(c, a.out->c_str());
  if (s == ERMT_OK && a.bins) s = ermt_config_set_bins(c, *a.bins);
  char* manifest = nullptr;
  int complete = 0;
  if (s == ERMT_OK) s = ermt_run(c, &manifest, &complete);
  ermt_config_free(c);
  if (s != ERMT_OK) return report(s, "run");
  const auto j = nlohmann::json::parse(take(manifest));
  nlohmann::json summary = {{"complete", j["complete"]},
                            {"checksum", j["checksum"]},
                            {"output_dir", j["config"]["output_dir"]},
                            {"wall_clock_seconds", j["wall_clock_seconds"]}};
  std::cout << summary.dump(2) << "\n";
  return complete ? 0 : 1;
}

int do_qsweep(const std::string& out) {
  const ermt_status s = ermt_qsweep_write(out.c_str());
  if (s != ERMT_OK) return report(s, "qsweep");
  std::cout << out << "\n";
  return 0;
}

int do_twtable(int beta, bool reflected, bool standardized, const std::string& out) {
  ermt_table* t = nullptr;
  ermt_status s = ermt_table_tracy_widom(beta, reflected, standardized, &t);
  if (s == ERMT_OK) s = ermt_table_write_csv(t, out.c_str());
  ermt_moments m{};
  if (s == ERMT_OK) s = ermt_table_moments(t, &m);
  ermt_table_free(t);
  if (s != ERMT_OK) return report(s, "twtable");
  std::printf("mean %.8f variance %.8f skewness %.8f kurtosis %.8f\n", m.mean, m.variance,
              m.skewness, m.kurtosis);
  return 0;
}

int do_gumbel(double mu, const std::string& out) {
  ermt_table* t = nullptr;
  ermt_status s = ermt_table_gumbel(mu, &t);
  if (s == ERMT_OK) s = ermt_table_write_csv(t, out.c_str());
  ermt_moments m{};
  if (s == ERMT_OK) s = ermt_table_moments(t, &m);
  ermt_table_free(t);
  if (s != ERMT_OK) return report(s, "gumbel");
  std::printf("mean %.8f variance %.8f skewness %.8f kurtosis %.8f\n", m.mean, m.variance,
              m.skewness, m.kurtosis);
  return 0;
}

int do_validate() {
  char* text = nullptr;
  std::size_t failures = 0;
  const ermt_status s = ermt_validate(&text, &failures);
  if (s != ERMT_OK) return report(s, "validate");
  const auto j = nlohmann::json::parse(take(text));
  for (const auto& c : j["checks"]) {
    std::cout << (c["passed"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>();
    if (!c["passed"].get<bool>()) std::cout << "  (" << c["detail"].get<std::string>() << ")";
    std::cout << "\n";
  }
  std::printf("%zu failure(s), %.1f s\n", failures, j["seconds"].get<double>());
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embedded bosonic random-matrix ensembles"};
  app.set_version_flag("--version", std::string(ermt_version()));
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run the ensemble pipeline from a JSON config");
  run->add_option("--config", run_args.config, "Path to the JSON configuration")->required();
  run->add_option("--seed", run_args.seed, "Override master_seed");
  run->add_option("--workers", run_args.workers, "Override worker_count")->check(CLI::PositiveNumber);
  run->add_option("--out", run_args.out, "Override output_dir");
  run->add_option("--bins", run_args.bins, "Override bins")->check(CLI::PositiveNumber);

  std::string qsweep_out = "q_sweep.csv";
  auto* qsweep = app.add_subcommand("qsweep", "Exact q(N, m, k) over the default grid");
  qsweep->add_option("--out", qsweep_out, "Output CSV path");

  int tw_beta = 2;
  bool tw_reflected = false;
  bool tw_standardized = false;
  std::string tw_out = "tw.csv";
  auto* tw = app.add_subcommand("twtable", "Tabulate a Tracy-Widom distribution");
  tw->add_option("--beta", tw_beta, "1 or 2")->check(CLI::IsMember({1, 2}));
  tw->add_flag("--reflected", tw_reflected, "Mirror x -> -x");
  tw->add_flag("--standardized", tw_standardized, "Zero mean, unit variance");
  tw->add_option("--out", tw_out, "Output CSV path");

  double gumbel_mu = 1.0;
  std::string gumbel_out = "gumbel.csv";
  auto* gumbel = app.add_subcommand("gumbel", "Tabulate the standardized Gumbel G_mu");
  gumbel->add_option("--mu", gumbel_mu, "Shape parameter")->required();
  gumbel->add_option("--out", gumbel_out, "Output CSV path");

  auto* validate = app.add_subcommand("validate", "Run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    nlohmann::json j = {{"error", "usage"}, {"code", e.get_exit_code()}, {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    return 2;
  }

  if (*run) return do_run(run_args);
  if (*qsweep) return do_qsweep(qsweep_out);
  if (*tw) return do_twtable(tw_beta, tw_reflected, tw_standardized, tw_out);
  if (*gumbel) return do_gumbel(gumbel_mu, gumbel_out);
  if (*validate) return do_validate();
  return 0;
}
