#pragma once

// Pipeline driver: sample -> embed -> diagonalize -> analyze for each
// interaction rank k, plus the exact q(N, m, k) sweep.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectral_stats.hpp"

namespace embedrmt::runner {

struct RunConfig {
  int modes = 0;      // N
  int particles = 0;  // m
  std::vector<int> k_list;
  int beta = 1;
  std::uint64_t members = 0;
  std::uint64_t master_seed = 0;
  std::size_t bins = stats::kDefaultBins;
  stats::Range lowest_range = stats::kDefaultLowestRange;
  std::size_t spacing_bins = stats::kDefaultSpacingBins;
  stats::Range spacing_range = stats::kDefaultSpacingRange;
  std::filesystem::path output_dir = "out";
  bool emit_raw_eigenvalues = false;
  std::optional<unsigned> worker_count;

  void validate() const;  // throws ConfigError naming the field
  unsigned workers() const;
};

// Parses the JSON run configuration. Unknown keys and type errors raise
// ConfigError with the offending field name.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const RunConfig& c);

// Evaluates fn(i) for i in [0, count) on `workers` threads. fn must be safe to
// call concurrently for distinct i.
void parallel_for(std::uint64_t count, unsigned workers,
                  const std::function<void(std::uint64_t)>& fn);

struct MemberResult {
  stats::EnsembleRecord record;
  std::vector<double> eigenvalues;  // only kept when requested
};

// Diagonalizes every member of the rank-k ensemble. Records come back in
// member-index order whatever the scheduling.
std::vector<MemberResult> compute_members(int modes, int particles, int rank, int beta,
                                          std::uint64_t members, std::uint64_t master_seed,
                                          unsigned workers, bool keep_eigenvalues);

struct RankAnalysis {
  int rank = 0;
  double q_formula = 0.0;
  double q_mc_mean = 0.0;
  std::size_t q_out_of_range = 0;  // members with q_i outside [0, 1]
  double lambda0_B = 0.0;          // Lambda_B^0(N, m, k)
  double dim_k = 0.0;
  double mean_spectral_variance = 0.0;
  stats::MomentSummary lowest;
  double alpha = 0.0;  // NaN when the inversion is undefined
  stats::ErgodicAlpha ergodic;
  bool ergodic_ok = false;
  stats::WidthExponents width_exponents;
  stats::Histogram lowest_hist;
  stats::FitComparison fits;
  stats::Histogram spacing_hist;
  std::vector<stats::FitReport> spacing_fits;  // poisson, wigner
  std::size_t spacing_winner = 0;
  std::vector<MemberResult> members;
};

RankAnalysis analyze_rank(const RunConfig& config, int rank);

struct RunManifest {
  nlohmann::json json;
  bool complete = true;
};

// Writes moments.csv, hist_lowest_k{K}.csv, fits_k{K}.json, spacing_k{K}.csv,
// optional raw_eigs_k{K}.csv and manifest.json into config.output_dir. A
// failing rank is recorded in the manifest and the remaining ranks still run.
RunManifest run(const RunConfig& config);

nlohmann::json fit_report_json(const stats::FitReport& r);

struct QSweepRow {
  int modes;
  int particles;
  int rank;
  double q;
};

using QGrid = std::vector<std::pair<int, std::vector<int>>>;  // N -> list of m

// N = 4, m = 4..14; N = 5, m = 5..11; N = 6, m = 6..9.
QGrid default_q_grid();
std::vector<QSweepRow> sweep_q(const QGrid& grid);
void write_q_sweep_csv(const std::vector<QSweepRow>& rows, std::ostream& os);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string library_version();

}  // namespace embedrmt::runner
