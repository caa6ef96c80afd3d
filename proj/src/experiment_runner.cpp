#include "experiment_runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include "eigensolver.hpp"
#include "error.hpp"
#include "evs_distributions.hpp"
#include "fock_basis.hpp"
#include "kbody_ensemble.hpp"
#include "numerics.hpp"
#include "q_analysis.hpp"

namespace embedrmt::runner {

using nlohmann::json;

namespace {

const std::set<std::string> kConfigKeys = {
    "N", "m", "k_list", "beta", "members", "master_seed", "bins", "output_dir",
    "emit_raw_eigenvalues", "worker_count", "histogram", "spacing"};

template <typename T>
T get_integer(const json& j, const std::string& field, T lo, T hi) {
  if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
  const bool in_range = j.is_number_unsigned()
                            ? std::in_range<T>(j.get<std::uint64_t>()) &&
                                  !std::cmp_less(j.get<std::uint64_t>(), lo) &&
                                  !std::cmp_greater(j.get<std::uint64_t>(), hi)
                            : !std::cmp_less(j.get<std::int64_t>(), lo) &&
                                  !std::cmp_greater(j.get<std::int64_t>(), hi);
  if (!in_range) throw ConfigError(field, "value " + j.dump() + " out of range");
  return j.is_number_unsigned() ? static_cast<T>(j.get<std::uint64_t>())
                                : static_cast<T>(j.get<std::int64_t>());
}

stats::Range get_range(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(field, "expected [lo, hi]");
  const stats::Range r{j[0].get<double>(), j[1].get<double>()};
  if (!(r.hi > r.lo)) throw ConfigError(field, "needs lo < hi");
  return r;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << content;
  if (!out) throw IoError("write failed for " + p.string());
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  if (modes < 1) throw ConfigError("N", "must be >= 1");
  if (particles < 1 || particles > fock::kMaxParticles) throw ConfigError("m", "must be in [1, 64]");
  if (k_list.empty()) throw ConfigError("k_list", "must not be empty");
  for (int k : k_list)
    if (k < 1 || k > particles) throw ConfigError("k_list", "every k must satisfy 1 <= k <= m");
  if (beta != 1 && beta != 2) throw ConfigError("beta", "must be 1 or 2");
  if (members < 4) throw ConfigError("members", "must be >= 4 (moments need four samples)");
  if (bins < 1) throw ConfigError("bins", "must be >= 1");
  if (spacing_bins < 1) throw ConfigError("spacing.bins", "must be >= 1");
  if (worker_count && *worker_count < 1) throw ConfigError("worker_count", "must be >= 1");
  if (fock::dimension(modes, particles) < 4)
    throw ConfigError("m", "m-particle space must have dimension >= 4");
}

unsigned RunConfig::workers() const {
  if (worker_count) return *worker_count;
  return std::max(1u, std::thread::hardware_concurrency());
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "configuration must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!kConfigKeys.contains(key)) throw ConfigError(key, "unknown key");
  for (const char* key : {"N", "m", "k_list", "members"})
    if (!j.contains(key)) throw ConfigError(key, "required key missing");

  RunConfig c;
  c.modes = get_integer<int>(j["N"], "N", 1, 64);
  c.particles = get_integer<int>(j["m"], "m", 1, 64);
  const json& ks = j["k_list"];
  if (!ks.is_array()) throw ConfigError("k_list", "expected an array of integers");
  for (std::size_t i = 0; i < ks.size(); ++i)
    c.k_list.push_back(get_integer<int>(ks[i], "k_list[" + std::to_string(i) + "]", 1, 64));
  if (j.contains("beta")) c.beta = get_integer<int>(j["beta"], "beta", 1, 2);
  c.members = get_integer<std::uint64_t>(j["members"], "members", 1,
                                         std::numeric_limits<std::uint32_t>::max());
  if (j.contains("master_seed"))
    c.master_seed = get_integer<std::uint64_t>(j["master_seed"], "master_seed", 0,
                                               std::numeric_limits<std::uint64_t>::max());
  if (j.contains("bins")) c.bins = get_integer<std::size_t>(j["bins"], "bins", 1, 100000);
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ConfigError("output_dir", "expected a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("emit_raw_eigenvalues")) {
    if (!j["emit_raw_eigenvalues"].is_boolean())
      throw ConfigError("emit_raw_eigenvalues", "expected true or false");
    c.emit_raw_eigenvalues = j["emit_raw_eigenvalues"].get<bool>();
  }
  if (j.contains("worker_count") && !j["worker_count"].is_null())
    c.worker_count = get_integer<unsigned>(j["worker_count"], "worker_count", 1, 4096);
  if (j.contains("histogram")) {
    const json& h = j["histogram"];
    if (!h.is_object()) throw ConfigError("histogram", "expected an object");
    for (const auto& [key, value] : h.items())
      if (key != "range") throw ConfigError("histogram." + key, "unknown key");
    if (h.contains("range")) c.lowest_range = get_range(h["range"], "histogram.range");
  }
  if (j.contains("spacing")) {
    const json& s = j["spacing"];
    if (!s.is_object()) throw ConfigError("spacing", "expected an object");
    for (const auto& [key, value] : s.items())
      if (key != "range" && key != "bins") throw ConfigError("spacing." + key, "unknown key");
    if (s.contains("range")) c.spacing_range = get_range(s["range"], "spacing.range");
    if (s.contains("bins")) c.spacing_bins = get_integer<std::size_t>(s["bins"], "spacing.bins", 1, 100000);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

json config_to_json(const RunConfig& c) {
  json j;
  j["N"] = c.modes;
  j["m"] = c.particles;
  j["k_list"] = c.k_list;
  j["beta"] = c.beta;
  j["members"] = c.members;
  j["master_seed"] = c.master_seed;
  j["bins"] = c.bins;
  j["histogram"] = {{"range", {c.lowest_range.lo, c.lowest_range.hi}}};
  j["spacing"] = {{"bins", c.spacing_bins},
                  {"range", {c.spacing_range.lo, c.spacing_range.hi}}};
  j["output_dir"] = c.output_dir.string();
  j["emit_raw_eigenvalues"] = c.emit_raw_eigenvalues;
  j["worker_count"] = c.worker_count ? json(*c.worker_count) : json(nullptr);
  return j;
}

void parallel_for(std::uint64_t count, unsigned workers,
                  const std::function<void(std::uint64_t)>& fn) {
  workers = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers), count));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<MemberResult> compute_members(int modes, int particles, int rank, int beta,
                                          std::uint64_t members, std::uint64_t master_seed,
                                          unsigned workers, bool keep_eigenvalues) {
  ensemble::EnsembleSpec spec{modes, particles, rank, beta, members, master_seed};
  const ensemble::Ensemble ens(spec);
  std::vector<MemberResult> out(members);
  parallel_for(members, workers, [&](std::uint64_t i) {
    const eigen::Spectrum s = eigen::eigenvalues_selfadjoint(ens.member(i));
    const auto [l0, l1] = eigen::lowest_two(s);
    const qnorm::SpectrumShape shape = qnorm::shape_of(s.eigenvalues);
    MemberResult& r = out[i];
    r.record = stats::EnsembleRecord{i, l0, l1, shape.mean, shape.variance, shape.q};
    if (keep_eigenvalues) r.eigenvalues = s.eigenvalues;
  });
  return out;
}

RankAnalysis analyze_rank(const RunConfig& config, int rank) {
  config.validate();
  if (rank < 1 || rank > config.particles) throw ValidationError("rank outside [1, m]");
  RankAnalysis a;
  a.rank = rank;
  a.q_formula = qnorm::q_parameter(config.modes, config.particles, rank);
  a.lambda0_B = static_cast<double>(qnorm::lambda_B(config.modes, config.particles, rank, 0));
  a.dim_k = static_cast<double>(fock::dimension(config.modes, rank));
  a.members = compute_members(config.modes, config.particles, rank, config.beta, config.members,
                              config.master_seed, config.workers(), config.emit_raw_eigenvalues);

  std::vector<stats::EnsembleRecord> records;
  records.reserve(a.members.size());
  std::vector<double> lowest;
  lowest.reserve(a.members.size());
  numerics::CompensatedSum q_sum, var_sum;
  for (const auto& m : a.members) {
    records.push_back(m.record);
    lowest.push_back(m.record.lambda0);
    q_sum.add(m.record.q_i);
    var_sum.add(m.record.spectrum_variance);
    if (!(m.record.q_i >= 0.0 && m.record.q_i <= 1.0)) ++a.q_out_of_range;
  }
  const auto n = static_cast<double>(records.size());
  a.q_mc_mean = q_sum.value() / n;
  a.mean_spectral_variance = var_sum.value() / n;
  a.lowest = stats::moments(lowest);

  a.alpha = std::numeric_limits<double>::quiet_NaN();
  try {
    a.alpha = stats::alpha_from_centroid(a.lowest.centroid, a.q_formula, a.lambda0_B, config.beta);
  } catch (const ValidationError&) {
  }
  try {
    a.ergodic = stats::alpha_ergodic(records, a.lambda0_B, config.beta);
    a.ergodic_ok = true;
  } catch (const ValidationError&) {
    a.ergodic.alpha = std::numeric_limits<double>::quiet_NaN();
  }
  a.width_exponents = stats::mu1_mu2_from_width(a.lowest.width, a.lambda0_B, a.dim_k);

  std::vector<double> scaled(lowest.size());
  for (std::size_t i = 0; i < lowest.size(); ++i)
    scaled[i] = stats::scale_lowest(lowest[i], a.lowest.centroid, a.lowest.width);
  a.lowest_hist = stats::histogram(scaled, config.bins, config.lowest_range);
  a.fits = stats::compare_fits(a.lowest_hist, config.beta);

  const std::vector<double> spacings = stats::spacing_sample(records);
  a.spacing_hist = stats::histogram(spacings, config.spacing_bins, config.spacing_range);
  a.spacing_fits.push_back(stats::fit_spacing(a.spacing_hist, evs::SpacingKind::kPoisson));
  a.spacing_fits.push_back(stats::fit_spacing(a.spacing_hist, evs::wigner_for_beta(config.beta)));
  a.spacing_winner = a.spacing_fits[1].rss < a.spacing_fits[0].rss ? 1 : 0;
  return a;
}

json fit_report_json(const stats::FitReport& r) {
  json j;
  j["kind"] = r.kind;
  if (r.mu) j["mu"] = *r.mu;
  if (!r.mu_minima.empty()) j["mu_local_minima"] = r.mu_minima;
  j["rss"] = r.rss;
  j["bins"] = r.bins;
  j["n_samples"] = r.n_samples;
  return j;
}

namespace {

std::string lowest_hist_csv(const RankAnalysis& a, int beta) {
  const auto& gumbel_fit = a.fits.fits[1];
  const evs::GumbelParams gp = evs::gumbel_standardize(gumbel_fit.mu.value_or(1.0));
  const evs::DistributionTable& tw = evs::tracy_widom_standardized(beta, true);
  std::ostringstream os;
  os << "center,density,gaussian,gumbel,tw\n";
  for (std::size_t i = 0; i < a.lowest_hist.centers.size(); ++i) {
    const double x = a.lowest_hist.centers[i];
    os << format_double(x) << ',' << format_double(a.lowest_hist.densities[i]) << ','
       << format_double(std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi)) << ','
       << format_double(evs::gumbel_pdf(x, gp)) << ',' << format_double(tw.pdf_at(x)) << '\n';
  }
  return os.str();
}

std::string spacing_csv(const RankAnalysis& a, int beta) {
  std::ostringstream os;
  const evs::SpacingKind wigner = evs::wigner_for_beta(beta);
  os << "center,density,poisson," << evs::to_string(wigner) << '\n';
  for (std::size_t i = 0; i < a.spacing_hist.centers.size(); ++i) {
    const double s = a.spacing_hist.centers[i];
    os << format_double(s) << ',' << format_double(a.spacing_hist.densities[i]) << ','
       << format_double(evs::spacing_reference(evs::SpacingKind::kPoisson, s)) << ','
       << format_double(evs::spacing_reference(wigner, s)) << '\n';
  }
  return os.str();
}

std::string fits_json(const RankAnalysis& a) {
  json j;
  j["k"] = a.rank;
  j["histogram"] = {{"bins", a.lowest_hist.centers.size()},
                    {"range", {a.lowest_hist.lo, a.lowest_hist.hi}},
                    {"n_outside", a.lowest_hist.n_outside}};
  j["fits"] = json::array();
  for (const auto& f : a.fits.fits) j["fits"].push_back(fit_report_json(f));
  j["winner"] = a.fits.fits[a.fits.winner].kind;
  j["spacing_histogram"] = {{"bins", a.spacing_hist.centers.size()},
                            {"range", {a.spacing_hist.lo, a.spacing_hist.hi}},
                            {"n_outside", a.spacing_hist.n_outside}};
  j["spacing_fits"] = json::array();
  for (const auto& f : a.spacing_fits) j["spacing_fits"].push_back(fit_report_json(f));
  j["spacing_winner"] = a.spacing_fits[a.spacing_winner].kind;
  return j.dump(2) + "\n";
}

std::string raw_eigs_csv(const RankAnalysis& a) {
  std::ostringstream os;
  os << "member,index,eigenvalue\n";
  for (const auto& m : a.members)
    for (std::size_t i = 0; i < m.eigenvalues.size(); ++i)
      os << m.record.member_index << ',' << i << ',' << format_double(m.eigenvalues[i]) << '\n';
  return os.str();
}

std::string moments_row(const RankAnalysis& a, std::uint64_t members) {
  std::ostringstream os;
  os << a.rank << ',' << format_double(a.q_formula) << ',' << format_double(a.q_mc_mean) << ','
     << format_double(a.lowest.centroid) << ',' << format_double(a.lowest.width) << ','
     << format_double(a.lowest.skewness) << ',' << format_double(a.lowest.kurtosis) << ','
     << format_double(a.alpha) << ',' << format_double(a.ergodic.alpha) << ','
     << format_double(a.width_exponents.mu1) << ',' << format_double(a.width_exponents.mu2)
     << ',' << members << '\n';
  return os.str();
}

}  // namespace

RunManifest run(const RunConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw IoError("cannot create " + config.output_dir.string() + ": " + ec.message());

  RunManifest manifest;
  json per_k = json::array();
  std::string moments_csv =
      "k,q_formula,q_mc_mean,lambda_c,sigma_lambda,S,kappa,alpha,alpha_ergodic,mu1,mu2,members\n";
  // Files in write order; the checksum covers their contents in this order.
  std::vector<std::pair<std::string, std::string>> files;

  for (int k : config.k_list) {
    json entry;
    entry["k"] = k;
    try {
      const RankAnalysis a = analyze_rank(config, k);
      const std::string suffix = "_k" + std::to_string(k);
      std::vector<std::pair<std::string, std::string>> rank_files = {
          {"hist_lowest" + suffix + ".csv", lowest_hist_csv(a, config.beta)},
          {"fits" + suffix + ".json", fits_json(a)},
          {"spacing" + suffix + ".csv", spacing_csv(a, config.beta)},
      };
      if (config.emit_raw_eigenvalues) rank_files.emplace_back("raw_eigs" + suffix + ".csv", raw_eigs_csv(a));
      json names = json::object();
      for (auto& [name, content] : rank_files) {
        write_file(config.output_dir / name, content);
        names[name.substr(0, name.find(suffix))] = name;
        files.emplace_back(name, std::move(content));
      }
      moments_csv += moments_row(a, config.members);
      entry["status"] = "ok";
      entry["files"] = names;
      entry["q_i_out_of_range"] = a.q_out_of_range;
      entry["alpha_ergodic_excluded"] = a.ergodic.excluded;
    } catch (const Error& e) {
      manifest.complete = false;
      entry["status"] = "failed";
      entry["error"] = {{"code", static_cast<int>(e.code())}, {"message", e.what()}};
    }
    per_k.push_back(entry);
  }
  write_file(config.output_dir / "moments.csv", moments_csv);
  files.emplace(files.begin(), "moments.csv", moments_csv);

  // Checksum over results only: output_dir and worker_count do not change them.
  json echo = config_to_json(config);
  json result_config = echo;
  result_config.erase("output_dir");
  result_config.erase("worker_count");
  std::uint64_t h = fnv1a(library_version());
  h = fnv1a(result_config.dump(), h);
  for (const auto& [name, content] : files) {
    h = fnv1a(name, h);
    h = fnv1a(content, h);
  }

  json& m = manifest.json;
  m["config"] = echo;
  m["library_version"] = library_version();
  m["ranks"] = per_k;
  m["outputs"] = {{"moments", "moments.csv"}};
  m["binning"] = {{"lowest", {{"bins", config.bins},
                              {"range", {config.lowest_range.lo, config.lowest_range.hi}}}},
                  {"spacing", {{"bins", config.spacing_bins},
                               {"range", {config.spacing_range.lo, config.spacing_range.hi}}}}};
  m["complete"] = manifest.complete;
  m["checksum"] = hex64(h);
  m["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_file(config.output_dir / "manifest.json", m.dump(2) + "\n");
  return manifest;
}

QGrid default_q_grid() {
  auto range = [](int lo, int hi) {
    std::vector<int> v;
    for (int m = lo; m <= hi; ++m) v.push_back(m);
    return v;
  };
  return {{4, range(4, 14)}, {5, range(5, 11)}, {6, range(6, 9)}};
}

std::vector<QSweepRow> sweep_q(const QGrid& grid) {
  std::vector<QSweepRow> rows;
  for (const auto& [modes, ms] : grid)
    for (int m : ms)
      for (int k = 1; k <= m; ++k) rows.push_back({modes, m, k, qnorm::q_parameter(modes, m, k)});
  return rows;
}

void write_q_sweep_csv(const std::vector<QSweepRow>& rows, std::ostream& os) {
  os << "N,m,k,k_over_m,q\n";
  for (const auto& r : rows)
    os << r.modes << ',' << r.particles << ',' << r.rank << ','
       << format_double(static_cast<double>(r.rank) / r.particles) << ',' << format_double(r.q)
       << '\n';
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string library_version() { return EMBEDRMT_VERSION; }

}  // namespace embedrmt::runner
