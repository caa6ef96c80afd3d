#include "embedrmt/embedrmt.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include <json.hpp>

#include "eigensolver.hpp"
#include "error.hpp"
#include "evs_distributions.hpp"
#include "experiment_runner.hpp"
#include "fock_basis.hpp"
#include "kbody_ensemble.hpp"
#include "q_analysis.hpp"
#include "validate.hpp"

struct ermt_table {
  embedrmt::evs::DistributionTable table;
};

struct ermt_hamiltonian {
  embedrmt::ensemble::EmbeddedHamiltonian h;
};

struct ermt_config {
  embedrmt::runner::RunConfig config;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_field;

ermt_status fail(ermt_status s, const std::string& what, const std::string& field = {}) {
  g_last_error = what;
  g_last_field = field;
  return s;
}

ermt_status map_code(embedrmt::ErrorCode code) {
  using embedrmt::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return ERMT_INVALID_ARGUMENT;
    case ErrorCode::kOverflow:
      return ERMT_OVERFLOW;
    case ErrorCode::kNumerical:
      return ERMT_NUMERICAL;
    case ErrorCode::kIo:
      return ERMT_IO;
    case ErrorCode::kConfig:
      return ERMT_CONFIG;
  }
  return ERMT_INTERNAL;
}

template <typename F>
ermt_status guard(F&& body) {
  try {
    body();
    return ERMT_OK;
  } catch (const embedrmt::ConfigError& e) {
    return fail(ERMT_CONFIG, e.what(), e.field());
  } catch (const embedrmt::Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(ERMT_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ERMT_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ERMT_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw embedrmt::ValidationError(what);
}

}  // namespace

extern "C" {

const char* ermt_version(void) {
  static const std::string v = embedrmt::runner::library_version();
  return v.c_str();
}

const char* ermt_last_error(void) { return g_last_error.c_str(); }
const char* ermt_last_error_field(void) { return g_last_field.c_str(); }
void ermt_string_free(char* s) { std::free(s); }

ermt_status ermt_dimension(int modes, int particles, uint64_t* out) {
  return guard([&] {
    require(out, "null output pointer");
    *out = embedrmt::fock::dimension(modes, particles);
  });
}

ermt_status ermt_q_parameter(int modes, int particles, int rank, double* out) {
  return guard([&] {
    require(out, "null output pointer");
    *out = embedrmt::qnorm::q_parameter(modes, particles, rank);
  });
}

ermt_status ermt_lambda_b(int modes, int particles, int r, int nu, uint64_t* out) {
  return guard([&] {
    require(out, "null output pointer");
    *out = embedrmt::qnorm::lambda_B(modes, particles, r, nu);
  });
}

ermt_status ermt_q_normal_pdf(double x, double q, double* out) {
  return guard([&] {
    require(out, "null output pointer");
    *out = embedrmt::qnorm::q_normal_pdf(x, q);
  });
}

ermt_status ermt_table_tracy_widom(int beta, int reflected, int standardized, ermt_table** out) {
  return guard([&] {
    require(out, "null output pointer");
    const auto& t = standardized ? embedrmt::evs::tracy_widom_standardized(beta, reflected != 0)
                                 : embedrmt::evs::tracy_widom(beta, reflected != 0);
    *out = new ermt_table{t};
  });
}

ermt_status ermt_table_gaussian(ermt_table** out) {
  return guard([&] {
    require(out, "null output pointer");
    *out = new ermt_table{embedrmt::evs::gaussian_std()};
  });
}

ermt_status ermt_table_gumbel(double mu, ermt_table** out) {
  return guard([&] {
    require(out, "null output pointer");
    *out = new ermt_table{embedrmt::evs::gumbel_table(mu)};
  });
}

size_t ermt_table_size(const ermt_table* t) { return t ? t->table.size() : 0; }

ermt_status ermt_table_values(const ermt_table* t, double* x, double* pdf, double* cdf,
                              size_t capacity) {
  return guard([&] {
    require(t, "null table");
    const size_t n = std::min(capacity, t->table.size());
    for (size_t i = 0; i < n; ++i) {
      if (x) x[i] = t->table.grid()[i];
      if (pdf) pdf[i] = t->table.pdf()[i];
      if (cdf) cdf[i] = t->table.cdf()[i];
    }
  });
}

ermt_status ermt_table_pdf_at(const ermt_table* t, double x, double* out) {
  return guard([&] {
    require(t && out, "null argument");
    *out = t->table.pdf_at(x);
  });
}

ermt_status ermt_table_moments(const ermt_table* t, ermt_moments* out) {
  return guard([&] {
    require(t && out, "null argument");
    const auto& m = t->table.moments();
    *out = {m.mean, m.variance, m.skewness, m.kurtosis};
  });
}

ermt_status ermt_table_write_csv(const ermt_table* t, const char* path) {
  return guard([&] {
    require(t && path, "null argument");
    std::ofstream os(path);
    if (!os) throw embedrmt::IoError(std::string("cannot write ") + path);
    t->table.write_csv(os);
    if (!os) throw embedrmt::IoError(std::string("write failed for ") + path);
  });
}

void ermt_table_free(ermt_table* t) { delete t; }

ermt_status ermt_gumbel_params(double mu, ermt_gumbel* out) {
  return guard([&] {
    require(out, "null output pointer");
    const auto p = embedrmt::evs::gumbel_standardize(mu);
    *out = {p.mu, p.u, p.v, p.log_w};
  });
}

ermt_status ermt_gumbel_pdf(double e, double mu, double* out) {
  return guard([&] {
    require(out, "null output pointer");
    *out = embedrmt::evs::gumbel_pdf(e, embedrmt::evs::gumbel_standardize(mu));
  });
}

ermt_status ermt_spacing_reference(ermt_spacing kind, double s, double* out) {
  return guard([&] {
    require(out, "null output pointer");
    using embedrmt::evs::SpacingKind;
    SpacingKind k;
    switch (kind) {
      case ERMT_SPACING_POISSON:
        k = SpacingKind::kPoisson;
        break;
      case ERMT_SPACING_WIGNER_GOE:
        k = SpacingKind::kWignerGoe;
        break;
      case ERMT_SPACING_WIGNER_GUE:
        k = SpacingKind::kWignerGue;
        break;
      default:
        throw embedrmt::ValidationError("unknown spacing kind");
    }
    *out = embedrmt::evs::spacing_reference(k, s);
  });
}

ermt_status ermt_hamiltonian_sample(int modes, int particles, int rank, int beta,
                                    uint64_t master_seed, uint64_t index, ermt_hamiltonian** out) {
  return guard([&] {
    require(out, "null output pointer");
    const embedrmt::ensemble::Ensemble ens({modes, particles, rank, beta, index + 1, master_seed});
    *out = new ermt_hamiltonian{ens.member(index)};
  });
}

size_t ermt_hamiltonian_dimension(const ermt_hamiltonian* h) {
  return h ? static_cast<size_t>(h->h.dim()) : 0;
}

ermt_status ermt_hamiltonian_entry(const ermt_hamiltonian* h, size_t row, size_t col, double* re,
                                   double* im) {
  return guard([&] {
    require(h, "null hamiltonian");
    const auto d = static_cast<size_t>(h->h.dim());
    require(row < d && col < d, "index out of range");
    const auto r = static_cast<Eigen::Index>(row);
    const auto c = static_cast<Eigen::Index>(col);
    if (re) *re = h->h.real(r, c);
    if (im) *im = h->h.is_complex() ? h->h.imag(r, c) : 0.0;
  });
}

ermt_status ermt_hamiltonian_eigenvalues(const ermt_hamiltonian* h, double* out) {
  return guard([&] {
    require(h && out, "null argument");
    const auto s = embedrmt::eigen::eigenvalues_selfadjoint(h->h);
    std::copy(s.eigenvalues.begin(), s.eigenvalues.end(), out);
  });
}

void ermt_hamiltonian_free(ermt_hamiltonian* h) { delete h; }

ermt_status ermt_config_load(const char* path, ermt_config** out) {
  return guard([&] {
    require(path && out, "null argument");
    *out = new ermt_config{embedrmt::runner::load_config(path)};
  });
}

ermt_status ermt_config_parse(const char* json_text, ermt_config** out) {
  return guard([&] {
    require(json_text && out, "null argument");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw embedrmt::ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    *out = new ermt_config{embedrmt::runner::parse_config(j)};
  });
}

ermt_status ermt_config_set_seed(ermt_config* c, uint64_t seed) {
  return guard([&] {
    require(c, "null config");
    c->config.master_seed = seed;
  });
}

ermt_status ermt_config_set_workers(ermt_config* c, unsigned workers) {
  return guard([&] {
    require(c, "null config");
    if (workers < 1) throw embedrmt::ConfigError("worker_count", "must be >= 1");
    c->config.worker_count = workers;
  });
}

ermt_status ermt_config_set_output_dir(ermt_config* c, const char* path) {
  return guard([&] {
    require(c && path, "null argument");
    c->config.output_dir = path;
  });
}

ermt_status ermt_config_set_bins(ermt_config* c, size_t bins) {
  return guard([&] {
    require(c, "null config");
    if (bins < 1) throw embedrmt::ConfigError("bins", "must be >= 1");
    c->config.bins = bins;
  });
}

ermt_status ermt_config_json(const ermt_config* c, char** out) {
  return guard([&] {
    require(c && out, "null argument");
    *out = dup_string(embedrmt::runner::config_to_json(c->config).dump(2));
  });
}

void ermt_config_free(ermt_config* c) { delete c; }

ermt_status ermt_run(const ermt_config* c, char** manifest, int* complete) {
  return guard([&] {
    require(c && manifest, "null argument");
    c->config.validate();
    const auto m = embedrmt::runner::run(c->config);
    *manifest = dup_string(m.json.dump(2));
    if (complete) *complete = m.complete ? 1 : 0;
  });
}

ermt_status ermt_qsweep_write(const char* path) {
  return guard([&] {
    require(path, "null path");
    std::ofstream os(path);
    if (!os) throw embedrmt::IoError(std::string("cannot write ") + path);
    const auto rows = embedrmt::runner::sweep_q(embedrmt::runner::default_q_grid());
    embedrmt::runner::write_q_sweep_csv(rows, os);
    if (!os) throw embedrmt::IoError(std::string("write failed for ") + path);
  });
}

ermt_status ermt_validate(char** report, size_t* failures) {
  return guard([&] {
    require(report, "null argument");
    const auto r = embedrmt::validate::run_all();
    nlohmann::json j;
    j["seconds"] = r.seconds;
    j["failures"] = r.failures();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks)
      j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    *report = dup_string(j.dump(2));
    if (failures) *failures = r.failures();
  });
}

}  // extern "C"
