#ifndef EMBEDRMT_EMBEDRMT_H
#define EMBEDRMT_EMBEDRMT_H

/* C interface to the embedded random-matrix library.
 *
 * Every function returns an ermt_status. On failure the message is available
 * from ermt_last_error() on the same thread until the next failing call.
 * Strings handed out by the library are released with ermt_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(EMBEDRMT_BUILDING_LIBRARY)
#define ERMT_API __attribute__((visibility("default")))
#else
#define ERMT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ermt_status {
  ERMT_OK = 0,
  ERMT_INVALID_ARGUMENT = 1,
  ERMT_OVERFLOW = 2,
  ERMT_NUMERICAL = 3,
  ERMT_IO = 4,
  ERMT_CONFIG = 5,
  ERMT_INTERNAL = 99
} ermt_status;

typedef struct ermt_table ermt_table;
typedef struct ermt_hamiltonian ermt_hamiltonian;
typedef struct ermt_config ermt_config;

typedef struct ermt_moments {
  double mean;
  double variance;
  double skewness;
  double kurtosis; /* full kurtosis, Gaussian = 3 */
} ermt_moments;

typedef struct ermt_gumbel {
  double mu;
  double u;
  double v;
  double log_w;
} ermt_gumbel;

typedef enum ermt_spacing {
  ERMT_SPACING_POISSON = 0,
  ERMT_SPACING_WIGNER_GOE = 1,
  ERMT_SPACING_WIGNER_GUE = 2
} ermt_spacing;

ERMT_API const char* ermt_version(void);
/* Message of the last failure on this thread, "" if none. */
ERMT_API const char* ermt_last_error(void);
/* Field named by the last ERMT_CONFIG failure, "" otherwise. */
ERMT_API const char* ermt_last_error_field(void);
ERMT_API void ermt_string_free(char* s);

/* Number of m-boson states on N modes. */
ERMT_API ermt_status ermt_dimension(int modes, int particles, uint64_t* out);
/* Exact q(N, m, k). */
ERMT_API ermt_status ermt_q_parameter(int modes, int particles, int rank, double* out);
/* Lambda_B^nu(N, m, r). */
ERMT_API ermt_status ermt_lambda_b(int modes, int particles, int r, int nu, uint64_t* out);
ERMT_API ermt_status ermt_q_normal_pdf(double x, double q, double* out);

/* Tabulated distributions. */
ERMT_API ermt_status ermt_table_tracy_widom(int beta, int reflected, int standardized,
                                            ermt_table** out);
ERMT_API ermt_status ermt_table_gaussian(ermt_table** out);
ERMT_API ermt_status ermt_table_gumbel(double mu, ermt_table** out);
ERMT_API size_t ermt_table_size(const ermt_table* t);
/* Copies up to `capacity` grid points. Any of x, pdf, cdf may be NULL. */
ERMT_API ermt_status ermt_table_values(const ermt_table* t, double* x, double* pdf, double* cdf,
                                       size_t capacity);
ERMT_API ermt_status ermt_table_pdf_at(const ermt_table* t, double x, double* out);
ERMT_API ermt_status ermt_table_moments(const ermt_table* t, ermt_moments* out);
ERMT_API ermt_status ermt_table_write_csv(const ermt_table* t, const char* path);
ERMT_API void ermt_table_free(ermt_table* t);

ERMT_API ermt_status ermt_gumbel_params(double mu, ermt_gumbel* out);
ERMT_API ermt_status ermt_gumbel_pdf(double e, double mu, double* out);
ERMT_API ermt_status ermt_spacing_reference(ermt_spacing kind, double s, double* out);

/* One member of the embedded ensemble. */
ERMT_API ermt_status ermt_hamiltonian_sample(int modes, int particles, int rank, int beta,
                                             uint64_t master_seed, uint64_t index,
                                             ermt_hamiltonian** out);
ERMT_API size_t ermt_hamiltonian_dimension(const ermt_hamiltonian* h);
/* Entry (row, col); imag is 0 for beta = 1. Either output may be NULL. */
ERMT_API ermt_status ermt_hamiltonian_entry(const ermt_hamiltonian* h, size_t row, size_t col,
                                            double* re, double* im);
/* Ascending eigenvalues into `out`, which must hold dimension() values. */
ERMT_API ermt_status ermt_hamiltonian_eigenvalues(const ermt_hamiltonian* h, double* out);
ERMT_API void ermt_hamiltonian_free(ermt_hamiltonian* h);

/* Run configuration (JSON). */
ERMT_API ermt_status ermt_config_load(const char* path, ermt_config** out);
ERMT_API ermt_status ermt_config_parse(const char* json_text, ermt_config** out);
ERMT_API ermt_status ermt_config_set_seed(ermt_config* c, uint64_t seed);
ERMT_API ermt_status ermt_config_set_workers(ermt_config* c, unsigned workers);
ERMT_API ermt_status ermt_config_set_output_dir(ermt_config* c, const char* path);
ERMT_API ermt_status ermt_config_set_bins(ermt_config* c, size_t bins);
/* Normalized configuration as JSON. */
ERMT_API ermt_status ermt_config_json(const ermt_config* c, char** out);
ERMT_API void ermt_config_free(ermt_config* c);

/* Runs every rank in the configuration and writes the output directory.
 * `manifest` receives the manifest JSON; `complete` is 0 if any rank failed. */
ERMT_API ermt_status ermt_run(const ermt_config* c, char** manifest, int* complete);
/* Exact q over the default (N, m, k) grid, written as CSV. */
ERMT_API ermt_status ermt_qsweep_write(const char* path);
/* Invariant suite. `report` receives JSON; `failures` the failing count. */
ERMT_API ermt_status ermt_validate(char** report, size_t* failures);

#ifdef __cplusplus
}
#endif

#endif
