#pragma once

// Aggregation of per-member extremal data: moments of the lowest-eigenvalue
// distribution, exponent inversions of the centroid and width ansatz,
// histogram fits scored by residual sum of squares, and lowest-pair spacings.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evs_distributions.hpp"

namespace embedrmt::stats {

struct EnsembleRecord {
  std::uint64_t member_index = 0;
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double spectrum_mean = 0.0;
  double spectrum_variance = 0.0;
  double q_i = 0.0;
};

struct MomentSummary {
  double centroid = 0.0;  // lambda_c
  double width = 0.0;     // sigma_lambda, from the unbiased variance
  double skewness = 0.0;
  double kurtosis = 0.0;  // full
  std::size_t samples = 0;
};

// Compensated sums; n >= 4.
MomentSummary moments(std::span<const double> values);

// (lambda - lambda_c) / sigma_lambda.
double scale_lowest(double lambda, double centroid, double width);

// Inversion of lambda_c = -2 (beta Lambda0)^alpha / sqrt(1 - q).
double alpha_from_centroid(double centroid, double q, double lambda0, int beta);
// Forward map of the same ansatz.
double centroid_ansatz(double alpha, double q, double lambda0, int beta);

struct ErgodicAlpha {
  double alpha = 0.0;
  double centroid = 0.0;  // < lambda_i sqrt(1 - q_i) >
  std::size_t used = 0;
  std::size_t excluded = 0;  // members with q_i >= 1
};

// Centroid from per-member q_i; members with q_i >= 1 are skipped and counted.
ErgodicAlpha alpha_ergodic(std::span<const EnsembleRecord> records, double lambda0, int beta);

struct WidthExponents {
  double mu1 = 0.0;
  double mu2 = 0.0;
};

// sigma = Lambda0^mu1 and sigma = Lambda0^mu2 d_k^{-1/2}, solved for the
// exponents.
WidthExponents mu1_mu2_from_width(double width, double lambda0, double dim_k);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> centers;
  std::vector<double> densities;
  std::size_t n_samples = 0;   // values that fell inside [lo, hi]
  std::size_t n_outside = 0;

  double bin_width() const noexcept {
    return centers.empty() ? 0.0 : (hi - lo) / static_cast<double>(centers.size());
  }
};

struct Range {
  double lo;
  double hi;
};

// Equal-width bins over `range` (default: [min, max] of the data). Values
// outside the range are counted in n_outside and excluded; densities are
// normalized over the included values so sum(density * width) = 1.
Histogram histogram(std::span<const double> values, std::size_t bins,
                    std::optional<Range> range = std::nullopt);

// Default binning for standardized lowest eigenvalues.
inline constexpr std::size_t kDefaultBins = 40;
inline constexpr Range kDefaultLowestRange{-5.0, 4.0};
// Default binning for normalized lowest-pair spacings.
inline constexpr std::size_t kDefaultSpacingBins = 25;
inline constexpr Range kDefaultSpacingRange{0.0, 5.0};

enum class FitKind { kGaussian, kGumbel, kTracyWidom };
const char* to_string(FitKind kind);

struct FitReport {
  std::string kind;
  std::optional<double> mu;        // Gumbel only
  std::vector<double> mu_minima;   // every local RSS minimum found by the bracket scan
  double rss = 0.0;
  std::size_t bins = 0;
  std::size_t n_samples = 0;
};

// Sum over bins of (density - pdf(center))^2.
double residual_sum_of_squares(const Histogram& h, const auto& pdf) {
  double rss = 0.0;
  for (std::size_t i = 0; i < h.centers.size(); ++i) {
    const double r = h.densities[i] - pdf(h.centers[i]);
    rss += r * r;
  }
  return rss;
}

inline constexpr double kGumbelMuMin = 0.2;
inline constexpr double kGumbelMuMax = 50.0;

// Fit of a standardized histogram. Gaussian and Tracy-Widom (reflected,
// standardized) have no free parameter; for Gumbel the RSS is minimized over
// mu in [0.2, 50] by a log-spaced bracket scan followed by golden-section
// refinement to |d mu| < 1e-3 in every bracket.
FitReport fit_distribution(const Histogram& h, FitKind kind, int beta);

// All three fits on the same bins; `winner` indexes the smallest RSS.
struct FitComparison {
  std::vector<FitReport> fits;
  std::size_t winner = 0;
};
FitComparison compare_fits(const Histogram& h, int beta);

FitReport fit_spacing(const Histogram& h, evs::SpacingKind kind);

// s_i = (lambda1_i - lambda0_i) / mean_j (lambda1_j - lambda0_j).
std::vector<double> spacing_sample(std::span<const EnsembleRecord> records);

}  // namespace embedrmt::stats
