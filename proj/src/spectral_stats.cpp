#include "spectral_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "error.hpp"
#include "numerics.hpp"

namespace embedrmt::stats {

MomentSummary moments(std::span<const double> values) {
  if (values.size() < 4) throw ValidationError("moments need at least 4 values");
  const auto n = static_cast<double>(values.size());
  const double mean = numerics::compensated_sum(values) / n;
  numerics::CompensatedSum s2, s3, s4;
  for (double x : values) {
    const double d = x - mean;
    s2.add(d * d);
    s3.add(d * d * d);
    s4.add(d * d * d * d);
  }
  const double m2 = s2.value() / n;
  const double m3 = s3.value() / n;
  const double m4 = s4.value() / n;
  MomentSummary out;
  out.centroid = mean;
  out.width = std::sqrt(s2.value() / (n - 1.0));
  out.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  out.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
  out.samples = values.size();
  return out;
}

double scale_lowest(double lambda, double centroid, double width) {
  if (!(width > 0.0)) throw ValidationError("sigma_lambda must be > 0");
  return (lambda - centroid) / width;
}

double alpha_from_centroid(double centroid, double q, double lambda0, int beta) {
  if (!(centroid < 0.0)) throw ValidationError("centroid must be negative");
  if (!(q >= 0.0 && q < 1.0)) throw ValidationError("alpha inversion needs 0 <= q < 1");
  const double base = beta * lambda0;
  if (!(base > 1.0)) throw ValidationError("beta * Lambda0 must exceed 1");
  return std::log(-centroid * std::sqrt(1.0 - q) / 2.0) / std::log(base);
}

double centroid_ansatz(double alpha, double q, double lambda0, int beta) {
  return -2.0 * std::pow(beta * lambda0, alpha) / std::sqrt(1.0 - q);
}

ErgodicAlpha alpha_ergodic(std::span<const EnsembleRecord> records, double lambda0, int beta) {
  ErgodicAlpha out;
  numerics::CompensatedSum sum;
  for (const auto& r : records) {
    if (!(r.q_i < 1.0)) {
      ++out.excluded;
      continue;
    }
    sum.add(r.lambda0 * std::sqrt(1.0 - r.q_i));
    ++out.used;
  }
  if (out.used == 0) throw ValidationError("no members with q_i < 1");
  out.centroid = sum.value() / static_cast<double>(out.used);
  if (!(out.centroid < 0.0)) throw ValidationError("ergodic centroid must be negative");
  const double base = beta * lambda0;
  if (!(base > 1.0)) throw ValidationError("beta * Lambda0 must exceed 1");
  out.alpha = std::log(-out.centroid / 2.0) / std::log(base);
  return out;
}

WidthExponents mu1_mu2_from_width(double width, double lambda0, double dim_k) {
  if (!(width > 0.0)) throw ValidationError("sigma_lambda must be > 0");
  if (!(lambda0 > 1.0)) throw ValidationError("Lambda0 must exceed 1");
  if (!(dim_k >= 1.0)) throw ValidationError("d_k must be >= 1");
  const double log_l = std::log(lambda0);
  return {std::log(width) / log_l, (std::log(width) + 0.5 * std::log(dim_k)) / log_l};
}

Histogram histogram(std::span<const double> values, std::size_t bins, std::optional<Range> range) {
  if (values.empty()) throw ValidationError("histogram of an empty sample");
  if (bins == 0) throw ValidationError("histogram needs at least one bin");
  if (values.size() < bins) throw ValidationError("histogram needs at least as many values as bins");
  Range r = range.value_or(Range{*std::min_element(values.begin(), values.end()),
                                 *std::max_element(values.begin(), values.end())});
  if (!(r.hi > r.lo)) {
    r.lo -= 0.5;
    r.hi += 0.5;
  }
  Histogram h;
  h.lo = r.lo;
  h.hi = r.hi;
  h.centers.resize(bins);
  std::vector<std::size_t> counts(bins, 0);
  const double width = (r.hi - r.lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) h.centers[i] = r.lo + (static_cast<double>(i) + 0.5) * width;
  for (double x : values) {
    if (!(x >= r.lo && x <= r.hi)) {
      ++h.n_outside;
      continue;
    }
    auto b = static_cast<std::size_t>((x - r.lo) / width);
    if (b >= bins) b = bins - 1;
    ++counts[b];
    ++h.n_samples;
  }
  if (h.n_samples == 0) throw ValidationError("no values inside the histogram range");
  h.densities.resize(bins);
  const double norm = static_cast<double>(h.n_samples) * width;
  for (std::size_t i = 0; i < bins; ++i) h.densities[i] = static_cast<double>(counts[i]) / norm;
  return h;
}

const char* to_string(FitKind kind) {
  switch (kind) {
    case FitKind::kGaussian:
      return "gaussian";
    case FitKind::kGumbel:
      return "gumbel";
    case FitKind::kTracyWidom:
      return "tw";
  }
  return "unknown";
}

namespace {

double gumbel_rss(const Histogram& h, double mu) {
  const evs::GumbelParams p = evs::gumbel_standardize(mu);
  return residual_sum_of_squares(h, [&](double x) { return evs::gumbel_pdf(x, p); });
}

// Golden-section search on [a, b] until the bracket is narrower than tol.
double golden_section(const Histogram& h, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = gumbel_rss(h, c);
  double fd = gumbel_rss(h, d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = gumbel_rss(h, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = gumbel_rss(h, d);
    }
  }
  return 0.5 * (a + b);
}

FitReport fit_gumbel(const Histogram& h) {
  constexpr int kScan = 81;
  std::vector<double> mu(kScan), rss(kScan);
  const double log_lo = std::log(kGumbelMuMin);
  const double log_hi = std::log(kGumbelMuMax);
  for (int i = 0; i < kScan; ++i) {
    mu[i] = std::exp(log_lo + (log_hi - log_lo) * i / (kScan - 1));
    rss[i] = gumbel_rss(h, mu[i]);
  }
  FitReport report;
  report.kind = to_string(FitKind::kGumbel);
  report.bins = h.centers.size();
  report.n_samples = h.n_samples;
  report.rss = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const bool left_ok = i == 0 || rss[i] <= rss[i - 1];
    const bool right_ok = i == kScan - 1 || rss[i] < rss[i + 1];
    if (!(left_ok && right_ok)) continue;
    const double a = mu[std::max(i - 1, 0)];
    const double b = mu[std::min(i + 1, kScan - 1)];
    const double best = golden_section(h, a, b, 1e-4);
    const double best_rss = gumbel_rss(h, best);
    report.mu_minima.push_back(best);
    if (best_rss < report.rss) {
      report.rss = best_rss;
      report.mu = best;
    }
  }
  return report;
}

}  // namespace

FitReport fit_distribution(const Histogram& h, FitKind kind, int beta) {
  if (kind == FitKind::kGumbel) return fit_gumbel(h);
  FitReport report;
  report.kind = to_string(kind);
  report.bins = h.centers.size();
  report.n_samples = h.n_samples;
  if (kind == FitKind::kGaussian) {
    report.rss = residual_sum_of_squares(h, [](double x) {
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    });
  } else {
    const evs::DistributionTable& tw = evs::tracy_widom_standardized(beta, true);
    report.rss = residual_sum_of_squares(h, [&](double x) { return tw.pdf_at(x); });
  }
  return report;
}

FitComparison compare_fits(const Histogram& h, int beta) {
  FitComparison c;
  for (FitKind kind : {FitKind::kGaussian, FitKind::kGumbel, FitKind::kTracyWidom})
    c.fits.push_back(fit_distribution(h, kind, beta));
  for (std::size_t i = 1; i < c.fits.size(); ++i)
    if (c.fits[i].rss < c.fits[c.winner].rss) c.winner = i;
  return c;
}

FitReport fit_spacing(const Histogram& h, evs::SpacingKind kind) {
  FitReport report;
  report.kind = evs::to_string(kind);
  report.bins = h.centers.size();
  report.n_samples = h.n_samples;
  report.rss = residual_sum_of_squares(h, [&](double s) { return evs::spacing_reference(kind, s); });
  return report;
}

std::vector<double> spacing_sample(std::span<const EnsembleRecord> records) {
  if (records.size() < 2) throw ValidationError("spacing sample needs at least 2 members");
  std::vector<double> s(records.size());
  numerics::CompensatedSum total;
  for (std::size_t i = 0; i < records.size(); ++i) {
    s[i] = records[i].lambda1 - records[i].lambda0;
    total.add(s[i]);
  }
  const double mean = total.value() / static_cast<double>(records.size());
  if (!(mean > 0.0)) throw ValidationError("mean lowest spacing is zero");
  for (double& x : s) x /= mean;
  return s;
}

}  // namespace embedrmt::stats
