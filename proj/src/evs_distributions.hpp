#pragma once

// Reference distributions for extreme-value comparisons: standard Gaussian,
// Tracy-Widom (beta = 1, 2), the modified Gumbel family G_mu and the
// nearest-neighbour spacing laws.

#include <iosfwd>
#include <string>
#include <vector>

namespace embedrmt::evs {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;  // full (Gaussian = 3)
};

// Tabulated density on an ascending grid. Construction checks that the CDF is
// non-decreasing and spans (1e-6, 1 - 1e-6) and that the trapezoid integral
// of the pdf is 1 within 1e-6.
class DistributionTable {
 public:
  DistributionTable(std::string name, std::vector<double> grid, std::vector<double> pdf,
                    std::vector<double> cdf);

  const std::string& name() const noexcept { return name_; }
  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& pdf() const noexcept { return pdf_; }
  const std::vector<double>& cdf() const noexcept { return cdf_; }
  const Moments& moments() const noexcept { return moments_; }
  std::size_t size() const noexcept { return grid_.size(); }

  // Linear interpolation; 0 (pdf) or 0/1 (cdf) outside the grid.
  double pdf_at(double x) const;
  double cdf_at(double x) const;

  // x -> (x - mean) / sd with the density rescaled accordingly.
  DistributionTable standardized() const;
  // x -> -x.
  DistributionTable mirrored() const;

  // Leading "# key,value" lines with the moments, then "x,pdf,cdf".
  void write_csv(std::ostream& os) const;

 private:
  std::string name_;
  std::vector<double> grid_;
  std::vector<double> pdf_;
  std::vector<double> cdf_;
  Moments moments_;
};

DistributionTable gaussian_std();

// Tracy-Widom F_beta from the Hastings-McLeod solution of Painleve II,
// integrated from s = +10 (Airy data) to s = -10 on a 0.01 grid. `reflected`
// mirrors x -> -x, the lowest-eigenvalue convention. Tables are built once
// per process and returned by reference.
const DistributionTable& tracy_widom(int beta, bool reflected);

// Standardized (mean 0, variance 1) version of tracy_widom(beta, reflected).
const DistributionTable& tracy_widom_standardized(int beta, bool reflected);

// D^{1/6} (E_min + 2 sqrt(beta D)).
double tw_normalize(double e_min, double dim, int beta);

// G_mu(E) = w exp[mu z - mu e^z], z = (E - u) / v, standardized to mean 0 and
// variance 1. v > 0, so the density is left-skewed.
struct GumbelParams {
  double mu = 1.0;
  double u = 0.0;
  double v = 1.0;
  double w = 1.0;
  double log_w = 0.0;
};

GumbelParams gumbel_standardize(double mu);
double gumbel_pdf(double e, const GumbelParams& p);
double gumbel_cdf(double e, const GumbelParams& p);
DistributionTable gumbel_table(double mu);

enum class SpacingKind { kPoisson, kWignerGoe, kWignerGue };

double spacing_reference(SpacingKind kind, double s);
const char* to_string(SpacingKind kind);
SpacingKind wigner_for_beta(int beta);

}  // namespace embedrmt::evs
