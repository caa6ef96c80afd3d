#include "evs_distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/numeric/odeint.hpp>

#include "error.hpp"

namespace embedrmt::evs {

namespace {

Moments moments_of(const std::vector<double>& x, const std::vector<double>& f) {
  // Trapezoid rule; the tables decay to negligible values at both ends, where
  // it converges faster than any fixed order.
  auto integrate = [&](auto&& g) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
      s += 0.5 * (x[i] - x[i - 1]) * (g(i - 1) * f[i - 1] + g(i) * f[i]);
    return s;
  };
  const double norm = integrate([](std::size_t) { return 1.0; });
  const double mean = integrate([&](std::size_t i) { return x[i]; }) / norm;
  auto central = [&](int p) {
    return integrate([&](std::size_t i) { return std::pow(x[i] - mean, p); }) / norm;
  };
  const double m2 = central(2);
  const double m3 = central(3);
  const double m4 = central(4);
  return {mean, m2, m3 / std::pow(m2, 1.5), m4 / (m2 * m2)};
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at,
                   double below, double above) {
  if (at < x.front()) return below;
  if (at > x.back()) return above;
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  if (it == x.end()) return y.back();
  const auto i = static_cast<std::size_t>(it - x.begin());
  const double t = (at - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + t * (y[i] - y[i - 1]);
}

}  // namespace

DistributionTable::DistributionTable(std::string name, std::vector<double> grid,
                                     std::vector<double> pdf, std::vector<double> cdf)
    : name_(std::move(name)), grid_(std::move(grid)), pdf_(std::move(pdf)), cdf_(std::move(cdf)) {
  if (grid_.size() < 3 || pdf_.size() != grid_.size() || cdf_.size() != grid_.size())
    throw ValidationError(name_ + ": grid, pdf and cdf must have equal length >= 3");
  double trap = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (i > 0) {
      if (!(grid_[i] > grid_[i - 1])) throw ValidationError(name_ + ": grid not ascending");
      if (cdf_[i] < cdf_[i - 1] - 1e-15) throw NumericalError(name_ + ": cdf decreases");
      trap += 0.5 * (grid_[i] - grid_[i - 1]) * (pdf_[i] + pdf_[i - 1]);
    }
    if (!(pdf_[i] >= 0.0)) throw NumericalError(name_ + ": negative or NaN pdf");
  }
  if (!(cdf_.front() < 1e-6) || !(cdf_.back() > 1.0 - 1e-6))
    throw NumericalError(name_ + ": cdf does not span (1e-6, 1 - 1e-6)");
  if (std::abs(trap - 1.0) > 1e-6)
    throw NumericalError(name_ + ": pdf integrates to " + std::to_string(trap));
  moments_ = moments_of(grid_, pdf_);
}

double DistributionTable::pdf_at(double x) const { return interpolate(grid_, pdf_, x, 0.0, 0.0); }
double DistributionTable::cdf_at(double x) const { return interpolate(grid_, cdf_, x, 0.0, 1.0); }

DistributionTable DistributionTable::standardized() const {
  const double sd = std::sqrt(moments_.variance);
  std::vector<double> g(grid_.size()), f(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    g[i] = (grid_[i] - moments_.mean) / sd;
    f[i] = pdf_[i] * sd;
  }
  return DistributionTable(name_ + " (standardized)", std::move(g), std::move(f), cdf_);
}

DistributionTable DistributionTable::mirrored() const {
  const std::size_t n = grid_.size();
  std::vector<double> g(n), f(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = -grid_[n - 1 - i];
    f[i] = pdf_[n - 1 - i];
    c[i] = 1.0 - cdf_[n - 1 - i];
  }
  return DistributionTable(name_ + " (reflected)", std::move(g), std::move(f), std::move(c));
}

void DistributionTable::write_csv(std::ostream& os) const {
  os << "# distribution," << name_ << '\n'
     << std::setprecision(10) << "# mean," << moments_.mean << '\n'
     << "# variance," << moments_.variance << '\n'
     << "# skewness," << moments_.skewness << '\n'
     << "# kurtosis," << moments_.kurtosis << '\n'
     << "x,pdf,cdf\n"
     << std::setprecision(17);
  for (std::size_t i = 0; i < grid_.size(); ++i)
    os << grid_[i] << ',' << pdf_[i] << ',' << cdf_[i] << '\n';
}

DistributionTable gaussian_std() {
  constexpr int kPoints = 1201;  // [-6, 6], step 0.01
  std::vector<double> g(kPoints), f(kPoints), c(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double x = -6.0 + 0.01 * i;
    g[i] = x;
    f[i] = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    c[i] = 0.5 * std::erfc(-x / std::numbers::sqrt2);
  }
  return DistributionTable("gaussian", std::move(g), std::move(f), std::move(c));
}

namespace {

// State along s: Q, Q', U = int_s^inf Q^2, R = int_s^inf (t - s) Q^2,
// J = int_s^inf Q. Carried in long double: perturbations of the Hastings-McLeod
// separatrix grow like exp((2 sqrt 2 / 3) |s|^{3/2}), about 1e13 at s = -10.
using PainleveState = std::array<long double, 5>;

struct PainleveRhs {
  void operator()(const PainleveState& y, PainleveState& dy, long double s) const {
    dy[0] = y[1];
    dy[1] = s * y[0] + 2.0L * y[0] * y[0] * y[0];
    dy[2] = -y[0] * y[0];
    dy[3] = -y[2];
    dy[4] = -y[0];
  }
};

struct TwSolution {
  std::vector<double> s;  // ascending
  std::vector<PainleveState> y;
};

TwSolution solve_painleve() {
  namespace odeint = boost::numeric::odeint;
  constexpr long double kStart = 10.0L;
  constexpr long double kStep = 0.01L;
  constexpr int kPoints = 2001;

  const long double ai = boost::math::airy_ai(kStart);
  const long double aip = boost::math::airy_ai_prime(kStart);
  // Closed-form Airy tails: int_x^inf Ai^2 = Ai'^2 - x Ai^2 and
  // int_x^inf (t - x) Ai^2 = (2x^2 Ai^2 - 2x Ai'^2 - Ai Ai') / 3.
  const long double tail_u = aip * aip - kStart * ai * ai;
  const long double tail_r =
      (2.0L * kStart * kStart * ai * ai - 2.0L * kStart * aip * aip - ai * aip) / 3.0L;
  boost::math::quadrature::exp_sinh<long double> tail;
  const long double tail_j =
      tail.integrate([](long double t) { return boost::math::airy_ai(kStart + t); });

  PainleveState y{ai, aip, tail_u, tail_r, tail_j};
  std::vector<long double> times(kPoints);
  for (int i = 0; i < kPoints; ++i) times[i] = kStart - kStep * i;

  TwSolution out;
  out.s.reserve(kPoints);
  out.y.reserve(kPoints);
  auto stepper = odeint::make_dense_output(
      1e-22L, 1e-17L, odeint::runge_kutta_dopri5<PainleveState, long double>());
  odeint::integrate_times(stepper, PainleveRhs{}, y, times.begin(), times.end(), -kStep,
                          [&](const PainleveState& state, long double s) {
                            out.s.push_back(static_cast<double>(s));
                            out.y.push_back(state);
                          });
  if (out.s.size() != static_cast<std::size_t>(kPoints))
    throw NumericalError("Painleve II integration stopped early");
  for (const auto& state : out.y)
    for (long double v : state)
      if (!std::isfinite(v)) throw NumericalError("Painleve II integration diverged");
  std::reverse(out.s.begin(), out.s.end());
  std::reverse(out.y.begin(), out.y.end());
  return out;
}

DistributionTable build_tracy_widom(int beta) {
  const TwSolution sol = solve_painleve();
  const std::size_t n = sol.s.size();
  std::vector<double> f(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& y = sol.y[i];
    if (beta == 2) {
      // F2 = exp(-R), F2' = U F2.
      c[i] = static_cast<double>(std::exp(-y[3]));
      f[i] = static_cast<double>(y[2] * std::exp(-y[3]));
    } else {
      // F1 = exp(-J/2) F2^{1/2}, F1' = F1 (U + Q) / 2.
      const long double f1 = std::exp(-0.5L * (y[4] + y[3]));
      c[i] = static_cast<double>(f1);
      f[i] = static_cast<double>(0.5L * (y[2] + y[0]) * f1);
    }
  }
  return DistributionTable("tracy-widom beta=" + std::to_string(beta), sol.s, std::move(f),
                           std::move(c));
}

struct TwCache {
  std::once_flag once;
  std::unique_ptr<DistributionTable> table;
};

std::size_t cache_slot(int beta, bool reflected, bool standardized) {
  if (beta != 1 && beta != 2) throw ValidationError("Tracy-Widom tables exist for beta = 1, 2");
  return static_cast<std::size_t>((beta - 1) * 4 + (reflected ? 2 : 0) + (standardized ? 1 : 0));
}

TwCache& cache_at(std::size_t slot) {
  static std::array<TwCache, 8> cache;
  return cache[slot];
}

}  // namespace

const DistributionTable& tracy_widom(int beta, bool reflected) {
  TwCache& entry = cache_at(cache_slot(beta, reflected, false));
  std::call_once(entry.once, [&] {
    if (reflected)
      entry.table = std::make_unique<DistributionTable>(tracy_widom(beta, false).mirrored());
    else
      entry.table = std::make_unique<DistributionTable>(build_tracy_widom(beta));
  });
  return *entry.table;
}

const DistributionTable& tracy_widom_standardized(int beta, bool reflected) {
  TwCache& entry = cache_at(cache_slot(beta, reflected, true));
  std::call_once(entry.once, [&] {
    entry.table = std::make_unique<DistributionTable>(tracy_widom(beta, reflected).standardized());
  });
  return *entry.table;
}

double tw_normalize(double e_min, double dim, int beta) {
  if (!(dim >= 1.0)) throw ValidationError("tw_normalize needs D >= 1");
  if (beta != 1 && beta != 2) throw ValidationError("beta must be 1 or 2");
  return std::pow(dim, 1.0 / 6.0) * (e_min + 2.0 * std::sqrt(beta * dim));
}

GumbelParams gumbel_standardize(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ValidationError("Gumbel mu must be > 0");
  GumbelParams p;
  p.mu = mu;
  // mu e^z ~ Gamma(mu, 1): E[z] = psi(mu) - ln mu, Var[z] = psi'(mu).
  p.v = 1.0 / std::sqrt(boost::math::trigamma(mu));
  p.u = -p.v * (boost::math::digamma(mu) - std::log(mu));
  p.log_w = mu * std::log(mu) - boost::math::lgamma(mu) - std::log(p.v);
  p.w = std::exp(p.log_w);
  return p;
}

double gumbel_pdf(double e, const GumbelParams& p) {
  const double z = (e - p.u) / p.v;
  const double expo = p.log_w + p.mu * z - p.mu * std::exp(z);
  if (!(expo > -745.0)) return 0.0;
  return std::exp(expo);
}

double gumbel_cdf(double e, const GumbelParams& p) {
  const double z = (e - p.u) / p.v;
  const double y = p.mu * std::exp(z);
  if (y == 0.0) return 0.0;
  if (!std::isfinite(y)) return 1.0;
  return boost::math::gamma_p(p.mu, y);
}

DistributionTable gumbel_table(double mu) {
  const GumbelParams p = gumbel_standardize(mu);
  constexpr double kStep = 0.01;
  constexpr double kTail = 1e-10;
  double lo = -1.0, hi = 1.0;
  while (gumbel_cdf(lo, p) > kTail && lo > -200.0) lo -= 1.0;
  while (1.0 - gumbel_cdf(hi, p) > kTail && hi < 200.0) hi += 1.0;
  const auto n = static_cast<std::size_t>(std::lround((hi - lo) / kStep)) + 1;
  std::vector<double> g(n), f(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo + kStep * static_cast<double>(i);
    f[i] = gumbel_pdf(g[i], p);
    c[i] = gumbel_cdf(g[i], p);
  }
  return DistributionTable("gumbel mu=" + std::to_string(mu), std::move(g), std::move(f),
                           std::move(c));
}

double spacing_reference(SpacingKind kind, double s) {
  if (!(s >= 0.0)) throw ValidationError("spacing must be >= 0");
  constexpr double pi = std::numbers::pi;
  switch (kind) {
    case SpacingKind::kPoisson:
      return std::exp(-s);
    case SpacingKind::kWignerGoe:
      return 0.5 * pi * s * std::exp(-0.25 * pi * s * s);
    case SpacingKind::kWignerGue:
      return (32.0 / (pi * pi)) * s * s * std::exp(-4.0 * s * s / pi);
  }
  throw ValidationError("unknown spacing kind");
}

const char* to_string(SpacingKind kind) {
  switch (kind) {
    case SpacingKind::kPoisson:
      return "poisson";
    case SpacingKind::kWignerGoe:
      return "wigner_goe";
    case SpacingKind::kWignerGue:
      return "wigner_gue";
  }
  return "unknown";
}

SpacingKind wigner_for_beta(int beta) {
  return beta == 2 ? SpacingKind::kWignerGue : SpacingKind::kWignerGoe;
}

}  // namespace embedrmt::evs
