#include "validate.hpp"

#include <chrono>
#include <cmath>
#include <algorithm>
#include <functional>
#include <numeric>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "eigensolver.hpp"
#include "error.hpp"
#include "evs_distributions.hpp"
#include "experiment_runner.hpp"
#include "kbody_ensemble.hpp"
#include "q_analysis.hpp"
#include "spectral_stats.hpp"

namespace embedrmt::validate {

namespace {

using Polynomial = std::map<std::vector<int>, double>;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Polynomial monomial_of(const fock::OccupationState& s) {
  std::vector<int> e(s.occupations().begin(), s.occupations().end());
  double norm = 1.0;
  for (int n : e) norm *= factorial(n);
  return {{e, 1.0 / std::sqrt(norm)}};
}

Polynomial differentiate(const Polynomial& p, std::size_t mode) {
  Polynomial out;
  for (const auto& [e, c] : p) {
    if (e[mode] == 0) continue;
    auto d = e;
    --d[mode];
    out[d] += c * e[mode];
  }
  return out;
}

Polynomial multiply(const Polynomial& p, std::size_t mode) {
  Polynomial out;
  for (const auto& [e, c] : p) {
    auto d = e;
    ++d[mode];
    out[d] += c;
  }
  return out;
}

double integrate_support(const std::function<double(double)>& f, double q) {
  if (q == 1.0) {
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    return gk.integrate(f, -40.0, 40.0, 15, 1e-13);
  }
  const auto s = qnorm::support(q);
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, s.lo, s.hi);
}

struct Suite {
  Report report;

  void check(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    try {
      r.detail = body();
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    report.checks.push_back(std::move(r));
  }
};

std::string fmt(const char* what, double got, double want) {
  std::ostringstream os;
  os.precision(12);
  os << what << ": got " << got << ", expected " << want;
  return os.str();
}

}  // namespace

std::size_t Report::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.passed ? 0 : 1;
  return n;
}

double ladder_matrix_element(const fock::OccupationState& bra, const fock::OccupationState& create,
                             const fock::OccupationState& annihilate,
                             const fock::OccupationState& ket) {
  Polynomial p = monomial_of(ket);
  for (int i = 0; i < annihilate.modes(); ++i) {
    for (int t = 0; t < annihilate[i]; ++t) p = differentiate(p, static_cast<std::size_t>(i));
    for (auto& [e, c] : p) c /= std::sqrt(factorial(annihilate[i]));
  }
  for (int i = 0; i < create.modes(); ++i) {
    for (int t = 0; t < create[i]; ++t) p = multiply(p, static_cast<std::size_t>(i));
    for (auto& [e, c] : p) c /= std::sqrt(factorial(create[i]));
  }
  const std::vector<int> target(bra.occupations().begin(), bra.occupations().end());
  const auto it = p.find(target);
  if (it == p.end()) return 0.0;
  double norm = 1.0;
  for (int n : target) norm *= factorial(n);
  return it->second * std::sqrt(norm);
}

Report run_all() {
  const auto started = std::chrono::steady_clock::now();
  Suite suite;

  suite.check("fock: enumerate_basis length = dimension (N <= 8, p <= 12)", [] {
    for (int n = 1; n <= 8; ++n)
      for (int p = 0; p <= 12; ++p)
        if (fock::enumerate_basis(n, p).size() != fock::dimension(n, p))
          return "mismatch at N=" + std::to_string(n) + " p=" + std::to_string(p);
    return std::string();
  });

  suite.check("fock: index_state/state_index round trip (N <= 6, p <= 10)", [] {
    for (int n = 1; n <= 6; ++n)
      for (int p = 0; p <= 10; ++p) {
        const std::uint64_t d = fock::dimension(n, p);
        for (std::uint64_t i = 0; i < d; ++i)
          if (fock::state_index(fock::index_state(i, n, p)) != i)
            return "round trip fails at N=" + std::to_string(n) + " p=" + std::to_string(p);
      }
    return std::string();
  });

  suite.check("fock/embed: embedding equals ladder-operator oracle (N <= 3, m <= 4)", [] {
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n)
      for (int m = 1; m <= 4; ++m)
        for (int k = 1; k <= m; ++k) {
          const auto v = ensemble::sample_kbody(n, k, 1, 1000 + 100 * n + 10 * m + k);
          const auto h = ensemble::embed(n, m, k, v);
          const auto states = fock::enumerate_basis(n, m);
          const auto labels = fock::enumerate_basis(n, k);
          for (std::size_t A = 0; A < states.size(); ++A)
            for (std::size_t B = 0; B < states.size(); ++B) {
              double expect = 0.0;
              for (std::size_t a = 0; a < labels.size(); ++a)
                for (std::size_t b = 0; b < labels.size(); ++b)
                  expect += v.real(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *
                            ladder_matrix_element(states[A], labels[a], labels[b], states[B]);
              worst = std::max(worst, std::abs(expect - h.real(static_cast<Eigen::Index>(A),
                                                               static_cast<Eigen::Index>(B))));
            }
        }
    return worst < 1e-12 ? std::string() : fmt("max deviation", worst, 0.0);
  });

  suite.check("ensemble: embedded Hamiltonians are exactly self-adjoint", [] {
    for (int beta : {1, 2}) {
      const ensemble::Ensemble ens({4, 5, 2, beta, 3, 11});
      for (std::uint64_t i = 0; i < 3; ++i)
        if (!ens.member(i).is_self_adjoint()) return std::string("asymmetric member");
    }
    return std::string();
  });

  suite.check("ensemble: results independent of worker count", [] {
    const auto one = runner::compute_members(4, 4, 2, 1, 24, 5, 1, true);
    const auto many = runner::compute_members(4, 4, 2, 1, 24, 5, 3, true);
    for (std::size_t i = 0; i < one.size(); ++i)
      if (one[i].eigenvalues != many[i].eigenvalues || one[i].record.q_i != many[i].record.q_i)
        return "member " + std::to_string(i) + " differs";
    return std::string();
  });

  suite.check("eigensolver: spectrum invariant under permutation similarity", [] {
    const ensemble::Ensemble ens({3, 4, 2, 1, 1, 99});
    const auto h = ens.member(0);
    const Eigen::Index d = h.dim();
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 g(3);
    std::shuffle(perm.begin(), perm.end(), g);
    ensemble::SelfAdjointMatrix p;
    p.real.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) p.real(i, j) = h.real(perm[i], perm[j]);
    const auto a = eigen::eigenvalues_selfadjoint(h).eigenvalues;
    const auto b = eigen::eigenvalues_selfadjoint(p).eigenvalues;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst < 1e-10 ? std::string() : fmt("max deviation", worst, 0.0);
  });

  suite.check("q-normal: normalization and unit variance, q = 0, 0.1, ..., 1", [] {
    for (int i = 0; i <= 10; ++i) {
      const double q = i / 10.0;
      const double norm = integrate_support([q](double x) { return qnorm::q_normal_pdf(x, q); }, q);
      const double var =
          integrate_support([q](double x) { return x * x * qnorm::q_normal_pdf(x, q); }, q);
      if (std::abs(norm - 1.0) > 1e-8) return fmt("normalization", norm, 1.0);
      if (std::abs(var - 1.0) > 1e-8) return fmt("variance", var, 1.0);
    }
    return std::string();
  });

  suite.check("q-Hermite: orthogonality with weight f_qN (n, m <= 5)", [] {
    for (double q : {0.0, 0.3, 0.7}) {
      for (int n = 0; n <= 5; ++n)
        for (int m = 0; m <= 5; ++m) {
          const double v = integrate_support(
              [=](double x) {
                return qnorm::q_hermite(n, x, q) * qnorm::q_hermite(m, x, q) *
                       qnorm::q_normal_pdf(x, q);
              },
              q);
          const double want = n == m ? qnorm::q_factorial(n, q) : 0.0;
          if (std::abs(v - want) > 1e-6) return fmt("orthogonality", v, want);
        }
    }
    return std::string();
  });

  suite.check("q(N, m, m) = 1 / d_m^2", [] {
    for (int n = 2; n <= 6; ++n)
      for (int m = 1; m <= 8; ++m) {
        const double d = static_cast<double>(fock::dimension(n, m));
        const double q = qnorm::q_parameter(n, m, m);
        if (std::abs(q * d * d - 1.0) > 1e-12) return fmt("q d^2", q * d * d, 1.0);
      }
    return std::string();
  });

  suite.check("Tracy-Widom: reflected standardized skewness and kurtosis", [] {
    const double want[2][2] = {{-0.2935, 3.1652}, {-0.2241, 3.0934}};
    for (int beta : {1, 2}) {
      const auto& m = evs::tracy_widom_standardized(beta, true).moments();
      if (std::abs(m.skewness - want[beta - 1][0]) > 1e-3) return fmt("skewness", m.skewness, want[beta - 1][0]);
      if (std::abs(m.kurtosis - want[beta - 1][1]) > 1e-3) return fmt("kurtosis", m.kurtosis, want[beta - 1][1]);
    }
    return std::string();
  });

  suite.check("Gumbel: standardized mean 0 and variance 1 by quadrature", [] {
    for (double mu : {0.5, 1.0, std::numbers::pi / 2.0, 3.0, 10.0}) {
      const auto p = evs::gumbel_standardize(mu);
      boost::math::quadrature::gauss_kronrod<double, 61> gk;
      auto moment = [&](int k) {
        return gk.integrate([&](double e) { return std::pow(e, k) * evs::gumbel_pdf(e, p); },
                            -80.0, 20.0, 20, 1e-14);
      };
      if (std::abs(moment(0) - 1.0) > 1e-8) return fmt("normalization", moment(0), 1.0);
      if (std::abs(moment(1)) > 1e-8) return fmt("mean", moment(1), 0.0);
      if (std::abs(moment(2) - 1.0) > 1e-8) return fmt("variance", moment(2), 1.0);
    }
    return std::string();
  });

  suite.check("spacing references: unit mean spacing", [] {
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    for (auto kind : {evs::SpacingKind::kPoisson, evs::SpacingKind::kWignerGoe,
                      evs::SpacingKind::kWignerGue}) {
      const double norm =
          gk.integrate([&](double s) { return evs::spacing_reference(kind, s); }, 0.0, 60.0, 20, 1e-14);
      const double mean = gk.integrate(
          [&](double s) { return s * evs::spacing_reference(kind, s); }, 0.0, 60.0, 20, 1e-14);
      if (std::abs(norm - 1.0) > 1e-8) return fmt("normalization", norm, 1.0);
      if (std::abs(mean - 1.0) > 1e-8) return fmt("mean spacing", mean, 1.0);
    }
    return std::string();
  });

  suite.check("stats: RSS vanishes when densities come from the candidate pdf", [] {
    stats::Histogram h;
    h.lo = -5.0;
    h.hi = 4.0;
    for (int i = 0; i < 40; ++i) h.centers.push_back(-5.0 + (i + 0.5) * 9.0 / 40.0);
    for (double x : h.centers)
      h.densities.push_back(std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi));
    const double rss = stats::fit_distribution(h, stats::FitKind::kGaussian, 1).rss;
    return rss <= 1e-20 ? std::string() : fmt("rss", rss, 0.0);
  });

  auto& r = suite.report;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return r;
}

}  // namespace embedrmt::validate
