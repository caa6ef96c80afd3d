#include <doctest.h>

#include <cmath>
#include <functional>
#include <tuple>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "eigensolver.hpp"
#include "error.hpp"
#include "fock_basis.hpp"
#include "helpers.hpp"
#include "kbody_ensemble.hpp"
#include "q_analysis.hpp"

using namespace embedrmt;

namespace {

double integrate(const std::function<double(double)>& f, double q) {
  if (q == 1.0) {
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    return gk.integrate(f, -40.0, 40.0, 15, 1e-13);
  }
  const double hi = 2.0 / std::sqrt(1.0 - q);
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, -hi, hi);
}

// Same closed form, summed in long double from Pascal-triangle binomials.
long double q_reference(int n, int m, int k) {
  auto lam = [&](int r, int nu) {
    return static_cast<long double>(oracle::pascal(m - nu, r)) *
           static_cast<long double>(oracle::pascal(n + m + nu - 1, r));
  };
  auto dB = [&](int nu) {
    const long double a = static_cast<long double>(oracle::pascal(n + nu - 1, nu));
    const long double b = nu >= 1 ? static_cast<long double>(oracle::pascal(n + nu - 2, nu - 1)) : 0.0L;
    return a * a - b * b;
  };
  long double sum = 0.0L;
  for (int nu = 0; nu <= std::min(k, m - k); ++nu) sum += lam(m - k, nu) * lam(k, nu) * dB(nu);
  const long double l0 = lam(k, 0);
  return sum / (l0 * l0) / static_cast<long double>(oracle::pascal(n + m - 1, m));
}

}  // namespace

TEST_CASE("q-numbers and q-factorials") {
  CHECK(qnorm::q_number(3, 1.0) == 3.0);
  CHECK(qnorm::q_number(3, 0.5) == 1.75);
  CHECK(qnorm::q_number(0, 0.3) == 0.0);
  for (double q : {0.0, 0.4, 1.0}) CHECK(qnorm::q_factorial(0, q) == 1.0);
  CHECK(qnorm::q_factorial(4, 1.0) == 24.0);
  CHECK(qnorm::q_factorial(3, 0.5) == doctest::Approx(1.0 * 1.5 * 1.75));
}

TEST_CASE("support interval") {
  const auto s0 = qnorm::support(0.0);
  CHECK(s0.lo == -2.0);
  CHECK(s0.hi == 2.0);
  CHECK_FALSE(s0.unbounded);
  const auto s = qnorm::support(0.75);
  CHECK(s.hi == doctest::Approx(4.0));
  CHECK(s.lo == -s.hi);
  CHECK(qnorm::support(1.0).unbounded);
  CHECK_THROWS_AS(qnorm::support(1.5), ValidationError);
  CHECK_THROWS_AS(qnorm::support(-0.1), ValidationError);
}

TEST_CASE("product truncation bound") {
  for (double q : {0.1, 0.5, 0.9, 0.97}) {
    const int k = qnorm::product_truncation(q);
    CHECK(std::pow(q, k + 1) < 1e-16);
    CHECK(std::pow(q, k) >= 1e-16);
  }
  // ln(1e-16) / ln(0.97) = 1209.6
  CHECK(qnorm::product_truncation(0.97) == 1209);
}

TEST_CASE("q-normal examples") {
  CHECK(qnorm::q_normal_pdf(0.0, 0.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-12));
  CHECK(qnorm::q_normal_pdf(0.0, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));
  CHECK(qnorm::q_normal_pdf(2.1, 0.0) == 0.0);
  for (double x : {-1.9, -0.7, 0.3, 1.5})
    CHECK(qnorm::q_normal_pdf(x, 0.0) ==
          doctest::Approx(std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("q-normal is even, normalized and has unit variance") {
  for (int i = 0; i <= 10; ++i) {
    const double q = i / 10.0;
    for (double x : {0.1, 0.77, 1.3, 1.99})
      CHECK(qnorm::q_normal_pdf(x, q) == qnorm::q_normal_pdf(-x, q));
    CHECK(integrate([q](double x) { return qnorm::q_normal_pdf(x, q); }, q) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(integrate([q](double x) { return x * x * qnorm::q_normal_pdf(x, q); }, q) ==
          doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("q-normal fourth moment equals 2 + q") {
  for (double q : {0.0, 0.25, 0.6, 0.9}) {
    const double m4 = integrate([q](double x) { return std::pow(x, 4) * qnorm::q_normal_pdf(x, q); }, q);
    CHECK(m4 == doctest::Approx(2.0 + q).epsilon(1e-7));
  }
}

TEST_CASE("q-Hermite polynomials are orthogonal under f_qN") {
  for (double q : {0.0, 0.3, 0.5, 0.7, 1.0})
    for (int n = 0; n <= 5; ++n)
      for (int m = 0; m <= 5; ++m) {
        const double v = integrate(
            [=](double x) {
              return qnorm::q_hermite(n, x, q) * qnorm::q_hermite(m, x, q) * qnorm::q_normal_pdf(x, q);
            },
            q);
        const double want = n == m ? qnorm::q_factorial(n, q) : 0.0;
        CHECK(v == doctest::Approx(want).epsilon(1e-6).scale(1.0));
      }
}

TEST_CASE("Lambda_B and d_B examples") {
  CHECK(qnorm::lambda_B(5, 10, 2, 0) == 4095);
  for (int n = 1; n <= 6; ++n) CHECK(qnorm::d_B_nu(n, 0) == 1);
  for (int nu = 0; nu <= 3; ++nu) CHECK(qnorm::lambda_B(5, 10, 0, nu) == 1);
}

TEST_CASE("q at k = m is 1 / d_m^2") {
  CHECK(qnorm::q_parameter(4, 4, 4) == doctest::Approx(1.0 / (35.0 * 35.0)).epsilon(1e-14));
  for (int n = 2; n <= 6; ++n)
    for (int m = 1; m <= 10; ++m) {
      const double d = static_cast<double>(fock::dimension(n, m));
      CHECK(qnorm::q_parameter(n, m, m) == doctest::Approx(1.0 / (d * d)).epsilon(1e-14));
    }
}

TEST_CASE("q agrees with a long-double reference on the default grid") {
  for (auto [n, mlo, mhi] : {std::tuple{4, 4, 14}, std::tuple{5, 5, 11}, std::tuple{6, 6, 9}})
    for (int m = mlo; m <= mhi; ++m)
      for (int k = 1; k <= m; ++k) {
        const double q = qnorm::q_parameter(n, m, k);
        CHECK(q == doctest::Approx(static_cast<double>(q_reference(n, m, k))).epsilon(1e-12));
        CHECK(q > 0.0);
        CHECK(q <= 1.0);
      }
  const double q5102 = qnorm::q_parameter(5, 10, 2);
  CHECK(q5102 > 0.8);
  CHECK(q5102 < 1.0);
}

TEST_CASE("nu-sum is symmetric under swapping the two Lambda factors") {
  // q(k) Lambda0(k)^2 and q(m-k) Lambda0(m-k)^2 share one nu-sum.
  for (int n = 3; n <= 6; ++n)
    for (int m = 2; m <= 10; ++m)
      for (int k = 1; k < m; ++k) {
        const double lk = static_cast<double>(qnorm::lambda_B(n, m, k, 0));
        const double lmk = static_cast<double>(qnorm::lambda_B(n, m, m - k, 0));
        CHECK(qnorm::q_parameter(n, m, k) * lk * lk ==
              doctest::Approx(qnorm::q_parameter(n, m, m - k) * lmk * lmk).epsilon(1e-12));
      }
}

TEST_CASE("q is non-increasing in k on the default grid") {
  for (auto [n, mlo, mhi] : {std::tuple{4, 4, 14}, std::tuple{5, 5, 11}, std::tuple{6, 6, 9}})
    for (int m = mlo; m <= mhi; ++m)
      for (int k = 2; k <= m; ++k) CHECK(qnorm::q_parameter(n, m, k) <= qnorm::q_parameter(n, m, k - 1));
}

TEST_CASE("q of large systems does not overflow") {
  CHECK(qnorm::q_parameter(4, 14, 7) > 0.0);
  CHECK(qnorm::q_parameter(6, 9, 4) > 0.0);
}

TEST_CASE("q from synthetic spectra") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> gauss(1000000), semi(1000000);
  for (auto& x : gauss) x = g(rng);
  for (auto& x : semi) {
    // rejection sampling of the semicircle on (-2, 2)
    for (;;) {
      const double c = 4.0 * u(rng) - 2.0;
      if (u(rng) * 2.0 <= std::sqrt(4.0 - c * c)) {
        x = c;
        break;
      }
    }
  }
  CHECK(qnorm::shape_of(gauss).q == doctest::Approx(1.0).epsilon(0.01).scale(1.0));
  CHECK(std::abs(qnorm::shape_of(semi).q) < 0.01);
  CHECK_THROWS_AS(qnorm::shape_of(std::vector<double>{1, 1, 1, 1}), ValidationError);
}

TEST_CASE("ensemble mean of q_from_spectrum at (4, 6, 3) matches the closed form") {
  const ensemble::Ensemble ens({4, 6, 3, 1, 500, 77});
  double sum = 0.0;
  for (std::uint64_t i = 0; i < 500; ++i)
    sum += qnorm::q_from_spectrum(eigen::eigenvalues_selfadjoint(ens.member(i)));
  CHECK(std::abs(sum / 500.0 - qnorm::q_parameter(4, 6, 3)) < 0.05);
}
