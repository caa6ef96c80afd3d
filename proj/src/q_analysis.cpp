#include "q_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"
#include "fock_basis.hpp"
#include "numerics.hpp"

namespace embedrmt::qnorm {

namespace mp = boost::multiprecision;

namespace {

void check_q(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("q must lie in [0, 1]");
}

mp::cpp_int big_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  mp::cpp_int r = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

mp::cpp_int big_lambda(int modes, int particles, int r, int nu) {
  return big_binomial(particles - nu, r) * big_binomial(modes + particles + nu - 1, r);
}

mp::cpp_int big_d_B(int modes, int nu) {
  const mp::cpp_int a = big_binomial(modes + nu - 1, nu);
  const mp::cpp_int b = big_binomial(modes + nu - 2, nu - 1);
  return a * a - b * b;
}

double q_sum(int modes, int particles, int rank) {
  if (modes < 1) throw ValidationError("N must be >= 1");
  if (rank < 1 || rank > particles) throw ValidationError("q(N, m, k) needs 1 <= k <= m");
  const int nu_max = std::min(rank, particles - rank);
  mp::cpp_int numerator = 0;
  for (int nu = 0; nu <= nu_max; ++nu) {
    const mp::cpp_int first = big_lambda(modes, particles, particles - rank, nu);
    const mp::cpp_int second = big_lambda(modes, particles, rank, nu);
    numerator += first * second * big_d_B(modes, nu);
  }
  const mp::cpp_int l0 = big_lambda(modes, particles, rank, 0);
  const mp::cpp_int denominator = big_binomial(modes + particles - 1, particles) * l0 * l0;
  const mp::cpp_rational ratio(numerator, denominator);
  return ratio.convert_to<double>();
}

std::uint64_t to_u64(const mp::cpp_int& v, const char* what) {
  if (v < 0 || v > std::numeric_limits<std::uint64_t>::max())
    throw OverflowError(std::string(what) + " does not fit in u64");
  return v.convert_to<std::uint64_t>();
}

}  // namespace

double q_number(int n, double q) {
  if (n < 0) throw ValidationError("q_number needs n >= 0");
  double sum = 0.0;
  double term = 1.0;
  for (int j = 0; j < n; ++j) {
    sum += term;
    term *= q;
  }
  return sum;
}

double q_factorial(int n, double q) {
  if (n < 0) throw ValidationError("q_factorial needs n >= 0");
  double f = 1.0;
  for (int j = 1; j <= n; ++j) f *= q_number(j, q);
  return f;
}

SupportInterval support(double q) {
  check_q(q);
  if (q == 1.0) return {-std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity(), true};
  const double hi = 2.0 / std::sqrt(1.0 - q);
  return {-hi, hi, false};
}

int product_truncation(double q) {
  check_q(q);
  if (q == 0.0) return 0;
  if (q == 1.0) throw ValidationError("infinite products diverge at q = 1");
  int k = 0;
  double qk1 = q;  // q^{k+1}
  while (qk1 >= 1e-16) {
    qk1 *= q;
    ++k;
  }
  return k;
}

double q_normal_pdf(double x, double q) {
  check_q(q);
  if (q == 1.0) return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  const double one_minus_q = 1.0 - q;
  const double edge = 4.0 - one_minus_q * x * x;
  if (edge <= 0.0) return 0.0;

  // Logarithmic accumulation; the two products over- and underflow separately
  // as q -> 1. The k' = 0 factor of the second product cancels the square root
  // in the denominator.
  const double x2 = x * x;
  const int kmax = product_truncation(q);
  double log_f = 0.5 * std::log(one_minus_q) - std::log(2.0 * std::numbers::pi) + 0.5 * std::log(edge);
  double qk = 1.0;  // q^{k'}
  for (int k = 0; k <= kmax; ++k) {
    const double qk1 = qk * q;
    log_f += std::log1p(-qk1);
    if (k >= 1) {
      const double term = (1.0 + qk) * (1.0 + qk) - one_minus_q * qk * x2;
      if (term <= 0.0) return 0.0;
      log_f += std::log(term);
    }
    qk = qk1;
  }
  return std::exp(log_f);
}

double q_hermite(int n, double x, double q) {
  if (n < 0) throw ValidationError("q_hermite needs n >= 0");
  double prev = 0.0;  // H_{-1}
  double cur = 1.0;   // H_0
  double qn = 0.0;    // [j]_q, updated incrementally
  double qpow = 1.0;
  for (int j = 0; j < n; ++j) {
    // [j]_q for the step H_{j+1} = x H_j - [j]_q H_{j-1}.
    const double next = x * cur - qn * prev;
    prev = cur;
    cur = next;
    qn += qpow;
    qpow *= q;
  }
  return cur;
}

std::uint64_t lambda_B(int modes, int particles, int r, int nu) {
  if (modes < 0 || particles < 0 || r < 0 || nu < 0)
    throw ValidationError("lambda_B arguments must be non-negative");
  return to_u64(big_lambda(modes, particles, r, nu), "Lambda_B");
}

std::uint64_t d_B_nu(int modes, int nu) {
  if (modes < 1 || nu < 0) throw ValidationError("d_B needs N >= 1 and nu >= 0");
  return to_u64(big_d_B(modes, nu), "d_B");
}

double q_parameter(int modes, int particles, int rank) {
  return q_sum(modes, particles, rank);
}

SpectrumShape shape_of(std::span<const double> values) {
  if (values.size() < 4) throw ValidationError("kurtosis needs at least 4 values");
  const auto n = static_cast<double>(values.size());
  const double mean = numerics::compensated_sum(values) / n;
  numerics::CompensatedSum m2, m4;
  for (double x : values) {
    const double dx = x - mean;
    const double dx2 = dx * dx;
    m2.add(dx2);
    m4.add(dx2 * dx2);
  }
  const double mu2 = m2.value() / n;
  const double mu4 = m4.value() / n;
  if (!(mu2 > 0.0)) throw ValidationError("spectrum has zero variance");
  const double q = mu4 / (mu2 * mu2) - 2.0;
  return {mean, mu2, q, q >= 0.0 && q <= 1.0};
}

double q_from_spectrum(const eigen::Spectrum& s) { return shape_of(s.eigenvalues).q; }

}  // namespace embedrmt::qnorm
