#pragma once

// q-deformed machinery for the ensemble-averaged eigenvalue density:
// q-numbers, the q-normal density, q-Hermite polynomials and the closed-form
// q(N, m, k) of BEGOE(k)/BEGUE(k).

#include <cstdint>
#include <span>

#include "eigensolver.hpp"

namespace embedrmt::qnorm {

struct SupportInterval {
  double lo;
  double hi;
  bool unbounded;  // q = 1

  bool contains(double x) const noexcept { return unbounded || (x > lo && x < hi); }
};

// [n]_q = 1 + q + ... + q^{n-1}, summed directly; [0]_q = 0.
double q_number(int n, double q);
// [n]_q! = prod_{j=1..n} [j]_q; [0]_q! = 1.
double q_factorial(int n, double q);

SupportInterval support(double q);

// Number of factors kept in each infinite product: the first K with
// q^{K+1} < 1e-16.
int product_truncation(double q);

// q-normal density of the standardized variable. The Gaussian is used at
// q = 1 exactly.
double q_normal_pdf(double x, double q);

// H_{n+1} = x H_n - [n]_q H_{n-1}, H_0 = 1, H_{-1} = 0.
double q_hermite(int n, double x, double q);

// Lambda_B^nu(N, m, r) = C(m - nu, r) C(N + m + nu - 1, r), exact u64.
std::uint64_t lambda_B(int modes, int particles, int r, int nu);
// d_B(g_nu) = C(N + nu - 1, nu)^2 - C(N + nu - 2, nu - 1)^2, exact u64.
std::uint64_t d_B_nu(int modes, int nu);

// Closed-form fourth-moment parameter, evaluated with arbitrary-precision
// integers and one final rational-to-double conversion.
double q_parameter(int modes, int particles, int rank);

struct SpectrumShape {
  double mean;
  double variance;  // central second moment (1/d normalization)
  double q;         // mu4 / mu2^2 - 2, i.e. excess kurtosis + 1
  bool in_unit_interval;
};

// Per-member q from the excess kurtosis of a set of eigenvalues (d >= 4).
SpectrumShape shape_of(std::span<const double> values);
double q_from_spectrum(const eigen::Spectrum& s);

}  // namespace embedrmt::qnorm
