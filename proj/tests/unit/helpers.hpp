#pragma once

// Independent reference implementations used as test oracles.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Pascal's triangle, no multiplication.
inline std::uint64_t pascal(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
  return row[static_cast<std::size_t>(k)];
}

// Number of sign changes in the Sturm sequence of a symmetric tridiagonal
// matrix shifted by x, i.e. the count of eigenvalues below x.
inline int sturm_count(const std::vector<double>& a, const std::vector<double>& b, double x) {
  int count = 0;
  double q = a[0] - x;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (q == 0.0) q = 1e-300;
    q = a[i] - x - b[i - 1] * b[i - 1] / q;
    if (q < 0) ++count;
  }
  return count;
}

// Eigenvalues of a symmetric matrix: Householder reduction to tridiagonal
// form by hand, then bisection on the Sturm count.
inline std::vector<double> sturm_eigenvalues(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    Eigen::VectorXd x = a.col(k).tail(n - k - 1);
    const double alpha = (x(0) > 0 ? -1.0 : 1.0) * x.norm();
    if (alpha == 0.0) continue;
    Eigen::VectorXd v = x;
    v(0) -= alpha;
    v.normalize();
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
    p.bottomRightCorner(n - k - 1, n - k - 1) -= 2.0 * v * v.transpose();
    a = p * a * p;
  }
  std::vector<double> diag(static_cast<std::size_t>(n)), off(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  for (Eigen::Index i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = a(i, i);
  for (Eigen::Index i = 0; i + 1 < n; ++i) off[static_cast<std::size_t>(i)] = a(i + 1, i);
  double bound = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) bound = std::max(bound, a.row(i).cwiseAbs().sum());
  std::vector<double> out;
  for (int j = 0; j < n; ++j) {
    double lo = -bound - 1.0, hi = bound + 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (sturm_count(diag, off, mid) > j) hi = mid;
      else lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

// Amplitude of B^dag(create) B(annihilate) on |ket>, built from single-boson
// ladder steps a|n> = sqrt(n)|n-1>, a^dag|n> = sqrt(n+1)|n+1>.
inline double ladder_amplitude(std::vector<int> ket, const std::vector<int>& annihilate,
                               const std::vector<int>& create) {
  double amp = 1.0;
  for (std::size_t i = 0; i < ket.size(); ++i) {
    for (int t = 0; t < annihilate[i]; ++t) {
      if (ket[i] == 0) return 0.0;
      amp *= std::sqrt(static_cast<double>(ket[i]));
      --ket[i];
    }
    amp /= std::sqrt(std::tgamma(annihilate[i] + 1.0));
  }
  for (std::size_t i = 0; i < ket.size(); ++i) {
    for (int t = 0; t < create[i]; ++t) {
      ++ket[i];
      amp *= std::sqrt(static_cast<double>(ket[i]));
    }
    amp /= std::sqrt(std::tgamma(create[i] + 1.0));
  }
  return amp;
}

}  // namespace oracle
