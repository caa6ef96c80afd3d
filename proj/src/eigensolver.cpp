#include "eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>

#include "error.hpp"

namespace embedrmt::eigen {

namespace {

void check_finite(const ensemble::SelfAdjointMatrix& h) {
  if (!h.real.allFinite() || (h.is_complex() && !h.imag.allFinite()))
    throw ValidationError("matrix has non-finite entries");
}

void check_traces(const ensemble::SelfAdjointMatrix& h, const std::vector<double>& ev) {
  const double trace = h.real.trace();
  double frob2 = h.real.squaredNorm();
  if (h.is_complex()) frob2 += h.imag.squaredNorm();

  double sum = 0.0, sum_sq = 0.0;
  for (double x : ev) {
    sum += x;
    sum_sq += x * x;
  }
  const double scale = std::sqrt(frob2 * static_cast<double>(ev.size()));
  const double tol = 1e-9;
  if (std::abs(sum - trace) > tol * std::max(scale, 1.0) ||
      std::abs(sum_sq - frob2) > tol * std::max(frob2, 1.0))
    throw NumericalError("trace identities violated after diagonalization: tr H = " +
                         std::to_string(trace) + " vs " + std::to_string(sum) +
                         ", tr H^2 = " + std::to_string(frob2) + " vs " +
                         std::to_string(sum_sq));
}

}  // namespace

Spectrum eigenvalues_selfadjoint(const ensemble::SelfAdjointMatrix& h) {
  const Eigen::Index d = h.dim();
  if (d < 1 || h.real.cols() != d) throw ValidationError("matrix must be square with d >= 1");
  check_finite(h);

  Spectrum s;
  s.eigenvalues.resize(static_cast<std::size_t>(d));
  if (!h.is_complex()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.real, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    Eigen::Map<Eigen::VectorXd>(s.eigenvalues.data(), d) = solver.eigenvalues();
  } else {
    Eigen::MatrixXcd z(d, d);
    z.real() = h.real;
    z.imag() = h.imag;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(z, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    Eigen::Map<Eigen::VectorXd>(s.eigenvalues.data(), d) = solver.eigenvalues();
  }
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  check_traces(h, s.eigenvalues);
  return s;
}

Spectrum eigenvalues_selfadjoint(const ensemble::EmbeddedHamiltonian& h) {
  Spectrum s = eigenvalues_selfadjoint(static_cast<const ensemble::SelfAdjointMatrix&>(h));
  s.info = h.info;
  return s;
}

std::pair<double, double> lowest_two(const Spectrum& s) {
  if (s.size() < 2) throw ValidationError("lowest_two needs at least two eigenvalues");
  return {s.eigenvalues[0], s.eigenvalues[1]};
}

}  // namespace embedrmt::eigen
