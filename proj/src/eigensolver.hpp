#pragma once

#include <utility>
#include <vector>

#include "kbody_ensemble.hpp"

namespace embedrmt::eigen {

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  ensemble::HamiltonianInfo info;

  std::size_t size() const noexcept { return eigenvalues.size(); }
};

// Full spectrum of a self-adjoint matrix (Householder tridiagonalization
// followed by implicit symmetric QR, eigenvalues only). Every call checks
// tr H = sum(lambda) and tr H^2 = sum(lambda^2) to 1e-9 relative and throws
// NumericalError if either fails.
Spectrum eigenvalues_selfadjoint(const ensemble::SelfAdjointMatrix& h);
Spectrum eigenvalues_selfadjoint(const ensemble::EmbeddedHamiltonian& h);

std::pair<double, double> lowest_two(const Spectrum& s);

}  // namespace embedrmt::eigen
