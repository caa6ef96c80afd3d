#pragma once

// Invariant suite on small systems, run by the `validate` subcommand.

#include <map>
#include <string>
#include <vector>

#include "fock_basis.hpp"

namespace embedrmt::validate {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Report {
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  std::size_t failures() const;
};

Report run_all();

// <A| B^dag(create) B(annihilate) |B> evaluated by expanding states as
// monomials prod_i x_i^{n_i} / sqrt(n_i!) and applying a_i^dag = x_i and
// a_i = d/dx_i term by term. Returns 0 when the image has no overlap with A.
double ladder_matrix_element(const fock::OccupationState& bra, const fock::OccupationState& create,
                             const fock::OccupationState& annihilate,
                             const fock::OccupationState& ket);

}  // namespace embedrmt::validate
