#pragma once

// Bosonic occupation-number bases |n_1, ..., n_N> of p particles on N
// single-particle states, with normalized k-particle monomial operators
//   B^dag(nu) = prod_i (a_i^dag)^{nu_i} / sqrt(nu_i!).

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace embedrmt::fock {

// Upper bound on particle number; keeps every factorial ratio an exact u64.
inline constexpr int kMaxParticles = 64;

class OccupationState {
 public:
  OccupationState() = default;
  explicit OccupationState(std::vector<int> occupations);
  OccupationState(std::initializer_list<int> occupations)
      : OccupationState(std::vector<int>(occupations)) {}

  int modes() const noexcept { return static_cast<int>(n_.size()); }
  int particles() const noexcept { return particles_; }
  int operator[](int i) const noexcept { return n_[static_cast<std::size_t>(i)]; }
  std::span<const int> occupations() const noexcept { return n_; }

  std::string to_string() const;

  bool operator==(const OccupationState& other) const { return n_ == other.n_; }
  auto operator<=>(const OccupationState& other) const { return n_ <=> other.n_; }

 private:
  std::vector<int> n_;
  int particles_ = 0;
};

using BasisIndex = std::uint64_t;

// C(n, k) with exact u64 arithmetic; C(n, k) = 0 for k < 0 or k > n.
// Throws OverflowError when the result does not fit.
std::uint64_t binomial(std::int64_t n, std::int64_t k);

// binomial(N + p - 1, p): number of p-boson states on N modes.
std::uint64_t dimension(int modes, int particles);

// All states in descending lexicographic order of the occupation vector.
std::vector<OccupationState> enumerate_basis(int modes, int particles);

BasisIndex state_index(const OccupationState& state);
OccupationState index_state(BasisIndex index, int modes, int particles);

struct MonomialResult {
  OccupationState state;
  double amplitude;
};

// <.| B^dag(create) B(annihilate) |state>: the unique image state and its
// (strictly positive) amplitude, or nullopt when `state` lacks the bosons
// that `annihilate` removes.
std::optional<MonomialResult> apply_pair_monomial(const OccupationState& state,
                                                  const OccupationState& annihilate,
                                                  const OccupationState& create);

// Ranking of a fixed (N, p) space. Cheaper than the free functions when many
// lookups hit the same space.
class FockBasis {
 public:
  FockBasis(int modes, int particles);

  int modes() const noexcept { return modes_; }
  int particles() const noexcept { return particles_; }
  std::uint64_t size() const noexcept { return states_.size(); }

  const OccupationState& state(BasisIndex i) const { return states_.at(i); }
  const std::vector<OccupationState>& states() const noexcept { return states_; }

  // Rank of an occupation vector with this space's (N, p); no validation.
  BasisIndex rank(std::span<const int> occupations) const noexcept;
  BasisIndex index(const OccupationState& s) const;

 private:
  int modes_;
  int particles_;
  // count_[slots][r] = states of r particles in `slots` modes.
  std::vector<std::vector<std::uint64_t>> count_;
  std::vector<OccupationState> states_;
};

}  // namespace embedrmt::fock
