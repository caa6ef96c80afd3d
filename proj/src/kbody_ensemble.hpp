#pragma once

// Bosonic embedded Gaussian ensembles BEGOE(k) / BEGUE(k): a GOE/GUE drawn in
// the k-particle space and propagated to m particles through
//   H = sum_{a,b} v_{ab} B^dag(k_a) B(k_b).

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "fock_basis.hpp"

namespace embedrmt::ensemble {

// Variance of the real diagonal entries for both beta = 1 and beta = 2. The
// beta = 2 diagonal is a convention; it makes <|v_ij|^2> = 1 + delta_ij hold
// for both symmetry classes.
inline constexpr double kDiagonalVariance = 2.0;

// Self-adjoint matrix split into real and imaginary parts. `imag` is empty
// (0 x 0) when beta = 1.
struct SelfAdjointMatrix {
  int beta = 1;
  Eigen::MatrixXd real;
  Eigen::MatrixXd imag;

  Eigen::Index dim() const noexcept { return real.rows(); }
  bool is_complex() const noexcept { return beta == 2; }
  // Exact check: real part symmetric, imaginary part antisymmetric.
  bool is_self_adjoint() const;
};

struct KBodyMatrix : SelfAdjointMatrix {
  int modes = 0;
  int rank = 0;  // k
};

struct HamiltonianInfo {
  int modes = 0;      // N
  int particles = 0;  // m
  int rank = 0;       // k
  int beta = 1;
  std::uint64_t member_seed = 0;
};

struct EmbeddedHamiltonian : SelfAdjointMatrix {
  HamiltonianInfo info;
};

struct EnsembleSpec {
  int modes = 0;
  int particles = 0;
  int rank = 0;
  int beta = 1;
  std::uint64_t members = 1;
  std::uint64_t master_seed = 0;

  void validate() const;
};

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

// Seed of member `index` of the rank-k ensemble: two chained splitmix64 steps
// over (master_seed, k) and then (., index).
std::uint64_t member_seed(std::uint64_t master_seed, int rank, std::uint64_t index) noexcept;

// Standard normals from mt19937_64 via the Box-Muller transform, so the
// stream is identical on every standard library.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}
  double next();

 private:
  double uniform_open();  // (0, 1]
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Draws the d_k x d_k GOE (beta = 1) or GUE (beta = 2) interaction matrix.
// Entries are drawn column by column over the lower triangle: diagonal first
// (variance 2), then off-diagonal (variance 1, or real and imaginary parts of
// variance 1 each).
KBodyMatrix sample_kbody(int modes, int rank, int beta, std::uint64_t member_seed);

// Precomputed propagation structure for fixed (N, m, k). For every
// (m - k)-particle state I and k-particle label nu it stores the m-particle
// index of I + nu and c(I, nu) = prod_i sqrt(C(I_i + nu_i, nu_i)), so that
//   H[I + nu_a, I + nu_b] += c(I, nu_a) v_ab c(I, nu_b).
class EmbeddingPlan {
 public:
  EmbeddingPlan(int modes, int particles, int rank);

  int modes() const noexcept { return modes_; }
  int particles() const noexcept { return particles_; }
  int rank() const noexcept { return rank_; }
  Eigen::Index dim_m() const noexcept { return dim_m_; }
  Eigen::Index dim_k() const noexcept { return dim_k_; }

  EmbeddedHamiltonian embed(const KBodyMatrix& v) const;

 private:
  int modes_;
  int particles_;
  int rank_;
  Eigen::Index dim_m_;
  Eigen::Index dim_k_;
  Eigen::Index dim_mid_;
  std::vector<std::uint32_t> target_;  // dim_mid_ x dim_k_, row-major
  std::vector<double> coef_;
};

EmbeddedHamiltonian embed(int modes, int particles, int rank, const KBodyMatrix& v);

// Deterministic ensemble: member i depends only on (spec, i).
class Ensemble {
 public:
  explicit Ensemble(const EnsembleSpec& spec);

  const EnsembleSpec& spec() const noexcept { return spec_; }
  const EmbeddingPlan& plan() const noexcept { return plan_; }
  std::uint64_t seed_of(std::uint64_t index) const noexcept;
  KBodyMatrix interaction(std::uint64_t index) const;
  EmbeddedHamiltonian member(std::uint64_t index) const;

 private:
  EnsembleSpec spec_;
  EmbeddingPlan plan_;
};

// Audit dump of a k-body matrix: header "row,col,real,imag", lower triangle
// including the diagonal.
void write_kbody_csv(const KBodyMatrix& v, std::ostream& os);

}  // namespace embedrmt::ensemble
