#include "kbody_ensemble.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "error.hpp"

namespace embedrmt::ensemble {

bool SelfAdjointMatrix::is_self_adjoint() const {
  const Eigen::Index d = real.rows();
  if (real.cols() != d) return false;
  if (beta == 2 && (imag.rows() != d || imag.cols() != d)) return false;
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = j; i < d; ++i) {
      if (real(i, j) != real(j, i)) return false;
      if (beta == 2 && imag(i, j) != -imag(j, i)) return false;
    }
  }
  return true;
}

void EnsembleSpec::validate() const {
  if (modes < 1) throw ValidationError("N must be >= 1");
  if (rank < 1 || rank > particles) throw ValidationError("k must satisfy 1 <= k <= m");
  if (beta != 1 && beta != 2) throw ValidationError("beta must be 1 or 2");
  if (members < 1) throw ValidationError("members must be >= 1");
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t member_seed(std::uint64_t master_seed, int rank, std::uint64_t index) noexcept {
  constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  const std::uint64_t per_rank = mix64(master_seed + kGolden * static_cast<std::uint64_t>(rank + 1));
  return mix64(per_rank + kGolden * (index + 1));
}

double GaussianStream::uniform_open() {
  // 53 random bits mapped to (0, 1].
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_open()));
  const double theta = 2.0 * std::numbers::pi * uniform_open();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

KBodyMatrix sample_kbody(int modes, int rank, int beta, std::uint64_t seed) {
  if (modes < 1 || rank < 1) throw ValidationError("sample_kbody needs N >= 1 and k >= 1");
  if (beta != 1 && beta != 2) throw ValidationError("beta must be 1 or 2");
  const auto d = static_cast<Eigen::Index>(fock::dimension(modes, rank));
  KBodyMatrix v;
  v.beta = beta;
  v.modes = modes;
  v.rank = rank;
  v.real.resize(d, d);
  if (beta == 2) v.imag.resize(d, d);

  GaussianStream g(seed);
  const double diag_sd = std::sqrt(kDiagonalVariance);
  for (Eigen::Index j = 0; j < d; ++j) {
    v.real(j, j) = diag_sd * g.next();
    if (beta == 2) v.imag(j, j) = 0.0;
    for (Eigen::Index i = j + 1; i < d; ++i) {
      const double re = g.next();
      v.real(i, j) = re;
      v.real(j, i) = re;
      if (beta == 2) {
        const double im = g.next();
        v.imag(i, j) = im;
        v.imag(j, i) = -im;
      }
    }
  }
  return v;
}

EmbeddingPlan::EmbeddingPlan(int modes, int particles, int rank)
    : modes_(modes), particles_(particles), rank_(rank) {
  if (rank < 1 || rank > particles) throw ValidationError("embedding needs 1 <= k <= m");
  const fock::FockBasis full(modes, particles);
  const fock::FockBasis labels(modes, rank);
  const fock::FockBasis mid(modes, particles - rank);
  if (full.size() > std::numeric_limits<std::uint32_t>::max())
    throw ValidationError("m-particle space too large for dense embedding");
  dim_m_ = static_cast<Eigen::Index>(full.size());
  dim_k_ = static_cast<Eigen::Index>(labels.size());
  dim_mid_ = static_cast<Eigen::Index>(mid.size());

  target_.resize(static_cast<std::size_t>(dim_mid_ * dim_k_));
  coef_.resize(target_.size());
  std::vector<int> sum(static_cast<std::size_t>(modes));
  std::size_t slot = 0;
  for (const auto& inter : mid.states()) {
    for (const auto& nu : labels.states()) {
      std::uint64_t c2 = 1;
      for (int i = 0; i < modes; ++i) {
        sum[static_cast<std::size_t>(i)] = inter[i] + nu[i];
        c2 *= fock::binomial(inter[i] + nu[i], nu[i]);
      }
      target_[slot] = static_cast<std::uint32_t>(full.rank(sum));
      coef_[slot] = std::sqrt(static_cast<double>(c2));
      ++slot;
    }
  }
}

EmbeddedHamiltonian EmbeddingPlan::embed(const KBodyMatrix& v) const {
  if (v.dim() != dim_k_ || v.real.cols() != dim_k_)
    throw ValidationError("k-body matrix has dimension " + std::to_string(v.dim()) +
                          ", expected " + std::to_string(dim_k_));
  if (v.beta == 2 && (v.imag.rows() != dim_k_ || v.imag.cols() != dim_k_))
    throw ValidationError("beta = 2 k-body matrix lacks an imaginary part");

  EmbeddedHamiltonian h;
  h.beta = v.beta;
  h.info = HamiltonianInfo{modes_, particles_, rank_, v.beta, 0};
  h.real = Eigen::MatrixXd::Zero(dim_m_, dim_m_);
  if (v.beta == 2) h.imag = Eigen::MatrixXd::Zero(dim_m_, dim_m_);

  // Lower triangle only (row >= col); mirrored below.
  for (Eigen::Index mid = 0; mid < dim_mid_; ++mid) {
    const std::uint32_t* tgt = target_.data() + mid * dim_k_;
    const double* c = coef_.data() + mid * dim_k_;
    for (Eigen::Index b = 0; b < dim_k_; ++b) {
      const Eigen::Index col = tgt[b];
      const double cb = c[b];
      for (Eigen::Index a = 0; a < dim_k_; ++a) {
        const Eigen::Index row = tgt[a];
        if (row < col) continue;
        const double w = c[a] * cb;
        h.real(row, col) += w * v.real(a, b);
        if (v.beta == 2) h.imag(row, col) += w * v.imag(a, b);
      }
    }
  }
  for (Eigen::Index j = 0; j < dim_m_; ++j) {
    for (Eigen::Index i = j + 1; i < dim_m_; ++i) h.real(j, i) = h.real(i, j);
    if (v.beta == 2) {
      h.imag(j, j) = 0.0;
      for (Eigen::Index i = j + 1; i < dim_m_; ++i) h.imag(j, i) = -h.imag(i, j);
    }
  }
  return h;
}

EmbeddedHamiltonian embed(int modes, int particles, int rank, const KBodyMatrix& v) {
  if (v.modes != 0 && (v.modes != modes || v.rank != rank))
    throw ValidationError("k-body matrix was sampled for a different (N, k)");
  return EmbeddingPlan(modes, particles, rank).embed(v);
}

Ensemble::Ensemble(const EnsembleSpec& spec)
    : spec_((spec.validate(), spec)), plan_(spec.modes, spec.particles, spec.rank) {}

std::uint64_t Ensemble::seed_of(std::uint64_t index) const noexcept {
  return member_seed(spec_.master_seed, spec_.rank, index);
}

KBodyMatrix Ensemble::interaction(std::uint64_t index) const {
  return sample_kbody(spec_.modes, spec_.rank, spec_.beta, seed_of(index));
}

EmbeddedHamiltonian Ensemble::member(std::uint64_t index) const {
  EmbeddedHamiltonian h = plan_.embed(interaction(index));
  h.info.member_seed = seed_of(index);
  return h;
}

void write_kbody_csv(const KBodyMatrix& v, std::ostream& os) {
  os << "row,col,real,imag\n";
  os.precision(17);
  for (Eigen::Index j = 0; j < v.dim(); ++j)
    for (Eigen::Index i = j; i < v.dim(); ++i)
      os << i << ',' << j << ',' << v.real(i, j) << ','
         << (v.beta == 2 ? v.imag(i, j) : 0.0) << '\n';
}

}  // namespace embedrmt::ensemble
