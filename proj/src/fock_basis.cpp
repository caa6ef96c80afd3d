#include "fock_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "error.hpp"

namespace embedrmt::fock {

namespace {

void check_space(int modes, int particles) {
  if (modes < 1) throw ValidationError("number of modes must be >= 1");
  if (particles < 0) throw ValidationError("particle number must be >= 0");
  if (particles > kMaxParticles)
    throw ValidationError("particle number exceeds " + std::to_string(kMaxParticles));
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("u64 product overflow");
  return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("u64 sum overflow");
  return r;
}

void enumerate_into(int slot, int remaining, std::vector<int>& current,
                    std::vector<OccupationState>& out) {
  const int last = static_cast<int>(current.size()) - 1;
  if (slot == last) {
    current[static_cast<std::size_t>(slot)] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int j = remaining; j >= 0; --j) {
    current[static_cast<std::size_t>(slot)] = j;
    enumerate_into(slot + 1, remaining - j, current, out);
  }
}

}  // namespace

OccupationState::OccupationState(std::vector<int> occupations) : n_(std::move(occupations)) {
  if (n_.empty()) throw ValidationError("occupation state needs at least one mode");
  for (int x : n_) {
    if (x < 0) throw ValidationError("negative occupation in " + to_string());
    particles_ += x;
  }
  if (particles_ > kMaxParticles)
    throw ValidationError("occupation state exceeds " + std::to_string(kMaxParticles) +
                          " particles");
}

std::string OccupationState::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < n_.size(); ++i) os << (i ? "," : "") << n_[i];
  os << ')';
  return os.str();
}

std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    // r * (n - i) / (i + 1) is exact: r * (n - i) is divisible by (i + 1).
    r = r * static_cast<unsigned __int128>(n - i);
    r /= static_cast<unsigned __int128>(i + 1);
    if (r > std::numeric_limits<std::uint64_t>::max())
      throw OverflowError("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                          ") overflows u64");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t dimension(int modes, int particles) {
  if (modes < 1) throw ValidationError("number of modes must be >= 1");
  if (particles < 0) throw ValidationError("particle number must be >= 0");
  return binomial(modes + particles - 1, particles);
}

std::vector<OccupationState> enumerate_basis(int modes, int particles) {
  check_space(modes, particles);
  const std::uint64_t d = dimension(modes, particles);
  std::vector<OccupationState> out;
  out.reserve(d);
  std::vector<int> current(static_cast<std::size_t>(modes), 0);
  enumerate_into(0, particles, current, out);
  return out;
}

FockBasis::FockBasis(int modes, int particles) : modes_(modes), particles_(particles) {
  check_space(modes, particles);
  count_.assign(static_cast<std::size_t>(modes) + 1,
                std::vector<std::uint64_t>(static_cast<std::size_t>(particles) + 1, 0));
  count_[0][0] = 1;
  for (int s = 1; s <= modes; ++s)
    for (int r = 0; r <= particles; ++r) count_[s][r] = dimension(s, r);
  states_ = enumerate_basis(modes, particles);
}

BasisIndex FockBasis::rank(std::span<const int> occ) const noexcept {
  // States sharing the prefix n_0..n_{i-1} with a larger n_i come first; by the
  // hockey-stick identity their count is count_[N - i][r_i - n_i - 1].
  BasisIndex index = 0;
  int remaining = particles_;
  for (int i = 0; i + 1 < modes_; ++i) {
    const int n = occ[static_cast<std::size_t>(i)];
    if (n < remaining) index += count_[static_cast<std::size_t>(modes_ - i)][remaining - n - 1];
    remaining -= n;
  }
  return index;
}

BasisIndex FockBasis::index(const OccupationState& s) const {
  if (s.modes() != modes_ || s.particles() != particles_)
    throw ValidationError("state " + s.to_string() + " is not in the (" +
                          std::to_string(modes_) + ", " + std::to_string(particles_) +
                          ") space");
  return rank(s.occupations());
}

BasisIndex state_index(const OccupationState& state) {
  const int modes = state.modes();
  if (modes < 1) throw ValidationError("empty occupation state");
  BasisIndex index = 0;
  int remaining = state.particles();
  for (int i = 0; i + 1 < modes; ++i) {
    const int n = state[i];
    if (n < remaining) index = checked_add(index, dimension(modes - i, remaining - n - 1));
    remaining -= n;
  }
  return index;
}

OccupationState index_state(BasisIndex index, int modes, int particles) {
  check_space(modes, particles);
  const std::uint64_t d = dimension(modes, particles);
  if (index >= d)
    throw ValidationError("basis index " + std::to_string(index) + " out of range [0, " +
                          std::to_string(d) + ")");
  std::vector<int> occ(static_cast<std::size_t>(modes), 0);
  int remaining = particles;
  for (int i = 0; i + 1 < modes; ++i) {
    const int slots_after = modes - i - 1;
    for (int j = remaining; j >= 0; --j) {
      const std::uint64_t block = dimension(slots_after, remaining - j);
      if (index < block) {
        occ[static_cast<std::size_t>(i)] = j;
        remaining -= j;
        break;
      }
      index -= block;
    }
  }
  occ.back() = remaining;
  return OccupationState(std::move(occ));
}

std::optional<MonomialResult> apply_pair_monomial(const OccupationState& state,
                                                  const OccupationState& annihilate,
                                                  const OccupationState& create) {
  const int modes = state.modes();
  if (annihilate.modes() != modes || create.modes() != modes)
    throw ValidationError("mode count mismatch: state " + state.to_string() + ", annihilate " +
                          annihilate.to_string() + ", create " + create.to_string());
  if (annihilate.particles() != create.particles())
    throw ValidationError("annihilation and creation labels carry different particle numbers");
  if (annihilate.particles() > state.particles()) return std::nullopt;

  // B(nu)|n> = prod_i sqrt(C(n_i, nu_i)) |n - nu>;  B^dag(nu')|n'> = prod_i
  // sqrt(C(n'_i + nu'_i, nu'_i)) |n' + nu'>. Both integer products are bounded
  // by C(m, k) (Vandermonde), so they stay exact before the square root.
  std::uint64_t down = 1;
  std::uint64_t up = 1;
  std::vector<int> out(static_cast<std::size_t>(modes));
  for (int i = 0; i < modes; ++i) {
    const int n = state[i];
    const int a = annihilate[i];
    if (n < a) return std::nullopt;
    const int mid = n - a;
    down = checked_mul(down, binomial(n, a));
    up = checked_mul(up, binomial(mid + create[i], create[i]));
    out[static_cast<std::size_t>(i)] = mid + create[i];
  }
  const long double amp = std::sqrt(static_cast<long double>(down) * static_cast<long double>(up));
  return MonomialResult{OccupationState(std::move(out)), static_cast<double>(amp)};
}

}  // namespace embedrmt::fock
