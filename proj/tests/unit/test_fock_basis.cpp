#include <doctest.h>

#include <random>
#include <set>

#include "error.hpp"
#include "fock_basis.hpp"
#include "helpers.hpp"
#include "validate.hpp"

using namespace embedrmt;
using fock::OccupationState;

TEST_CASE("dimension examples") {
  CHECK(fock::dimension(5, 10) == 1001);
  CHECK(fock::dimension(4, 0) == 1);
  CHECK(fock::dimension(4, 4) == 35);
}

TEST_CASE("binomial agrees with Pascal's triangle") {
  for (int n = 0; n <= 60; ++n)
    for (int k = 0; k <= n; ++k) CHECK(fock::binomial(n, k) == oracle::pascal(n, k));
  CHECK(fock::binomial(5, -1) == 0);
  CHECK(fock::binomial(5, 6) == 0);
}

TEST_CASE("binomial overflow is an error, not wraparound") {
  CHECK_THROWS_AS(fock::binomial(200, 100), OverflowError);
  CHECK_THROWS_AS(fock::dimension(64, 64), OverflowError);
}

TEST_CASE("enumerate_basis examples") {
  const auto b22 = fock::enumerate_basis(2, 2);
  REQUIRE(b22.size() == 3);
  CHECK(b22[0] == OccupationState{2, 0});
  CHECK(b22[1] == OccupationState{1, 1});
  CHECK(b22[2] == OccupationState{0, 2});

  const auto b1 = fock::enumerate_basis(1, 7);
  REQUIRE(b1.size() == 1);
  CHECK(b1[0] == OccupationState{7});

  const auto b31 = fock::enumerate_basis(3, 1);
  REQUIRE(b31.size() == 3);
  CHECK(b31[0] == OccupationState{1, 0, 0});
  CHECK(b31[1] == OccupationState{0, 1, 0});
  CHECK(b31[2] == OccupationState{0, 0, 1});
}

TEST_CASE("enumerate_basis is strictly descending, complete and of the right size") {
  for (int n = 1; n <= 8; ++n)
    for (int p = 0; p <= 12; ++p) {
      const auto states = fock::enumerate_basis(n, p);
      REQUIRE(states.size() == fock::dimension(n, p));
      for (std::size_t i = 1; i < states.size(); ++i) REQUIRE(states[i - 1] > states[i]);
      for (const auto& s : states) {
        REQUIRE(s.modes() == n);
        REQUIRE(s.particles() == p);
      }
    }
}

TEST_CASE("state_index examples") {
  CHECK(fock::state_index(OccupationState{1, 1}) == 1);
  CHECK(fock::state_index(OccupationState{0, 0, 2}) == 5);
  for (std::uint64_t i = 0; i < fock::dimension(3, 3); ++i)
    CHECK(fock::state_index(fock::index_state(i, 3, 3)) == i);
}

TEST_CASE("index_state and state_index are inverse bijections (N <= 6, p <= 10)") {
  for (int n = 1; n <= 6; ++n)
    for (int p = 0; p <= 10; ++p) {
      const auto states = fock::enumerate_basis(n, p);
      for (std::uint64_t i = 0; i < states.size(); ++i) {
        REQUIRE(fock::index_state(i, n, p) == states[i]);
        REQUIRE(fock::state_index(states[i]) == i);
      }
    }
}

TEST_CASE("FockBasis rank matches the free functions") {
  const fock::FockBasis basis(5, 6);
  for (std::uint64_t i = 0; i < basis.size(); ++i) CHECK(basis.index(basis.state(i)) == i);
}

TEST_CASE("index out of range and invalid states are rejected") {
  CHECK_THROWS_AS(fock::index_state(35, 4, 4), ValidationError);
  CHECK_THROWS_AS(OccupationState({1, -1}), ValidationError);
}

TEST_CASE("apply_pair_monomial examples") {
  auto r = fock::apply_pair_monomial(OccupationState{2}, OccupationState{2}, OccupationState{2});
  REQUIRE(r);
  CHECK(r->state == OccupationState{2});
  CHECK(r->amplitude == doctest::Approx(1.0).epsilon(1e-15));

  r = fock::apply_pair_monomial(OccupationState{3}, OccupationState{2}, OccupationState{2});
  REQUIRE(r);
  CHECK(r->state == OccupationState{3});
  CHECK(r->amplitude == doctest::Approx(3.0).epsilon(1e-15));

  CHECK_FALSE(fock::apply_pair_monomial(OccupationState{1, 1}, OccupationState{2, 0},
                                        OccupationState{0, 2}));
}

TEST_CASE("apply_pair_monomial validates its inputs") {
  CHECK_THROWS_AS(
      fock::apply_pair_monomial(OccupationState{1, 1}, OccupationState{1}, OccupationState{1}),
      ValidationError);
  CHECK_THROWS_AS(fock::apply_pair_monomial(OccupationState{2, 0}, OccupationState{1, 0},
                                            OccupationState{2, 0}),
                  ValidationError);
}

TEST_CASE("single mode: B^dag(k) B(k) |m> has amplitude C(m, k)") {
  for (int m = 0; m <= 30; ++m)
    for (int k = 0; k <= m; ++k) {
      const auto r = fock::apply_pair_monomial(OccupationState{m}, OccupationState{k},
                                               OccupationState{k});
      REQUIRE(r);
      CHECK(r->amplitude == doctest::Approx(static_cast<double>(oracle::pascal(m, k))).epsilon(1e-14));
    }
}

TEST_CASE("amplitudes agree with single-step ladder algebra (random cases)") {
  std::mt19937_64 rng(20261016);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const int m = static_cast<int>(rng() % 9);
    const int k = m == 0 ? 0 : static_cast<int>(rng() % (m + 1));
    const auto ket = fock::index_state(rng() % fock::dimension(n, m), n, m);
    const auto ann = fock::index_state(rng() % fock::dimension(n, k), n, k);
    const auto cre = fock::index_state(rng() % fock::dimension(n, k), n, k);
    const std::vector<int> kv(ket.occupations().begin(), ket.occupations().end());
    const std::vector<int> av(ann.occupations().begin(), ann.occupations().end());
    const std::vector<int> cv(cre.occupations().begin(), cre.occupations().end());
    const double expect = oracle::ladder_amplitude(kv, av, cv);
    const auto r = fock::apply_pair_monomial(ket, ann, cre);
    if (expect == 0.0) {
      CHECK_FALSE(r);
      continue;
    }
    REQUIRE(r);
    std::vector<int> image(kv.size());
    for (std::size_t i = 0; i < kv.size(); ++i) image[i] = kv[i] - av[i] + cv[i];
    CHECK(r->state == OccupationState(image));
    CHECK(r->amplitude == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("polynomial ladder oracle agrees with the step oracle") {
  for (int n = 1; n <= 3; ++n)
    for (int m = 0; m <= 4; ++m)
      for (int k = 0; k <= m; ++k)
        for (const auto& ket : fock::enumerate_basis(n, m))
          for (const auto& a : fock::enumerate_basis(n, k))
            for (const auto& c : fock::enumerate_basis(n, k))
              for (const auto& bra : fock::enumerate_basis(n, m)) {
                const std::vector<int> kv(ket.occupations().begin(), ket.occupations().end());
                const std::vector<int> av(a.occupations().begin(), a.occupations().end());
                const std::vector<int> cv(c.occupations().begin(), c.occupations().end());
                std::vector<int> image(kv.size());
                bool same = true;
                for (std::size_t i = 0; i < kv.size(); ++i) {
                  image[i] = kv[i] - av[i] + cv[i];
                  same = same && image[i] == bra[static_cast<int>(i)];
                }
                const double step = same ? oracle::ladder_amplitude(kv, av, cv) : 0.0;
                REQUIRE(validate::ladder_matrix_element(bra, c, a, ket) ==
                        doctest::Approx(step).epsilon(1e-13));
              }
}
