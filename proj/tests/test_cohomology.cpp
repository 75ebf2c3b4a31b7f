#include "doctest.h"
#include "gen.hpp"
#include "modules.hpp"
#include "iwtower/cohomology.hpp"
#include "iwtower/error.hpp"

using namespace iwtower;
using modules::kOrders;
using modules::poly_in_sigma;
using modules::random_coeffs;
using modules::random_lattice;

namespace {

AbelianGroup group(std::vector<long> orders) {
  std::vector<mpz_class> o(orders.begin(), orders.end());
  return AbelianGroup::from_cyclic_orders(o);
}

bool same(const AbelianGroup& a, const AbelianGroup& b) {
  return a.invariant_factors() == b.invariant_factors();
}

}  // namespace

TEST_CASE("regular and trivial modules") {
  for (unsigned long p : {2UL, 3UL, 5UL, 7UL}) {
    long m = static_cast<long>(p);
    CHECK(tate(regular_module(m), 0).is_trivial());
    CHECK(tate(regular_module(m), 1).is_trivial());
    CHECK(same(tate(trivial_module(m, 1), 0), group({m})));
    CHECK(tate(trivial_module(m, 1), 1).is_trivial());
    CHECK(herbrand_quotient(trivial_module(m, 1)) == mpq_class(m));
  }
  CHECK(tate(trivial_module(1, 2), 0).is_trivial());
}

TEST_CASE("free modules are cohomologically trivial (property)") {
  gen::Rng r(71);
  for (int trial = 0; trial < 30; ++trial) {
    long m = r.pick(kOrders);
    auto M = regular_module(m, static_cast<std::size_t>(r.range(1, 3)));
    for (int i = -2; i <= 3; ++i) CHECK(tate(M, i).is_trivial());
  }
}

TEST_CASE("permutation modules") {
  CHECK(same(tate(permutation_module(4, 2), 0), group({2})));
  CHECK(tate(permutation_module(4, 2), 1).is_trivial());
  CHECK(same(tate(permutation_module(5, 5), 0), group({5})));
  CHECK(tate(permutation_module(5, 1), 0).is_trivial());
  CHECK_THROWS_AS(permutation_module(6, 4), DomainError);
  // Z[G/H] carries the cohomology of H acting trivially on Z
  for (long m : kOrders)
    for (long h = 1; h <= m; ++h) {
      if (m % h) continue;
      auto M = permutation_module(m, h);
      CHECK(same(tate(M, 0), h == 1 ? AbelianGroup{} : group({h})));
      CHECK(tate(M, 1).is_trivial());
    }
}

TEST_CASE("S-cycle model: H^0 = 0, H^1 = (Z/p)^{s-1}") {
  for (unsigned long p : {2UL, 3UL, 5UL})
    for (std::size_t s : {1, 2, 3, 4}) {
      long m = static_cast<long>(p);
      auto M = s_cycle_model(m, s);
      CHECK(tate(M, 0).is_trivial());
      auto h1 = tate(M, 1);
      CHECK(h1.is_finite());
      CHECK(h1.p_rank(p) == static_cast<int>(s - 1));
      mpz_class order = 1;
      for (std::size_t k = 1; k < s; ++k) order *= m;
      CHECK(*h1.order() == order);
    }
  CHECK_THROWS_AS(s_cycle_model(3, 0), DomainError);
}

TEST_CASE("augmentation kernel shifts degree against trivial modules (property)") {
  for (long m : kOrders)
    for (std::size_t r = 1; r <= 3; ++r)
      for (int i = 0; i < 2; ++i)
        CHECK(same(tate(augmentation_kernel(m, r), i + 1), tate(trivial_module(m, r), i)));
}

TEST_CASE("degree-shift model and hbar defect") {
  for (long m : kOrders) {
    auto M = degree_shift_model(m);
    for (int i = 0; i < 2; ++i) CHECK(same(tate(M, i), tate(trivial_module(m, 1), i + 1)));
  }
  HbarHypotheses ok{true, true};
  for (unsigned long p : {2UL, 3UL, 5UL, 7UL}) CHECK(hbar_defect(p, ok) == -1);
  CHECK_THROWS_AS(hbar_defect(3, {}), DomainError);
  CHECK_THROWS_AS(hbar_defect(3, {true, false}), DomainError);
  CHECK_THROWS_AS(hbar_defect(3, {false, true}), DomainError);
  CHECK_THROWS_AS(hbar_defect(4, ok), DomainError);
}

TEST_CASE("finite-index sublattices of trivial Z^s have Herbrand quotient p^s (property)") {
  gen::Rng r(72);
  for (int trial = 0; trial < 40; ++trial) {
    unsigned long p = static_cast<unsigned long>(r.pick(std::vector<long>{2, 3, 5}));
    std::size_t s = static_cast<std::size_t>(r.range(1, 4));
    // upper triangular with nonzero diagonal, then scrambled
    IntMatrix B(s, s);
    for (std::size_t i = 0; i < s; ++i) {
      B(i, i) = r.range(1, 6) * (r.coin() ? 1 : -1);
      for (std::size_t j = i + 1; j < s; ++j) B(i, j) = r.range(-4, 4);
    }
    B = gen::unimodular(r, s) * B;
    auto M = sublattice_model(static_cast<long>(p), B);
    mpz_class ps = 1;
    for (std::size_t k = 0; k < s; ++k) ps *= p;
    CHECK(herbrand_quotient(M) == mpq_class(ps));
    CHECK(tate(M, 1).is_trivial());
    CHECK(tate(M, 2).p_rank(p) == static_cast<int>(s));
  }
  CHECK_THROWS_AS(sublattice_model(3, IntMatrix::from_rows({{1, 1}, {2, 2}})), DomainError);
}

TEST_CASE("2-periodicity (property)") {
  gen::Rng r(73);
  for (int trial = 0; trial < 30; ++trial) {
    long m = r.pick(kOrders);
    auto B = random_lattice(r, m);
    auto seq = image_sequence(B, poly_in_sigma(B, random_coeffs(r, m)));
    for (const auto* M : {&seq.sub, &seq.middle, &seq.quotient})
      for (int i = -3; i <= 2; ++i) CHECK(same(tate(*M, i), tate(*M, i + 2)));
  }
}

TEST_CASE("Herbrand quotient is multiplicative on short exact sequences (property)") {
  gen::Rng r(74);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    long m = r.pick(kOrders);
    auto B = random_lattice(r, m);
    auto c = random_coeffs(r, m);
    IntMatrix phi = poly_in_sigma(B, c);
    // sometimes force a kernel with a factor sigma - 1 or the norm
    if (r.range(0, 2) == 0) phi = phi * (B.sigma - IntMatrix::identity(B.rank));
    else if (r.range(0, 3) == 0) phi = phi * norm_matrix(B);
    auto seq = image_sequence(B, phi);
    CAPTURE(m);
    CHECK(herbrand_quotient(seq.middle) == herbrand_quotient(seq.sub) * herbrand_quotient(seq.quotient));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("finite modules have Herbrand quotient one (property)") {
  gen::Rng r(75);
  int finite = 0;
  for (int trial = 0; trial < 60; ++trial) {
    long m = r.pick(kOrders);
    auto B = random_lattice(r, m);
    IntMatrix phi = poly_in_sigma(B, random_coeffs(r, m));
    if (smith_decompose(phi).rank != B.rank) continue;
    auto C = image_sequence(B, phi).quotient;
    REQUIRE(underlying_group(C).is_finite());
    CHECK(herbrand_quotient(C) == 1);
    ++finite;
  }
  CHECK(finite > 20);
}

TEST_CASE("invalid modules are rejected") {
  CyclicGModule M{3, 2, IntMatrix(2, 0), IntMatrix::from_rows({{0, 1}, {1, 0}})};
  CHECK_THROWS_AS(tate(M, 0), DomainError);  // sigma^3 != 1
  M.m = 2;
  CHECK_NOTHROW(tate(M, 0));
  // sigma moves the relation lattice
  CyclicGModule N{2, 2, IntMatrix::from_rows({{2}, {0}}), IntMatrix::from_rows({{0, 1}, {1, 0}})};
  CHECK_THROWS_AS(validate_module(N), DomainError);
  // on Z/2 the swap is fine once both coordinates are killed mod 2
  N.relations = IntMatrix::from_rows({{2, 0}, {0, 2}});
  CHECK_NOTHROW(validate_module(N));
  CHECK(herbrand_quotient(N) == 1);
  CHECK_THROWS_AS(image_sequence(regular_module(3), IntMatrix::from_rows({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}})),
                  DomainError);
}
