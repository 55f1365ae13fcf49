#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hoff/errors.hpp"
#include "hoff/ffpoly.hpp"
#include "hoff/pipeline.hpp"
#include "hoff/rng.hpp"

using namespace hoff;
using namespace hoff::ffpoly;

namespace {

PolyFp P2(std::vector<Residue> c) { return PolyFp(2, std::move(c)); }

PolyFp random_poly(std::uint32_t p, std::size_t max_len, Rng& rng) {
  return PolyFp(p, rng.point(p, rng.below(max_len + 1)));
}

// Mobius by trial division over monic divisors, independent of the
// distinct-degree machinery.
int mobius_trial(PolyFp f) {
  const std::uint32_t p = f.p();
  if (f.is_zero()) return 0;
  f = f.monic();
  int sign = 1;
  for (std::size_t deg = 1; static_cast<int>(deg) <= f.degree(); ++deg) {
    for (std::uint64_t idx = 0; idx < space_size({p, deg, SpaceKind::A}) && static_cast<int>(deg) <= f.degree(); ++idx) {
      const PolyFp g = space_element({p, deg, SpaceKind::A}, idx);
      if (!mod(f, g).is_zero()) continue;
      f = divrem(f, g).quotient;
      if (mod(f, g).is_zero()) return 0;
      sign = -sign;
    }
  }
  return sign;
}

}  // namespace

TEST_CASE("arithmetic examples over F_2") {
  CHECK(P2({1, 1}) * P2({1, 1}) == P2({1, 0, 1}));
  const auto [q, r] = divrem(P2({1, 1, 0, 1}), P2({1, 0, 1}));
  CHECK(q == P2({0, 1}));
  CHECK(r == P2({1}));
  CHECK(gcd(P2({0, 1, 1}), P2({1, 0, 1})) == P2({1, 1}));
  CHECK(derivative(P2({1, 1, 1})) == P2({1}));
}

TEST_CASE("trailing zeros are trimmed and zero has degree -1") {
  CHECK(PolyFp(3, {1, 2, 0, 0}).degree() == 1);
  CHECK(PolyFp(3).degree() == PolyFp::kZeroDegree);
  CHECK(PolyFp(3, {4, 5}) == PolyFp(3, {1, 2}));
}

TEST_CASE("division by zero and mixed moduli are rejected") {
  CHECK_THROWS_AS(divrem(P2({1}), PolyFp(2)), InvalidArgument);
  CHECK_THROWS_AS(P2({1}) + PolyFp(3, {1}), InvalidArgument);
}

TEST_CASE("property: divrem reconstructs and the remainder is short") {
  Rng rng(11);
  for (std::uint32_t p : {2u, 3u, 5u, 7u})
    for (int t = 0; t < 200; ++t) {
      const PolyFp f = random_poly(p, 9, rng);
      PolyFp g = random_poly(p, 6, rng);
      if (g.is_zero()) g = PolyFp::constant(p, 1);
      const auto [q, r] = divrem(f, g);
      CHECK(q * g + r == f);
      CHECK(r.degree() < g.degree());
    }
}

TEST_CASE("property: gcd divides both and is monic") {
  Rng rng(12);
  for (std::uint32_t p : {2u, 3u, 5u})
    for (int t = 0; t < 200; ++t) {
      const PolyFp f = random_poly(p, 7, rng), g = random_poly(p, 7, rng);
      const PolyFp h = gcd(f, g);
      if (f.is_zero() && g.is_zero()) {
        CHECK(h.is_zero());
        continue;
      }
      CHECK(h.is_monic());
      CHECK(mod(f, h).is_zero());
      CHECK(mod(g, h).is_zero());
    }
}

TEST_CASE("property: ring axioms on random triples") {
  Rng rng(13);
  for (std::uint32_t p : {2u, 3u, 5u})
    for (int t = 0; t < 100; ++t) {
      const PolyFp a = random_poly(p, 5, rng), b = random_poly(p, 5, rng), c = random_poly(p, 5, rng);
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a - a == PolyFp(p));
      CHECK(derivative(a * b) == derivative(a) * b + a * derivative(b));
    }
}

TEST_CASE("squarefree and factor-count examples") {
  CHECK(is_squarefree(P2({0, 1, 1})));
  CHECK_FALSE(is_squarefree(P2({0, 0, 1})));
  CHECK_FALSE(is_squarefree(P2({1, 0, 1, 0, 1})));
  CHECK(count_irreducible_factors(P2({0, 1, 1})) == 2);
  CHECK(count_irreducible_factors(P2({1, 1, 1})) == 1);
  CHECK(count_irreducible_factors(P2({1, 0, 1, 1})) == 1);
}

TEST_CASE("mobius examples") {
  CHECK(mobius(P2({0, 1})) == -1);
  CHECK(mobius(P2({0, 1, 1})) == 1);
  CHECK(mobius(P2({0, 0, 1})) == 0);
}

TEST_CASE("mobius agrees with trial division on every small polynomial") {
  for (auto [p, n] : {std::pair<std::uint32_t, std::size_t>{2, 7}, {3, 5}, {5, 3}})
    for_each_in_space({p, n, SpaceKind::G}, [&](const PolyFp& f) { CHECK(mobius(f) == mobius_trial(f)); });
}

TEST_CASE("property: mobius is multiplicative on coprime pairs") {
  Rng rng(14);
  for (int t = 0; t < 300; ++t) {
    const std::uint32_t p = t % 2 ? 3 : 2;
    const PolyFp f = random_poly(p, 5, rng), g = random_poly(p, 5, rng);
    if (f.is_zero() || g.is_zero() || gcd(f, g).degree() != 0) continue;
    CHECK(mobius(f * g) == mobius(f) * mobius(g));
  }
}

TEST_CASE("monic mobius sums vanish beyond degree one") {
  CHECK(mobius_sum(2, 1, true) == -2);
  CHECK(mobius_sum(2, 2, true) == 0);
  for (std::size_t n = 2; n <= 6; ++n) CHECK(mobius_sum(3, n, true) == 0);
}

TEST_CASE("space enumeration order and sizes") {
  const auto g2 = enumerate_space({2, 2, SpaceKind::G});
  REQUIRE(g2.size() == 4);
  CHECK(g2[0] == PolyFp(2));
  CHECK(g2[1] == P2({1}));
  CHECK(g2[2] == P2({0, 1}));
  CHECK(g2[3] == P2({1, 1}));
  const auto a1 = enumerate_space({3, 1, SpaceKind::A});
  REQUIRE(a1.size() == 3);
  CHECK(a1[0] == PolyFp(3, {0, 1}));
  CHECK(a1[2] == PolyFp(3, {2, 1}));
  CHECK(enumerate_space({2, 2, SpaceKind::A}).size() == 4);
  for (const auto& f : enumerate_space({3, 3, SpaceKind::A})) CHECK((f.is_monic() && f.degree() == 3));
}

TEST_CASE("base-w decomposition examples") {
  const auto dec = base_w_decompose(P2({0, 1, 0, 1, 0, 1}), P2({1, 0, 1}), 3, 2);
  CHECK(dec.res == P2({0, 1}));
  REQUIRE(dec.chunks.size() == 2);
  CHECK(dec.chunks[0].is_zero());
  CHECK(dec.chunks[1] == P2({1}));
  CHECK(dec.over.is_zero());
  CHECK(dec.reconstruct() == P2({0, 1, 0, 1, 0, 1}));

  const auto zero = base_w_decompose(PolyFp(2), P2({1, 0, 1}), 3, 2);
  CHECK(zero.res.is_zero());
  CHECK(zero.over.is_zero());
  for (const auto& c : zero.chunks) CHECK(c.is_zero());

  const auto self = base_w_decompose(P2({1, 0, 1}), P2({1, 0, 1}), 3, 2);
  CHECK(self.res.is_zero());
  CHECK(self.chunks[0] == P2({1}));
  CHECK(self.over.is_zero());

  CHECK_THROWS_AS(base_w_decompose(P2({1}), PolyFp(2), 3, 2), InvalidArgument);
  CHECK_THROWS_AS(base_w_decompose(P2({1}), P2({1, 0, 1}), 1, 2), InvalidArgument);
}

TEST_CASE("property: base-w decomposition parts have the stated shapes") {
  Rng rng(15);
  for (int t = 0; t < 300; ++t) {
    const std::uint32_t p = t % 2 ? 3 : 2;
    const std::size_t d = 1 + rng.below(3), s = 1 + rng.below(3);
    PolyFp w(p);
    while (w.is_zero()) w = PolyFp(p, rng.point(p, d + 1));
    const PolyFp x = random_poly(p, 12, rng);
    const auto dec = base_w_decompose(x, w, d, s);
    CHECK(dec.reconstruct() == x);
    CHECK(dec.res.degree() < w.degree());
    for (const auto& c : dec.chunks) CHECK(c.degree() < static_cast<int>(d));
    CHECK(mod(dec.over, shift(w, s * d)).is_zero());
  }
}

TEST_CASE("CSV cell encoding round-trips") {
  Rng rng(16);
  for (int t = 0; t < 50; ++t) {
    const PolyFp f = random_poly(5, 6, rng);
    CHECK(from_csv_cell(5, to_csv_cell(f)) == f);
  }
}
