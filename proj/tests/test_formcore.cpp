#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hoff/errors.hpp"
#include "hoff/formcore.hpp"
#include "hoff/multiaffine_form.hpp"
#include "hoff/polynomial_fn.hpp"
#include "hoff/rng.hpp"
#include "hoff/space.hpp"

using namespace hoff;

namespace {

MultilinearForm xy(std::uint32_t p) {
  MultilinearForm f(p, {1, 1});
  f.set({0, 0}, 1);
  return f;
}

MultilinearForm dot2(std::uint32_t p) { return MultilinearForm::dot_product(p, 2, 2); }

// Brute-force bias at p = 2: (#even - #odd) / |U| as an exact fraction.
ExactFraction bias_p2(const MultilinearForm& a) {
  std::int64_t sum = 0;
  const ProductSpace U(2, a.dims());
  U.for_each([&](std::uint64_t, const PointTuple& x) { sum += a.eval(x) ? -1 : 1; });
  return ExactFraction(BigInt(sum), 2, static_cast<std::uint32_t>(U.total_dim()));
}

// k-th symmetric finite difference of Q divided by k!, from the definition.
Residue difference_oracle(const PolynomialFn& Q, const PointTuple& a) {
  const std::uint32_t p = Q.p();
  const std::size_t k = a.size(), n = Q.n();
  std::int64_t acc = 0;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    Point x(n, 0);
    int bits = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) {
        x = add_points(x, a[i], p);
        ++bits;
      }
    const std::int64_t v = Q.eval(x);
    acc += ((k - bits) % 2 ? -v : v);
  }
  std::int64_t fact = 1;
  for (std::size_t i = 2; i <= k; ++i) fact = fact * static_cast<std::int64_t>(i) % p;
  std::int64_t inv = 1;
  for (std::uint32_t e = 0; e < p - 2; ++e) inv = inv * fact % p;
  return static_cast<Residue>((((acc % p) + p) % p) * inv % p);
}

}  // namespace

TEST_CASE("evaluation examples") {
  CHECK(xy(3).eval({{2}, {2}}) == 1);
  CHECK(dot2(2).eval({{1, 1}, {1, 1}}) == 0);
  Rng rng(1);
  const auto a = MultilinearForm::random(5, {2, 3}, rng);
  CHECK(a.eval({{0, 0}, rng.point(5, 3)}) == 0);
  CHECK_THROWS_AS(a.eval({{1, 1}, {1, 1}}), InvalidArgument);
}

TEST_CASE("bias examples") {
  CHECK(bias(MultilinearForm(2, {2, 2})) == ExactFraction::one(2));
  CHECK(bias(xy(2)) == ExactFraction(1, 2, 1));
  CHECK(bias(dot2(2)) == ExactFraction(1, 2, 2));
  CHECK(bias(xy(3)) == ExactFraction(1, 3, 1));
  CHECK(std::abs(bias_direct_oracle(xy(3)) - std::complex<double>(1.0 / 3, 0)) < 1e-9);
  CHECK(std::abs(bias_direct_oracle(xy(2)) - std::complex<double>(0.5, 0)) < 1e-12);
}

TEST_CASE("property: rank bias equals the brute-force character sum at p = 2") {
  Rng rng(2);
  for (int t = 0; t < 150; ++t) {
    std::vector<std::size_t> dims;
    const std::size_t k = 1 + rng.below(3);
    for (std::size_t i = 0; i < k; ++i) dims.push_back(1 + rng.below(3));
    const auto a = MultilinearForm::random(2, dims, rng);
    CHECK(bias(a) == bias_p2(a));
  }
}

TEST_CASE("property: bias is real, positive and at most one for odd p") {
  Rng rng(3);
  for (std::uint32_t p : {3u, 5u})
    for (int t = 0; t < 60; ++t) {
      const auto a = MultilinearForm::random(p, {1 + rng.below(2), 1 + rng.below(2), 1}, rng);
      const auto b = bias(a);
      CHECK(b.to_double() > 0);
      CHECK(b.to_double() <= 1);
      const auto direct = bias_direct_oracle(a);
      CHECK(std::abs(direct.real() - b.to_double()) < 1e-9);
      CHECK(std::abs(direct.imag()) < 1e-9);
    }
}

TEST_CASE("symmetric form examples") {
  PolynomialFn cube(5, 1);
  cube.add_term({3}, 1);
  const auto L = derived_symmetric_form(cube, 3);
  CHECK(L.eval({{1}, {2}, {3}}) == 1);

  PolynomialFn q(3, 2);
  q.add_term({1, 1}, 1);
  const auto L2 = derived_symmetric_form(q, 2);
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const Point a = rng.point(3, 2), b = rng.point(3, 2);
    CHECK(L2.eval({a, b}) == (2 * (a[0] * b[1] + a[1] * b[0])) % 3);
  }
}

TEST_CASE("property: symmetric form matches finite differences and the diagonal") {
  Rng rng(5);
  for (std::uint32_t p : {3u, 5u, 7u})
    for (int t = 0; t < 10; ++t) {
      const unsigned k = 1 + static_cast<unsigned>(rng.below(std::min<std::uint32_t>(p - 1, 3)));
      const std::size_t n = 1 + rng.below(2);
      const auto Q = PolynomialFn::random(p, n, k, rng);
      if (Q.degree() != static_cast<int>(k)) continue;
      const auto L = derived_symmetric_form(Q, k);
      for (int s = 0; s < 10; ++s) {
        PointTuple a(k);
        for (auto& v : a) v = rng.point(p, n);
        CHECK(L.eval(a) == difference_oracle(Q, a));
        auto sig = all_permutations(k)[rng.below(all_permutations(k).size())];
        CHECK(permute_slots(L, sig).eval(a) == L.eval(a));
      }
      const auto Qk = Q.homogeneous_part(k);
      ProductSpace(p, {n}).for_each([&](std::uint64_t, const PointTuple& x) {
        CHECK(L.eval(PointTuple(k, x[0])) == Qk.eval(x[0]));
      });
    }
}

TEST_CASE("restriction examples") {
  const auto a = dot2(2);
  const Matrix e1{{1, 0}};
  const auto r = restrict_form(a, {e1, e1});
  CHECK(r == xy(2));
  CHECK(bias(r) >= bias(a));
  const Matrix id{{1, 0}, {0, 1}};
  CHECK(bias(restrict_form(a, {id, id})) == bias(a));
  CHECK(bias(restrict_form(a, {Matrix{}, Matrix{}})) == ExactFraction::one(2));
  CHECK_THROWS_AS(restrict_form(a, {Matrix{{1, 1}, {1, 1}}, id}), InvalidArgument);
}

TEST_CASE("sum and permutation examples") {
  CHECK(add(xy(2), xy(2)).is_zero());
  CHECK(bias(add(xy(3), xy(3))) == ExactFraction(1, 3, 1));
  MultilinearForm f(3, {2, 2});
  f.set({0, 1}, 1);
  CHECK(bias(permute_slots(f, {1, 0})) == bias(f));
  CHECK(permute_slots(f, {1, 0}).at({1, 0}) == 1);
}

TEST_CASE("multiaffine examples") {
  MultiaffineForm lam(3, {1, 1});
  MultilinearForm lin(3, {1});
  lin.set({0}, 1);
  lam.add_component(0b01, lin);
  lam.add_component(0b10, lin);
  MultilinearForm one(3, {});
  one.set({}, 1);
  lam.add_component(0, one);
  CHECK(extract_multilinear_part(lam).is_zero());
  CHECK(lam.has_vanishing_multilinear_part());

  MultiaffineForm prod(3, {1, 1});
  prod.add_component(0b11, xy(3));
  CHECK(extract_multilinear_part(prod) == xy(3));
  CHECK_FALSE(prod.has_vanishing_multilinear_part());
}

TEST_CASE("property: alternating-sum extraction recovers the top component") {
  Rng rng(6);
  for (int t = 0; t < 40; ++t) {
    const std::uint32_t p = t % 2 ? 3 : 2;
    const std::vector<std::size_t> dims{1 + rng.below(2), 1 + rng.below(2)};
    MultiaffineForm lam(p, dims);
    for (SlotMask I = 0; I < 4; ++I) {
      std::vector<std::size_t> sub;
      for (auto s : mask_slots(I)) sub.push_back(dims[s]);
      lam.add_component(I, MultilinearForm::random(p, sub, rng));
    }
    const auto top = lam.component(0b11);
    CHECK(extract_multilinear_part(lam) == top);
    ProductSpace(p, dims).for_each([&](std::uint64_t, const PointTuple& d) {
      const PointTuple base{rng.point(p, dims[0]), rng.point(p, dims[1])};
      CHECK(multilinear_part_at(lam, base, d) == top.eval(d));
    });
  }
}

TEST_CASE("composed forms") {
  using ffpoly::PolyFp;
  PolynomialFn Q(3, 2);
  Q.add_term({1, 1}, 1);
  Q.add_term({2, 0}, 2);
  const auto L = derived_symmetric_form(Q, 2);
  const std::size_t m = 1, n = 2;
  // psi_a(x_1, x_2) = sum over pi of L(a_1 x_{pi 1}, a_2 x_{pi 2}) on G_{n-m}.
  ffpoly::for_each_in_space({3, m, ffpoly::SpaceKind::G}, [&](const PolyFp& a1) {
    ffpoly::for_each_in_space({3, m, ffpoly::SpaceKind::G}, [&](const PolyFp& a2) {
      const auto psi = composed_multiplication_form(L, {a1, a2}, m, n);
      ffpoly::for_each_in_space({3, n - m, ffpoly::SpaceKind::G}, [&](const PolyFp& x1) {
        ffpoly::for_each_in_space({3, n - m, ffpoly::SpaceKind::G}, [&](const PolyFp& x2) {
          const Residue direct = (L.eval({(a1 * x1).coordinates(n), (a2 * x2).coordinates(n)}) +
                                  L.eval({(a1 * x2).coordinates(n), (a2 * x1).coordinates(n)})) %
                                 3;
          CHECK(psi.eval({x1.coordinates(n - m), x2.coordinates(n - m)}) == direct);
        });
      });
      if (a1.is_zero() || a2.is_zero()) CHECK(psi.is_zero());
    });
  });
  const auto one = PolyFp::constant(3, 1);
  const auto psi1 = composed_multiplication_form(L, {one, one}, 1, 2);
  CHECK(psi1 == scale(restrict_form(L, {Matrix{{1, 0}}, Matrix{{1, 0}}}), 2));
}

TEST_CASE("rearrangement examples") {
  CHECK(rearrangement_dominates({1, 2}, {1, 2}, {1, 0}));
  for (const auto& s : all_permutations(3)) {
    if (s == std::vector<std::size_t>{0, 1, 2}) continue;
    CHECK(rearrangement_dominates({0, 1, 2}, {0, 1, 2}, s));
  }
  CHECK_THROWS_AS(rearrangement_dominates({1, 1}, {0, 2}, {1, 0}), RearrangementPrecondition);
  CHECK_THROWS_AS(rearrangement_dominates({2, 1}, {0, 2}, {1, 0}), RearrangementPrecondition);
}
