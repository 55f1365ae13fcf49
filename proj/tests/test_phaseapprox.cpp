#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hoff/errors.hpp"
#include "hoff/formcore.hpp"
#include "hoff/multiaffine_form.hpp"
#include "hoff/phaseapprox.hpp"
#include "hoff/rng.hpp"
#include "hoff/space.hpp"

using namespace hoff;

namespace {

MultilinearForm xy(std::uint32_t p) {
  MultilinearForm f(p, {1, 1});
  f.set({0, 0}, 1);
  return f;
}

PolynomialFn square(std::uint32_t p) {
  PolynomialFn Q(p, 1);
  Q.add_term({2}, 1);
  return Q;
}

// ||f||_{U^k}^{2^k} straight from the definition, for k = 2 on F_p^n.
double u2_fourth_power(const FunctionTable& f) {
  const ProductSpace S(f.p, f.dims);
  const std::uint64_t N = S.size();
  std::complex<double> acc = 0;
  for (std::uint64_t x = 0; x < N; ++x)
    for (std::uint64_t a = 0; a < N; ++a)
      for (std::uint64_t b = 0; b < N; ++b) {
        const auto X = S.decode(x), A = S.decode(a), B = S.decode(b);
        PointTuple xa(X.size()), xb(X.size()), xab(X.size());
        for (std::size_t s = 0; s < X.size(); ++s) {
          xa[s] = add_points(X[s], A[s], f.p);
          xb[s] = add_points(X[s], B[s], f.p);
          xab[s] = add_points(xa[s], B[s], f.p);
        }
        acc += f.values[x] * std::conj(f.values[S.encode(xa)]) * std::conj(f.values[S.encode(xb)]) *
               f.values[S.encode(xab)];
      }
  return acc.real() / static_cast<double>(N * N * N);
}

}  // namespace

TEST_CASE("kernel variety examples") {
  CHECK(kernel_variety(MultilinearForm::dot_product(2, 2, 2)).count() == 1);
  CHECK(kernel_variety(MultilinearForm(2, {2, 2})).count() == 4);
  MultilinearForm a(3, {2, 1});
  a.set({0, 0}, 1);
  const auto Z = kernel_variety(a);
  CHECK(variety_density(Z) == ExactFraction(1, 3, 1));
  Z.space().for_each([&](std::uint64_t, const PointTuple& x) { CHECK(Z.contains(x) == (x[0][0] == 0)); });
}

TEST_CASE("property: translate map agrees with A(x) - A(x - t) off the last slot") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    const std::uint32_t p = t % 2 ? 3 : 2;
    const std::vector<std::size_t> dims{2, 2, 2};
    const auto a = MultilinearForm::random(p, dims, rng);
    const PointTuple tt{rng.point(p, 2), rng.point(p, 2)};
    const auto L = translate_map_L(a, tt);
    CHECK(extract_multilinear_part(L).is_zero());
    ProductSpace(p, dims).for_each([&](std::uint64_t, const PointTuple& x) {
      const PointTuple head{x[0], x[1]};
      const PointTuple shifted{sub_points(x[0], tt[0], p), sub_points(x[1], tt[1], p)};
      const Point diff = sub_points(a.last_slot_map(head), a.last_slot_map(shifted), p);
      CHECK(L.eval(x) == dot(diff, x[2], p));
    });
  }
}

TEST_CASE("multilinear phase approximation examples") {
  const auto zero = approximate_multilinear_phase(MultilinearForm(2, {1, 1}), 0.25, 1);
  CHECK(zero.combination.l2_error < 1e-12);
  CHECK(zero.construction.l1_exact == Rational(1));

  const auto r = approximate_multilinear_phase(xy(3), 0.4, 2);
  CHECK(l2_distance(phase_table(xy(3)), r.combination) <= 0.4);
  CHECK(r.construction.l1_exact <= Rational(3));

  const auto d = approximate_multilinear_phase(MultilinearForm::dot_product(2, 2, 2), 0.25, 3);
  CHECK(l2_distance(phase_table(MultilinearForm::dot_product(2, 2, 2)), d.combination) <= 0.25);
  for (const auto& term : d.combination.terms)
    CHECK(extract_multilinear_part(std::get<MultiaffineForm>(term.source)).is_zero());

  CHECK_THROWS_AS(approximate_multilinear_phase(xy(2), 0.0, 1), InvalidArgument);
}

TEST_CASE("property: grouped error matches the literal error") {
  Rng rng(32);
  for (int t = 0; t < 10; ++t) {
    const std::uint32_t p = t % 2 ? 3 : 2;
    auto a = MultilinearForm(p, {2, 2});
    a.set({rng.below(2), rng.below(2)}, 1);
    const auto r = approximate_multilinear_phase(a, 0.3, rng.next());
    REQUIRE(r.construction.literal_l2_error.has_value());
    CHECK(std::abs(*r.construction.literal_l2_error - r.construction.grouped_l2_error) < 1e-9);
    CHECK(std::abs(l2_distance(grouped_table(r.construction), phase_table(a)) - r.construction.grouped_l2_error) < 1e-9);
  }
}

TEST_CASE("polynomial phase approximation") {
  const auto r = approximate_polynomial_phase(square(3), 0.5, 4);
  CHECK(l2_distance(phase_table(square(3)), r.combination) <= 0.5);
  for (const auto& term : r.combination.terms) CHECK(std::get<PolynomialFn>(term.source).degree() <= 1);

  PolynomialFn q(3, 2);
  q.add_term({1, 1}, 1);
  const auto r2 = approximate_polynomial_phase(q, 0.5, 5);
  for (const auto& term : r2.combination.terms) CHECK(std::get<PolynomialFn>(term.source).degree() <= 1);

  const auto empty = approximate_polynomial_phase(square(3), 2.0, 6);
  CHECK(empty.combination.terms.empty());
  CHECK(empty.combination.l2_error <= 2.0);
}

TEST_CASE("gowers norm examples") {
  FunctionTable one{3, {2}, std::vector<std::complex<double>>(9, 1.0)};
  CHECK(std::abs(gowers_norm(one, 2) - 1.0) < 1e-12);
  PolynomialFn lin(3, 2);
  lin.add_term({1, 0}, 1);
  lin.add_term({0, 1}, 2);
  CHECK(std::abs(gowers_norm(phase_table(lin), 2) - 1.0) < 1e-9);
  CHECK(std::abs(gowers_norm(phase_table(square(3)), 2) - std::pow(1.0 / 3, 0.25)) < 1e-9);
  CHECK(gowers_power_exact(square(3), 2) == Rational(1, 3));
}

TEST_CASE("property: gowers norm agrees with the definition") {
  Rng rng(33);
  for (int t = 0; t < 6; ++t) {
    const std::uint32_t p = 3;
    const auto Q = PolynomialFn::random(p, 2, 2, rng);
    const auto f = phase_table(Q);
    CHECK(std::abs(std::pow(gowers_norm(f, 2), 4) - u2_fourth_power(f)) < 1e-9);
  }
}

TEST_CASE("gowers inverse") {
  const auto r = gowers_inverse_polynomial(square(3), 2, 7);
  CHECK(r.P.degree() <= 1);
  CHECK(r.correlation >= 1.0 / (2.0 * static_cast<double>(r.m)) - 1e-12);
  CHECK(std::abs(r.correlation - std::abs(phase_correlation(square(3), r.P))) < 1e-9);

  PolynomialFn lin(3, 2);
  lin.add_term({1, 0}, 1);
  const auto same = gowers_inverse_polynomial(lin, 2, 8);
  CHECK(std::abs(same.correlation - 1.0) < 1e-12);
}

TEST_CASE("l2 distance corner cases") {
  const auto f = phase_table(xy(2));
  CHECK(l2_distance(f, f) == 0.0);
  CHECK(std::abs(l2_distance(f, PhaseCombination{}) - 1.0) < 1e-12);
}
