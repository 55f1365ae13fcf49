#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hoff/errors.hpp"
#include "hoff/formcore.hpp"
#include "hoff/pipeline.hpp"
#include "hoff/rng.hpp"

using namespace hoff;
using ffpoly::PolyFp;

namespace {

// (1/p^n) sum over G_n of mu(f) chi(Q(coordinates of f)), from scratch.
std::complex<double> correlation_oracle(const PolynomialFn& Q) {
  const std::uint32_t p = Q.p();
  std::complex<double> acc = 0;
  std::uint64_t total = 0;
  ffpoly::for_each_in_space({p, Q.n(), ffpoly::SpaceKind::G}, [&](const PolyFp& f) {
    ++total;
    const int mu = ffpoly::mobius(f);
    if (mu) acc += static_cast<double>(mu) * character(Q.eval(f.coordinates(Q.n())), p);
  });
  return acc / static_cast<double>(total);
}

}  // namespace

TEST_CASE("correlation against the direct sum") {
  const auto zero = mobius_correlation(PolynomialFn(2, 3));
  CHECK(std::abs(zero.S - std::complex<double>(static_cast<double>(mobius_sum(2, 3, false)) / 8, 0)) < 1e-12);

  PolynomialFn q(3, 2);
  q.add_term({1, 1}, 1);
  const auto r = mobius_correlation(q);
  CHECK(std::abs(r.S - correlation_oracle(q)) < 1e-12);
  CHECK(r.abs_S <= 1);
  CHECK(r.permuted_deviation < 1e-12);
  CHECK_FALSE(r.seconds.has_value());
  CHECK(mobius_correlation(q, true).seconds.has_value());

  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    const auto Q = random_degree_k_polynomial(3, 1 + rng.below(4), 2, rng);
    CHECK(std::abs(mobius_correlation(Q).S - correlation_oracle(Q)) < 1e-12);
  }
}

TEST_CASE("sampler degree is exact") {
  Rng rng(42);
  for (int t = 0; t < 30; ++t) CHECK(random_degree_k_polynomial(5, 3, 1 + t % 4, rng).degree() == 1 + t % 4);
}

TEST_CASE("dichotomy report") {
  Rng rng(43);
  PolynomialFn Q = random_degree_k_polynomial(3, 4, 2, rng);
  while (mobius_correlation(Q).abs_S < 1e-9) Q = random_degree_k_polynomial(3, 4, 2, rng);
  const double c = mobius_correlation(Q).abs_S;
  const auto rep = vaughan_dichotomy_check(Q, c, 1);
  CHECK((rep.first_disjunct_positive || rep.second_disjunct_positive));
  CHECK(rep.bias_LQ == bias(derived_symmetric_form(Q, 2)));
  bool both_sets = false, monic = false;
  for (const auto& row : rep.vaughan_rows) {
    monic = monic || row.set == MultiplierSet::Monic;
    both_sets = both_sets || row.set == MultiplierSet::All;
    CHECK(row.square_average.value().real() >= -1e-12);
  }
  CHECK((monic && both_sets));
  for (const auto& row : rep.composed_rows) {
    std::uint64_t n = 0;
    for (const auto& [b, count] : row.bias_histogram) n += count;
    CHECK(n == row.tuples);
  }
  CHECK_THROWS_AS(vaughan_dichotomy_check(Q, c + 0.01, 1), HypothesisFailure);
  // Q = 0: every branch still evaluated
  const auto z = vaughan_dichotomy_check(PolynomialFn(3, 3), 0, 1);
  CHECK_FALSE(z.vaughan_rows.empty());
}

TEST_CASE("chevalley-warning search") {
  const auto whole = chevalley_warning_search(MultilinearVariety(2, {3}), 3, 1);
  CHECK(whole.solutions == 8);
  REQUIRE(whole.w.has_value());
  CHECK_FALSE(whole.w->is_zero());

  MultilinearVariety W(2, {3});
  MultilinearForm e(2, {3});
  e.set({0}, 1);
  e.set({2}, 1);
  W.add_constraint(0b1, e);
  const auto rep = chevalley_warning_search(W, 3, 1);
  CHECK(rep.solutions % 2 == 0);
  REQUIRE(rep.w.has_value());
  CHECK(W.contains({rep.w->coordinates(3)}));

  // d = 1 with many equations: divisibility still checked even if only 0 solves.
  MultilinearVariety tight(3, {2, 2});
  Rng rng(44);
  for (int i = 0; i < 3; ++i) tight.add_constraint(0b11, MultilinearForm::random(3, {2, 2}, rng));
  const auto t = chevalley_warning_search(tight, 1, 2);
  CHECK_FALSE(t.degree_condition);
  CHECK(t.solutions >= 1);
}

TEST_CASE("sequence plan examples") {
  const auto a = sequence_plan({0, 2, 3}, 2, 5, 1);
  CHECK(a.l == std::vector<std::size_t>{0, 1, 1});
  CHECK(a.a == std::vector<std::size_t>{0, 1, 2});

  const auto c = sequence_plan({2, 2, 2}, 2, 6, 1);
  CHECK(c.l == std::vector<std::size_t>{1, 1, 1});
  CHECK(c.a == std::vector<std::size_t>{1, 1, 1});
  CHECK(c.multiplicity == 6);

  const auto g1 = sequence_plan({0, 1, 2, 3}, 1, 8, 1);
  CHECK(g1.l == std::vector<std::size_t>(4, 0));
  CHECK(g1.a == std::vector<std::size_t>{0, 1, 2, 3});

  CHECK_THROWS_AS(sequence_plan({2, 1}, 1, 5, 1), InvalidArgument);
  CHECK_THROWS_AS(sequence_plan({0, 1, 2}, 3, 5, 1), InvalidArgument);
  CHECK_THROWS_AS(sequence_plan({1, 1, 1}, 1, 5, 1, 3), InvalidArgument);
}

TEST_CASE("precedes is the sum-of-squares order") {
  CHECK(precedes({0, 2}, {1, 2}));
  CHECK_FALSE(precedes({1, 1}, {0, 1}));
  CHECK_FALSE(precedes({0, 2}, {2, 0}));
}

TEST_CASE("cascade report on a small instance") {
  Rng rng(45);
  const auto Q = random_degree_k_polynomial(3, 7, 2, rng);
  const auto rep = bias_cascade_report(Q, 1, 2);
  CHECK(rep.all_identities_hold);
  CHECK(rep.first_rows_at_least_c);
  CHECK(rep.reconstruction_exact);
  CHECK(rep.hom_identity_exact);
  CHECK(rep.bounds_consistent);
  CHECK(rep.rows.size() == rep.s * rep.s);
  for (std::size_t i = 0; i < rep.s; ++i) CHECK(!(rep.rows[i].bias < rep.c));
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i].sorted && rep.rows[i - 1].sorted && i > rep.s) CHECK_FALSE(precedes(rep.rows[i].v, rep.rows[i - 1].v));

  CHECK_THROWS_AS(bias_cascade_report(Q, 3, 2), InvalidArgument);
}

TEST_CASE("cascade with L_Q vanishing on the grid") {
  // Q depends only on the top coordinate, which the w-grid never reaches.
  PolynomialFn Q(3, 7);
  Q.add_term({0, 0, 0, 0, 0, 0, 2}, 1);
  const auto rep = bias_cascade_report(Q, 1, 2, std::nullopt, PolyFp::constant(3, 1));
  CHECK(rep.c == ExactFraction::one(3));
  for (const auto& row : rep.rows) CHECK(row.bias == ExactFraction::one(3));
}

TEST_CASE("degree lowering") {
  PolynomialFn q(3, 3);
  q.add_term({1, 1, 0}, 1);
  const double c = std::min(mobius_correlation(q).abs_S, bias(derived_symmetric_form(q, 2)).to_double());
  const auto r = degree_lowering(q, 2, c, 9);
  CHECK(r.Q_tilde.degree() <= 1);
  CHECK(std::abs(r.correlation - r.recomputed) < 1e-9);
  CHECK(std::abs(r.correlation - std::abs(correlation_oracle(r.Q_tilde))) < 1e-9);

  PolynomialFn lin(3, 3);
  lin.add_term({1, 0, 0}, 1);
  const auto same = degree_lowering(lin, 2, 0.0, 1);
  CHECK(same.Q_tilde == lin);
  CHECK_THROWS_AS(degree_lowering(q, 2, 0.99, 1), HypothesisFailure);
}

TEST_CASE("decay table") {
  const auto a = decay_experiment(3, 2, {2, 3, 4}, 10, 7);
  const auto b = decay_experiment(3, 2, {2, 3, 4}, 10, 7);
  CHECK(a.to_csv() == b.to_csv());
  CHECK(a.slope.has_value());
  CHECK(a.to_csv().rfind("n,max_abs_S,mean_abs_S,slope\n", 0) == 0);
  const auto single = decay_experiment(3, 2, {3}, 5, 7);
  CHECK_FALSE(single.slope.has_value());
  const auto structured = decay_experiment(3, 2, {2, 3}, 0, 1);
  CHECK(structured.to_csv() == decay_experiment(3, 2, {2, 3}, 0, 99).to_csv());
  for (const auto& row : a.rows) CHECK(row.max_abs_S >= row.mean_abs_S - 1e-15);
}
