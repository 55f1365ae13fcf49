#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hoff/errors.hpp"
#include "hoff/formcore.hpp"
#include "hoff/rng.hpp"
#include "hoff/space.hpp"
#include "hoff/variety.hpp"

using namespace hoff;

namespace {

MultilinearVariety dot_variety() {
  MultilinearVariety W(2, {2, 2});
  W.add_constraint(0b11, MultilinearForm::dot_product(2, 2, 2));
  return W;
}

std::uint64_t direct_count(const MultilinearVariety& W) {
  std::uint64_t n = 0;
  W.space().for_each([&](std::uint64_t, const PointTuple& x) {
    bool in = true;
    for (const auto& c : W.constraints()) {
      PointTuple sub;
      for (auto s : mask_slots(c.subset)) sub.push_back(x[s]);
      in = in && c.form.eval(sub) == 0;
    }
    n += in;
  });
  return n;
}

bool contains_variety(const MultilinearVariety& outer, const MultilinearVariety& inner) {
  bool ok = true;
  inner.space().for_each([&](std::uint64_t, const PointTuple& x) {
    if (inner.contains(x) && !outer.contains(x)) ok = false;
  });
  return ok;
}

}  // namespace

TEST_CASE("density examples") {
  CHECK(variety_density(MultilinearVariety(3, {2, 1})) == ExactFraction::one(3));
  CHECK(variety_density(dot_variety()) == ExactFraction(10, 2, 4));
  MultilinearVariety origin(3, {2});
  for (std::size_t i = 0; i < 2; ++i) {
    MultilinearForm e(3, {2});
    e.set({i}, 1);
    origin.add_constraint(0b1, e);
  }
  CHECK(variety_density(origin) == ExactFraction(1, 3, 2));
}

TEST_CASE("property: count and membership table agree with direct evaluation") {
  Rng rng(21);
  for (int t = 0; t < 60; ++t) {
    const std::uint32_t p = t % 2 ? 3 : 2;
    const std::vector<std::size_t> dims{1 + rng.below(2), 1 + rng.below(2), 1 + rng.below(2)};
    MultilinearVariety W(p, dims);
    const std::size_t r = rng.below(3);
    for (std::size_t i = 0; i < r; ++i) {
      const SlotMask mask = static_cast<SlotMask>(1 + rng.below(7));
      std::vector<std::size_t> sub;
      for (auto s : mask_slots(mask)) sub.push_back(dims[s]);
      W.add_constraint(mask, MultilinearForm::random(p, sub, rng));
    }
    const auto n = direct_count(W);
    CHECK(W.count() == n);
    const auto table = W.membership_table();
    CHECK(static_cast<std::uint64_t>(std::count(table.begin(), table.end(), true)) == n);
    // |W| >= p^{-r} |U|
    CHECK(!(variety_density(W) < ExactFraction::inverse_power(p, static_cast<std::uint32_t>(r))));
  }
}

TEST_CASE("constraint shape mismatches are rejected") {
  MultilinearVariety W(2, {2, 3});
  CHECK_THROWS_AS(W.add_constraint(0b11, MultilinearForm(2, {3, 2})), InvalidArgument);
  CHECK_THROWS_AS(W.add_constraint(0b100, MultilinearForm(2, {2})), InvalidArgument);
  CHECK_THROWS_AS(W.add_constraint(0b01, MultilinearForm(3, {2})), InvalidArgument);
}

TEST_CASE("convolution positivity examples") {
  CHECK(directional_convolution_positive(MultilinearVariety(2, {2, 2}), {}).positive);
  const auto rep = directional_convolution_positive(dot_variety(), {});
  CHECK(rep.positive);
  CHECK(rep.points_checked == 10);
  CHECK_THROWS_AS(directional_convolution_positive(dot_variety(), {5}), InvalidArgument);
}

TEST_CASE("external approximation examples") {
  const auto id = MultilinearForm::dot_product(3, 2, 2);
  const auto ea = external_approximation(id, Rational(0), 1, 2);
  CHECK(ea.zero_set_size == 1);
  CHECK(ea.excess == 0);
  const auto zero = external_approximation(MultilinearForm(3, {2, 2}), Rational(0), 1);
  CHECK(zero.zero_set_size == 9);
  CHECK(zero.excess == 0);
}

TEST_CASE("property: external approximation contains Z and meets its target") {
  Rng rng(22);
  for (int t = 0; t < 30; ++t) {
    const std::uint32_t p = t % 2 ? 3 : 2;
    const auto a = MultilinearForm::random(p, {2, 2, 2}, rng);
    const Rational target(1, 4);
    const auto ea = external_approximation(a, target, rng.next());
    CHECK(Rational(BigInt(ea.excess)) <= target * Rational(BigInt(ea.ambient_size)));
    // every point of Z lies in V
    ProductSpace(p, {2, 2}).for_each([&](std::uint64_t, const PointTuple& x) {
      if (a.last_slot_map(x) == Point(2, 0)) CHECK(ea.variety.contains(x));
    });
    CHECK(ea.variety.count() == ea.zero_set_size + ea.excess);
  }
}

TEST_CASE("subvariety finder") {
  const auto whole = subvariety_finder(MultilinearVariety(2, {2, 2}), 2);
  REQUIRE(whole.status == FinderStatus::Found);
  CHECK(whole.variety->constraints().empty());

  const auto W = dot_variety();
  const auto found = subvariety_finder(W, 3);
  REQUIRE(found.status == FinderStatus::Found);
  CHECK(contains_variety(W, *found.variety));
  CHECK(found.variety->codimension_bound() <= 3);

  MultilinearVariety point(2, {1, 1});
  MultilinearForm e(2, {1});
  e.set({0}, 1);
  point.add_constraint(0b01, e);
  point.add_constraint(0b10, e);
  FinderOptions no_self;
  no_self.include_defining_forms = false;
  CHECK(subvariety_finder(point, 1, no_self).status == FinderStatus::NotFound);
}

TEST_CASE("biased fiber variety") {
  // alpha(a, x, y) = a x . y on F_2 x F_2^2 x F_2^2
  MultilinearForm alpha(2, {1, 2, 2});
  alpha.set({0, 0, 0}, 1);
  alpha.set({0, 1, 1}, 1);
  const auto rep = biased_fiber_variety(alpha, 1, ExactFraction(1, 2, 1), 5);
  REQUIRE(rep.variety.has_value());
  REQUIRE(rep.measured_c_tilde.has_value());
  CHECK(!(*rep.measured_c_tilde < ExactFraction(1, 2, 2)));
  for (const auto& fp : rep.table) {
    const auto x = ProductSpace(2, {1}).decode(fp.index);
    CHECK(fp.slice_bias == bias(slice_form(alpha, x)));
  }

  const auto zero = biased_fiber_variety(MultilinearForm(2, {1, 2, 2}), 1, ExactFraction::one(2), 5);
  REQUIRE(zero.measured_c_tilde.has_value());
  CHECK(*zero.measured_c_tilde == ExactFraction::one(2));
  CHECK(zero.s_c_size == 2);
}
