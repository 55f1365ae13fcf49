#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "hoff/errors.hpp"
#include "hoff/formcore.hpp"
#include "hoff/phaseapprox.hpp"
#include "hoff/pipeline.hpp"
#include "hoff/rng.hpp"
#include "hoff/serialize.hpp"

using namespace hoff;
using io::Json;

namespace {

template <class T, class Decode>
void roundtrip(const T& x, Decode decode) {
  const std::string text = io::dump(io::to_json(x));
  CHECK(decode(io::parse(text)) == x);
}

std::string error_of(const std::string& text) {
  try {
    io::multilinear_form_from_json(io::parse(text));
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("polynomial round-trips") {
  roundtrip(ffpoly::PolyFp(2, {1, 0, 1}), io::poly_fp_from_json);
  roundtrip(ffpoly::PolyFp(5), io::poly_fp_from_json);
  Rng rng(51);
  for (int t = 0; t < 20; ++t) roundtrip(PolynomialFn::random(7, 3, 3, rng), io::polynomial_fn_from_json);
}

TEST_CASE("form and variety round-trips") {
  MultilinearForm f(3, {2, 2, 1});
  f.set({0, 1, 0}, 2);
  f.set({1, 1, 0}, 1);
  f.set({1, 0, 0}, 1);
  roundtrip(f, io::multilinear_form_from_json);
  Rng rng(52);
  for (int t = 0; t < 10; ++t) {
    const auto a = MultilinearForm::random(5, {2, 1, 3}, rng);
    roundtrip(a, io::multilinear_form_from_json);
    MultilinearVariety W(5, {2, 1, 3});
    W.add_constraint(0b101, MultilinearForm::random(5, {2, 3}, rng));
    W.add_constraint(0b010, MultilinearForm::random(5, {1}, rng));
    roundtrip(W, io::variety_from_json);
    MultiaffineForm lam(5, {2, 1});
    lam.add_component(0b01, MultilinearForm::random(5, {2}, rng));
    lam.add_component(0b11, MultilinearForm::random(5, {2, 1}, rng));
    roundtrip(lam, io::multiaffine_form_from_json);
  }
}

TEST_CASE("phase combination round-trips with full double precision") {
  PhaseCombination c;
  MultiaffineForm lam(3, {1, 1});
  lam.add_component(0b01, MultilinearForm::dot_product(3, 1, 1));
  c.terms.push_back({{0.1 + 1e-17, -1.0 / 3.0}, lam});
  PolynomialFn q(3, 2);
  q.add_term({1, 0}, 2);
  c.terms.push_back({{std::sqrt(2.0), 6.02214076e23}, q});
  refresh_metadata(c);
  c.l2_error = 0.123456789012345678;
  roundtrip(c, io::phase_combination_from_json);
}

TEST_CASE("exact fraction round-trips") {
  roundtrip(ExactFraction(BigInt("123456789012345678901234567890"), 3, 40), io::exact_fraction_from_json);
  roundtrip(ExactFraction::one(2), io::exact_fraction_from_json);
}

TEST_CASE("malformed input carries a position") {
  const auto e1 = error_of("{\"p\": 3, \"dims\": [2,");
  CHECK(e1.find("byte") != std::string::npos);
  const auto e2 = error_of(R"({"p": 4, "dims": [1], "entries": []})");
  CHECK(e2.find("/p") != std::string::npos);
  const auto e3 = error_of(R"({"p": 3, "dims": [2], "entries": [[5, 1]]})");
  CHECK(e3.find("/entries/0") != std::string::npos);
  const auto e4 = error_of(R"({"p": 3, "dims": [-1], "entries": []})");
  CHECK(e4.find("/dims/0") != std::string::npos);
  CHECK_THROWS_AS(io::poly_fp_from_json(io::parse(R"({"p": 2, "coeffs": [0, 2]})")), ParseError);
}

TEST_CASE("reports serialize") {
  PolynomialFn q(3, 2);
  q.add_term({1, 1}, 1);
  const Json j = io::to_json(mobius_correlation(q));
  CHECK(j.contains("S"));
  CHECK(j.at("p") == 3);
  const Json d = io::to_json(decay_experiment(3, 2, {2, 3}, 2, 1));
  CHECK(d.at("rows").size() == 2);
}
