#include "hoff/phaseapprox.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "hoff/budget.hpp"
#include "hoff/formcore.hpp"
#include "hoff/rng.hpp"

namespace hoff {
namespace {

Rational rational_from_double(double v) {
  int exp = 0;
  const double mant = std::frexp(v, &exp);
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  Rational r = Rational(BigInt(scaled));
  const int shift = exp - 53;
  const BigInt two_pow = boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(std::abs(shift)));
  return shift >= 0 ? r * Rational(two_pow) : r / Rational(two_pow);
}

bool is_zero_point(const Point& v) {
  return std::all_of(v.begin(), v.end(), [](Residue c) { return c == 0; });
}

// Digitwise addition and subtraction of ProductSpace indices.
class IndexArithmetic {
 public:
  IndexArithmetic(std::uint32_t p, std::size_t digits) : p_(p), digits_(digits) {}
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return combine(a, b, false); }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return combine(a, b, true); }

 private:
  std::uint64_t combine(std::uint64_t a, std::uint64_t b, bool subtract) const {
    std::uint64_t r = 0, place = 1;
    for (std::size_t j = 0; j < digits_; ++j) {
      const std::uint64_t x = a % p_, y = b % p_;
      r += (subtract ? (x + p_ - y) % p_ : (x + y) % p_) * place;
      a /= p_;
      b /= p_;
      place *= p_;
    }
    return r;
  }
  std::uint64_t p_;
  std::size_t digits_;
};

std::vector<Point> last_slot_table(const MultilinearForm& alpha, const ProductSpace& U) {
  std::vector<Point> A(U.size("last-slot map table"));
  U.for_each([&](std::uint64_t i, const PointTuple& x) { A[i] = alpha.last_slot_map(x); });
  return A;
}

std::vector<std::size_t> head_dims(const MultilinearForm& alpha) {
  return std::vector<std::size_t>(alpha.dims().begin(), alpha.dims().end() - 1);
}

/// The (i, tau) term: tau . beta(x - t) + L_t(x) . x_k.
MultiaffineForm term_form(const MlConstruction& c, std::size_t i, const Point& tau_coords) {
  const MultilinearForm& alpha = c.alpha;
  const std::size_t k = alpha.k();
  const std::uint32_t p = alpha.p();
  MultiaffineForm lambda = translate_map_L(alpha, c.translates[i]);
  if (c.outer && !c.outer->taus.empty()) {
    Point combined(alpha.dims().back(), 0);
    for (std::size_t j = 0; j < tau_coords.size(); ++j)
      for (std::size_t q = 0; q < combined.size(); ++q)
        combined[q] = static_cast<Residue>((combined[q] + std::uint64_t{tau_coords[j]} * c.outer->taus[j][q]) % p);
    const MultilinearForm beta_tau = alpha.contract(k - 1, combined);
    const MultiaffineForm shifted = translate_form(beta_tau, c.translates[i]);
    for (const auto& [mask, form] : shifted.components())
      if (!form.is_zero()) lambda.add_component(mask, form);
  }
  lambda.prune();
  return lambda;
}

MlConstruction construct(const MultilinearForm& alpha, double eps, std::uint64_t seed, const MlApproxOptions& options) {
  const std::size_t k = alpha.k();
  const std::uint32_t p = alpha.p();
  if (!(eps > 0)) throw InvalidArgument("approximation needs eps > 0");
  if (k == 0) throw InvalidArgument("approximation needs a form with at least one slot");
  MlConstruction c{.alpha = alpha};
  c.z_size = c.u_size = 1;
  c.m = 1;
  c.proven_m_cap = 1;
  c.coefficient = 1;
  c.l1_exact = 1;
  if (k == 1) {
    if (!alpha.is_zero()) throw HypothesisFailure("a nonzero linear form has bias 0");
    c.translates.push_back({});
    c.term_bound_log2 = 25 - 14 * std::log2(eps);
    return c;
  }
  const ProductSpace U(p, head_dims(alpha));
  const std::uint64_t u = U.size("multilinear phase approximation");
  const IndexArithmetic ix(p, U.total_dim());
  const std::vector<Point> A = last_slot_table(alpha, U);
  std::vector<std::uint64_t> zeros;
  for (std::uint64_t i = 0; i < u; ++i)
    if (is_zero_point(A[i])) zeros.push_back(i);
  const std::uint64_t z = zeros.size();
  const long double cd = static_cast<long double>(z) / static_cast<long double>(u);
  const long double e = eps;
  c.u_size = u;
  c.z_size = z;
  c.l1_exact = Rational(u) / Rational(z);
  c.term_bound_log2 = static_cast<double>(25 - 14 * std::log2(e) - 14 * std::log2(cd));
  const long double cap_ld = std::ceil(128.0L / (e * e * e * e * cd * cd * cd * cd));
  c.proven_m_cap = static_cast<std::size_t>(std::min<long double>(cap_ld, 1e15L));
  std::size_t m = std::max<std::size_t>(options.start_m, 1);
  if (u % z == 0) {
    const std::uint64_t q = u / z;
    m = static_cast<std::size_t>((m + q - 1) / q * q);
  }
  m = std::min(m, std::max<std::size_t>(c.proven_m_cap, 1));
  const long double bad_allowance = cd * cd * e * e * static_cast<long double>(u) / 8;

  // For k = 2 the zero set is a subspace; one translate per coset makes the
  // counts exactly uniform, so that candidate is tried before random draws.
  std::vector<std::uint64_t> coset_reps;
  if (k == 2) {
    std::vector<bool> covered(u, false);
    for (std::uint64_t x = 0; x < u; ++x) {
      if (covered[x]) continue;
      coset_reps.push_back(x);
      for (auto zi : zeros) covered[ix.add(x, zi)] = true;
    }
  }

  Rng rng(seed);
  const FunctionTable target = phase_table(alpha);
  double best_error = INFINITY;
  std::uint64_t best_bad = UINT64_MAX;
  std::vector<std::uint32_t> N(u);
  auto attempt = [&](const std::vector<std::uint64_t>& t) {
    ++c.draws;
    std::fill(N.begin(), N.end(), 0);
    for (auto ti : t)
      for (auto zi : zeros) ++N[ix.add(zi, ti)];
    std::uint64_t bad = 0;
    const long double expected = static_cast<long double>(z) * m;
    for (std::uint64_t i = 0; i < u; ++i) {
      const long double dev = std::fabs(static_cast<long double>(N[i]) * u - expected);
      if (4 * dev > e * expected) ++bad;
    }
    best_bad = std::min(best_bad, bad);
    if (static_cast<long double>(bad) > bad_allowance) return false;

    c.m = m;
    c.stage1_bad_points = bad;
    c.translates.clear();
    for (auto ti : t) c.translates.push_back(U.decode(ti));
    const long double ratio = 4.0L * m / (e * cd);
    c.proven_s_cap = static_cast<double>(2 * std::log(ratio) / std::log(static_cast<long double>(p)));
    const Rational step = rational_from_double(eps) * Rational(z) / (Rational(4 * m) * Rational(u));
    try {
      c.outer = external_approximation(alpha, step * step, rng.next(),
                                       static_cast<std::size_t>(std::max(0.0, std::floor(c.proven_s_cap))));
    } catch (const BudgetExceeded&) {
      return false;
    }
    c.s = c.outer->s;
    c.coefficient = Rational(u) / (Rational(power_u64(p, c.s)) * Rational(m) * Rational(z));
    c.grouped_l2_error = l2_distance(target, grouped_table(c));
    best_error = std::min(best_error, c.grouped_l2_error);
    return c.grouped_l2_error <= eps;
  };
  while (true) {
    ++c.levels_tried;
    if (!coset_reps.empty() && m % coset_reps.size() == 0) {
      std::vector<std::uint64_t> t;
      for (std::size_t r = 0; r < m / coset_reps.size(); ++r) t.insert(t.end(), coset_reps.begin(), coset_reps.end());
      if (attempt(t)) return c;
    }
    const long double work = static_cast<long double>(m) * static_cast<long double>(z);
    const std::size_t draws = static_cast<std::size_t>(
        std::clamp<long double>(std::floor(static_cast<long double>(1u << 24) / work), 16, options.max_draws_per_level));
    for (std::size_t d = 0; d < draws; ++d) {
      std::vector<std::uint64_t> t(m);
      for (auto& ti : t) ti = rng.below(u);
      if (attempt(t)) return c;
    }
    if (m >= c.proven_m_cap) break;
    m = std::min(2 * m, c.proven_m_cap);
  }
  throw BudgetExceeded("approximation search exhausted at m = " + std::to_string(m) + "; best L2 error " +
                       (std::isfinite(best_error) ? std::to_string(best_error) : std::string("none")) +
                       ", fewest stage-one deviations " + std::to_string(best_bad));
}

}  // namespace

FunctionTable phase_table(const MultilinearForm& alpha) {
  FunctionTable f{alpha.p(), alpha.dims(), {}};
  const ProductSpace U(alpha.p(), alpha.dims());
  const auto chi = character_table(alpha.p());
  f.values.resize(U.size("phase table"));
  U.for_each([&](std::uint64_t i, const PointTuple& x) { f.values[i] = chi[alpha.eval(x)]; });
  return f;
}

FunctionTable phase_table(const MultiaffineForm& lambda) {
  FunctionTable f{lambda.p(), lambda.dims(), {}};
  const ProductSpace U(lambda.p(), lambda.dims());
  const auto chi = character_table(lambda.p());
  f.values.resize(U.size("phase table"));
  U.for_each([&](std::uint64_t i, const PointTuple& x) { f.values[i] = chi[lambda.eval(x)]; });
  return f;
}

FunctionTable phase_table(const PolynomialFn& Q) {
  FunctionTable f{Q.p(), {Q.n()}, {}};
  const ProductSpace U(Q.p(), {Q.n()});
  const auto chi = character_table(Q.p());
  f.values.resize(U.size("phase table"));
  U.for_each([&](std::uint64_t i, const PointTuple& x) { f.values[i] = chi[Q.eval(x[0])]; });
  return f;
}

void refresh_metadata(PhaseCombination& c) {
  c.m = c.terms.size();
  c.l1 = 0;
  for (const auto& t : c.terms) c.l1 += std::abs(t.coefficient);
}

FunctionTable evaluate(const PhaseCombination& c, std::uint32_t p, const std::vector<std::size_t>& dims) {
  const ProductSpace U(p, dims);
  FunctionTable out{p, dims, std::vector<std::complex<double>>(U.size("combination table"), 0)};
  const auto chi = character_table(p);
  for (const auto& term : c.terms) {
    if (const auto* lambda = std::get_if<MultiaffineForm>(&term.source)) {
      if (lambda->p() != p || lambda->dims() != dims) throw InvalidArgument("combination term domain mismatch");
      U.for_each([&](std::uint64_t i, const PointTuple& x) { out.values[i] += term.coefficient * chi[lambda->eval(x)]; });
    } else {
      const auto& R = std::get<PolynomialFn>(term.source);
      if (R.p() != p || dims.size() != 1 || dims[0] != R.n()) throw InvalidArgument("combination term domain mismatch");
      U.for_each([&](std::uint64_t i, const PointTuple& x) { out.values[i] += term.coefficient * chi[R.eval(x[0])]; });
    }
  }
  return out;
}

double l2_distance(const FunctionTable& f, const FunctionTable& g) {
  if (f.p != g.p || f.dims != g.dims || f.values.size() != g.values.size())
    throw InvalidArgument("l2_distance: domain mismatch");
  long double sum = 0;
  for (std::size_t i = 0; i < f.values.size(); ++i) sum += std::norm(f.values[i] - g.values[i]);
  return static_cast<double>(std::sqrt(sum / static_cast<long double>(f.values.size())));
}

double l2_distance(const FunctionTable& f, const PhaseCombination& c) { return l2_distance(f, evaluate(c, f.p, f.dims)); }

MultilinearVariety kernel_variety(const MultilinearForm& alpha) {
  if (alpha.k() < 2) throw InvalidArgument("kernel variety needs a form with at least two slots");
  MultilinearVariety Z(alpha.p(), head_dims(alpha));
  const std::size_t last = alpha.dims().back();
  for (std::size_t j = 0; j < last; ++j)
    Z.add_constraint(full_mask(alpha.k() - 1), alpha.contract(alpha.k() - 1, unit_vector(last, j)));
  return Z;
}

MultiaffineForm translate_map_L(const MultilinearForm& alpha, const PointTuple& t) {
  const std::size_t k = alpha.k();
  if (k == 0 || t.size() + 1 != k) throw InvalidArgument("translate_map_L: expected k-1 translate points");
  MultiaffineForm out(alpha.p(), alpha.dims());
  PrimeField F(alpha.p());
  const SlotMask head = full_mask(k - 1);
  for (SlotMask I = 0; I < head; ++I) {
    std::vector<const Point*> fixed(k, nullptr);
    for (std::size_t s = 0; s + 1 < k; ++s)
      if (!(I >> s & 1)) fixed[s] = &t[s];
    MultilinearForm part = alpha.contract_many(fixed);
    if ((k - std::popcount(I)) % 2 == 1) part = negate(part);
    if (!part.is_zero()) out.add_component(I | (SlotMask{1} << (k - 1)), part);
  }
  return out;
}

FunctionTable grouped_table(const MlConstruction& c) {
  const MultilinearForm& alpha = c.alpha;
  const std::size_t k = alpha.k();
  const std::uint32_t p = alpha.p();
  if (k == 1) {
    FunctionTable f{p, alpha.dims(), {}};
    f.values.assign(ProductSpace(p, alpha.dims()).size(), 1.0);
    return f;
  }
  const ProductSpace U(p, head_dims(alpha));
  const std::uint64_t u = U.size();
  const std::size_t dk = alpha.dims().back();
  const ProductSpace last(p, {dk});
  const std::uint64_t nk = last.size();
  std::vector<Point> xk(nk);
  last.for_each([&](std::uint64_t i, const PointTuple& x) { xk[i] = x[0]; });
  const std::vector<Point> A = last_slot_table(alpha, U);
  std::vector<bool> in_V(u, true);
  if (c.outer)
    for (std::uint64_t i = 0; i < u; ++i)
      for (const auto& tau : c.outer->taus)
        if (dot(tau, A[i], p) != 0) {
          in_V[i] = false;
          break;
        }
  const IndexArithmetic ix(p, U.total_dim());
  const auto chi = character_table(p);
  FunctionTable g{p, alpha.dims(), std::vector<std::complex<double>>(u * nk, 0)};
  const double weight = static_cast<double>(u) / (static_cast<double>(c.m) * static_cast<double>(c.z_size));
  for (const auto& t : c.translates) {
    const std::uint64_t ti = U.encode(t);
    for (std::uint64_t xi = 0; xi < u; ++xi) {
      const std::uint64_t diff = ix.sub(xi, ti);
      if (!in_V[diff]) continue;
      const Point L = sub_points(A[xi], A[diff], p);  // L_t(x) = A(x) - A(x - t)
      for (std::uint64_t j = 0; j < nk; ++j) g.values[xi + u * j] += weight * chi[dot(L, xk[j], p)];
    }
  }
  return g;
}

MlApproxResult approximate_multilinear_phase(const MultilinearForm& alpha, double eps, std::uint64_t seed,
                                             const MlApproxOptions& options) {
  MlApproxResult out{{}, construct(alpha, eps, seed, options)};
  const MlConstruction& c = out.construction;
  const std::uint32_t p = alpha.p();
  const std::uint64_t per_translate = power_u64(p, c.s);
  const long double term_count = static_cast<long double>(c.m) * static_cast<long double>(per_translate);
  out.combination.m = static_cast<std::size_t>(term_count);
  out.combination.l1 = static_cast<double>(c.l1_exact);
  out.combination.l2_error = c.grouped_l2_error;
  if (!options.materialize_terms) return out;
  require_within_budget(term_count, "materializing approximation terms");
  const double coefficient = static_cast<double>(c.coefficient);
  const ProductSpace taus(p, {c.s});
  for (std::size_t i = 0; i < c.translates.size(); ++i)
    taus.for_each([&](std::uint64_t, const PointTuple& tau) {
      out.combination.terms.push_back({coefficient, term_form(c, i, tau[0])});
    });
  refresh_metadata(out.combination);
  const long double evaluations = term_count * ProductSpace(p, alpha.dims()).size_ld();
  if (evaluations <= static_cast<long double>(options.literal_check_limit)) {
    const double literal = l2_distance(phase_table(alpha), out.combination);
    out.construction.literal_l2_error = literal;
    out.combination.l2_error = literal;
  }
  return out;
}

PolyApproxResult approximate_polynomial_phase(const PolynomialFn& Q, double eps, std::uint64_t seed,
                                              const MlApproxOptions& options) {
  const std::uint32_t p = Q.p();
  const int degree = Q.degree();
  if (!(eps > 0)) throw InvalidArgument("approximation needs eps > 0");
  PolyApproxResult out{.construction = {.alpha = MultilinearForm(p, {})}, .q_prime = PolynomialFn(p, Q.n())};
  if (eps >= 1) {
    // the empty combination is within distance ||chi o Q|| = 1
    out.combination.l2_error = 1;
    return out;
  }
  if (degree < 1) throw InvalidArgument("approximation by lower-degree phases needs deg Q >= 1");
  const unsigned k = static_cast<unsigned>(degree);
  if (k >= p) throw InvalidArgument("polynomial phase approximation needs k < p");
  const std::size_t n = Q.n();
  const MultilinearForm L = derived_symmetric_form(Q, k);
  MlApproxOptions inner = options;
  inner.materialize_terms = false;
  out.construction = construct(L, eps, seed, inner);
  const MlConstruction& c = out.construction;
  out.l1_exact = c.l1_exact;

  // D(y) = |chi(L(y)) - g(y)|^2 on U^k, then average along diagonals
  const FunctionTable target = phase_table(L);
  const FunctionTable g = grouped_table(c);
  std::vector<double> D(target.values.size());
  for (std::size_t i = 0; i < D.size(); ++i) D[i] = std::norm(target.values[i] - g.values[i]);
  const ProductSpace G(p, {n});
  const std::uint64_t gn = G.size();
  const IndexArithmetic ix(p, n);
  auto diagonal_error = [&](const std::vector<std::uint64_t>& t) {
    long double sum = 0;
    for (std::uint64_t x = 0; x < gn; ++x) {
      std::uint64_t index = 0, place = 1;
      for (unsigned q = 0; q < k; ++q) {
        index += ix.add(t[q], x) * place;
        place *= gn;
      }
      sum += D[index];
    }
    return static_cast<double>(std::sqrt(sum / gn));
  };
  // Diagonals through (t_1, ..., t_k) and (0, t_2 - t_1, ...) coincide, so t_1 = 0.
  std::optional<std::vector<std::uint64_t>> chosen;
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int tries = 0; tries < 64 && !chosen; ++tries) {
    std::vector<std::uint64_t> t(k, 0);
    for (unsigned q = 1; q < k; ++q) t[q] = rng.below(gn);
    ++out.translates_searched;
    const double err = diagonal_error(t);
    if (err <= eps) {
      chosen = t;
      out.diagonal_error = err;
    }
  }
  if (!chosen) {
    out.exhaustive_search = true;
    const ProductSpace rest(p, std::vector<std::size_t>(k - 1, n));
    require_within_budget(rest.size_ld() * static_cast<long double>(gn), "diagonal translate search");
    double best = INFINITY;
    rest.for_each([&](std::uint64_t, const PointTuple& tt) {
      std::vector<std::uint64_t> t(k, 0);
      for (unsigned q = 1; q < k; ++q) t[q] = G.encode({tt[q - 1]});
      ++out.translates_searched;
      const double err = diagonal_error(t);
      if (err < best) {
        best = err;
        chosen = t;
      }
    });
    out.diagonal_error = best;
    if (best > eps) throw Error("no diagonal meets the averaged bound; the approximation itself must exceed eps");
  }
  for (unsigned q = 0; q < k; ++q) out.diagonal_translate.push_back(G.decode((*chosen)[q])[0]);
  const PointTuple& T = out.diagonal_translate;

  std::vector<SlotMask> proper;
  for (SlotMask S = 0; S < full_mask(k); ++S) proper.push_back(S);
  out.q_prime = affine_diagonal_expansion(L, T, proper);
  const PolynomialFn correction = Q.part_below(k) - out.q_prime;
  if (out.q_prime.degree() > static_cast<int>(k) - 1) throw Error("Q' has a degree-k term");

  std::map<PolynomialFn, std::uint64_t> merged;
  const std::size_t s = c.s;
  const ProductSpace taus(p, {s});
  const PointTuple T_head(T.begin(), T.end() - 1);
  for (const auto& ti : c.translates) {
    PolynomialFn P_i = multiaffine_diagonal(translate_map_L(L, ti), T);
    std::vector<PolynomialFn> B;
    if (c.outer) {
      PointTuple shift(k - 1);
      for (unsigned q = 0; q + 1 < k; ++q) shift[q] = sub_points(T_head[q], ti[q], p);
      for (const auto& tau : c.outer->taus) B.push_back(affine_diagonal_expansion(L.contract(k - 1, tau), shift));
    }
    taus.for_each([&](std::uint64_t, const PointTuple& tau) {
      PolynomialFn R = P_i + correction;
      for (std::size_t j = 0; j < B.size(); ++j) R = R + scale(B[j], tau[0][j]);
      if (R.degree() > static_cast<int>(k) - 1) throw Error("a correction polynomial has degree k");
      ++merged[R];
      ++out.raw_terms;
    });
  }
  const double coefficient = static_cast<double>(c.coefficient);
  for (const auto& [R, count] : merged) out.combination.terms.push_back({coefficient * static_cast<double>(count), R});
  refresh_metadata(out.combination);
  out.combination.l2_error = l2_distance(phase_table(Q), out.combination);
  return out;
}

double gowers_norm(const FunctionTable& f, unsigned k) {
  if (f.dims.size() != 1) throw InvalidArgument("gowers_norm needs a function on a single space F_p^n");
  const std::size_t n = f.dims[0];
  const std::uint32_t p = f.p;
  const std::uint64_t N = f.values.size();
  require_within_budget(power_ld(p, n * (k + 1)), "gowers norm");
  const IndexArithmetic ix(p, n);
  std::vector<std::uint64_t> a(k, 0);
  std::vector<std::uint64_t> pts(std::size_t{1} << k);
  std::complex<long double> total = 0;
  const std::uint64_t tuples = power_u64(N, k);
  for (std::uint64_t x = 0; x < N; ++x)
    for (std::uint64_t code = 0; code < tuples; ++code) {
      std::uint64_t r = code;
      for (unsigned i = 0; i < k; ++i) {
        a[i] = r % N;
        r /= N;
      }
      pts[0] = x;
      std::complex<long double> prod(f.values[x].real(), f.values[x].imag());
      for (std::size_t w = 1; w < pts.size(); ++w) {
        const unsigned bit = static_cast<unsigned>(std::countr_zero(w));
        pts[w] = ix.add(pts[w & (w - 1)], a[bit]);
        std::complex<long double> v(f.values[pts[w]].real(), f.values[pts[w]].imag());
        if (std::popcount(w) % 2 == 1) v = std::conj(v);
        prod *= v;
      }
      total += prod;
    }
  const long double mean = total.real() / (static_cast<long double>(N) * static_cast<long double>(tuples));
  return static_cast<double>(std::pow(std::max<long double>(mean, 0), 1.0L / static_cast<long double>(std::size_t{1} << k)));
}

std::optional<Rational> gowers_power_exact(const PolynomialFn& Q, unsigned k) {
  const std::uint32_t p = Q.p();
  const std::size_t n = Q.n();
  require_within_budget(power_ld(p, n * (k + 1)), "gowers norm");
  const ProductSpace G(p, {n});
  const std::uint64_t N = G.size();
  std::vector<Point> pt(N);
  std::vector<Residue> qv(N);
  G.for_each([&](std::uint64_t i, const PointTuple& x) {
    pt[i] = x[0];
    qv[i] = Q.eval(x[0]);
  });
  const IndexArithmetic ix(p, n);
  std::vector<std::uint64_t> hist(p, 0);
  std::vector<std::uint64_t> a(k), pts(std::size_t{1} << k);
  const std::uint64_t tuples = power_u64(N, k);
  for (std::uint64_t x = 0; x < N; ++x)
    for (std::uint64_t code = 0; code < tuples; ++code) {
      std::uint64_t r = code;
      for (unsigned i = 0; i < k; ++i) {
        a[i] = r % N;
        r /= N;
      }
      pts[0] = x;
      std::int64_t v = ((k % 2) ? -1 : 1) * static_cast<std::int64_t>(qv[x]);
      for (std::size_t w = 1; w < pts.size(); ++w) {
        pts[w] = ix.add(pts[w & (w - 1)], a[static_cast<unsigned>(std::countr_zero(w))]);
        const bool plus = (k - std::popcount(w)) % 2 == 0;
        v += plus ? qv[pts[w]] : -static_cast<std::int64_t>(qv[pts[w]]);
      }
      ++hist[PrimeField(p).reduce(v)];
    }
  for (std::uint32_t v = 2; v < p; ++v)
    if (hist[v] != hist[1]) return std::nullopt;
  const std::uint64_t total = N * tuples;
  return Rational(static_cast<std::int64_t>(hist[0]) - static_cast<std::int64_t>(hist[1]), static_cast<std::int64_t>(total));
}

std::complex<double> phase_correlation(const PolynomialFn& Q, const PolynomialFn& P) {
  if (Q.p() != P.p() || Q.n() != P.n()) throw InvalidArgument("phase_correlation: shape mismatch");
  const std::uint32_t p = Q.p();
  const ProductSpace G(p, {Q.n()});
  std::vector<std::uint64_t> hist(p, 0);
  const PolynomialFn D = Q - P;
  G.for_each([&](std::uint64_t, const PointTuple& x) { ++hist[D.eval(x[0])]; }, "phase correlation");
  const auto chi = character_table(p);
  std::complex<double> sum = 0;
  for (std::uint32_t v = 0; v < p; ++v) sum += static_cast<double>(hist[v]) * chi[v];
  return sum / static_cast<double>(G.size());
}

GowersInverseResult gowers_inverse_polynomial(const PolynomialFn& Q, unsigned k, std::uint64_t seed,
                                              const MlApproxOptions& options) {
  const std::uint32_t p = Q.p();
  if (k >= p) throw InvalidArgument("gowers inverse needs k < p");
  GowersInverseResult out{.P = PolynomialFn(p, Q.n())};
  out.gowers_norm = gowers_norm(phase_table(Q), k);
  if (Q.degree() < static_cast<int>(k)) {
    // Q itself has degree at most k - 1
    out.P = Q;
    out.correlation = 1;
    out.m = 1;
    out.l1 = 1;
    out.meets_half_over_m = out.meets_half_over_l1 = true;
    return out;
  }
  if (Q.degree() != static_cast<int>(k)) throw InvalidArgument("gowers inverse: deg Q exceeds k");
  if (!(out.gowers_norm > 0)) throw HypothesisFailure("||chi o Q||_{U^k} vanishes");
  const PolyApproxResult approx = approximate_polynomial_phase(Q, 0.5, seed, options);
  out.m = approx.combination.m;
  out.l1 = approx.combination.l1;
  out.approximation_error = approx.combination.l2_error;
  double best = -1;
  for (const auto& term : approx.combination.terms) {
    const auto& R = std::get<PolynomialFn>(term.source);
    const double corr = std::abs(phase_correlation(Q, R));
    if (corr > best) {
      best = corr;
      out.P = R;
    }
  }
  out.correlation = best;
  out.meets_half_over_m = best >= 1.0 / (2.0 * static_cast<double>(out.m)) - 1e-12;
  out.meets_half_over_l1 = best >= 1.0 / (2.0 * out.l1) - 1e-12;
  if (!out.meets_half_over_l1) throw Error("averaging bound violated: correlation below 1/(2 l1)");
  return out;
}

}  // namespace hoff
