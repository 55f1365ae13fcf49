#include "hoff/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <sstream>

#include "hoff/budget.hpp"
#include "hoff/formcore.hpp"
#include "hoff/linalg.hpp"

namespace hoff {

using ffpoly::PolyFp;
using ffpoly::SpaceIndex;
using ffpoly::SpaceKind;

namespace {

std::vector<Point> space_points(std::uint32_t p, std::size_t n) {
  const ProductSpace G(p, {n});
  std::vector<Point> pts(G.size("G_n"));
  G.for_each([&](std::uint64_t i, const PointTuple& x) { pts[i] = x[0]; });
  return pts;
}

std::vector<PolyFp> multipliers(std::uint32_t p, std::size_t m, MultiplierSet set) {
  return ffpoly::enumerate_space({p, m, set == MultiplierSet::Monic ? SpaceKind::A : SpaceKind::G});
}

// Histogram of u - v over all pairs, from the histogram h of values.
std::vector<std::uint64_t> difference_histogram(const std::vector<std::uint64_t>& h, std::uint32_t p) {
  std::vector<std::uint64_t> out(p, 0);
  for (std::uint32_t u = 0; u < p; ++u)
    for (std::uint32_t v = 0; v < p; ++v) out[(u + p - v) % p] += h[u] * h[v];
  return out;
}

std::uint64_t factorial(std::size_t k) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= i;
  return f;
}

// Product of multiplicity! over the distinct values of a tuple.
std::uint64_t multiplicity_product(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    out *= factorial(j - i);
    i = j;
  }
  return out;
}

std::uint64_t sum_of_squares(const std::vector<std::size_t>& v) {
  std::uint64_t s = 0;
  for (auto x : v) s += static_cast<std::uint64_t>(x) * x;
  return s;
}

// x -> x t^shift as a polynomial.
PolyFp times_t_power(const PolyFp& w, std::size_t shift) { return ffpoly::shift(w, shift); }

}  // namespace

const std::vector<int>& mobius_table(std::uint32_t p, std::size_t n) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, std::size_t>, std::vector<int>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({p, n});
  if (it != cache.end()) return it->second;
  const SpaceIndex G{p, n, SpaceKind::G};
  std::vector<int> table;
  table.reserve(ffpoly::space_size(G));
  ffpoly::for_each_in_space(G, [&](const PolyFp& f) { table.push_back(ffpoly::mobius(f)); });
  return cache.emplace(std::make_pair(p, n), std::move(table)).first->second;
}

std::int64_t mobius_sum(std::uint32_t p, std::size_t n, bool monic_only) {
  std::int64_t sum = 0;
  if (monic_only) {
    ffpoly::for_each_in_space({p, n, SpaceKind::A}, [&](const PolyFp& f) { sum += ffpoly::mobius(f); });
  } else {
    for (int mu : mobius_table(p, n)) sum += mu;
  }
  return sum;
}

CorrelationReport mobius_correlation(const PolynomialFn& Q, bool timing, std::uint64_t shuffle_seed) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint32_t p = Q.p();
  const std::size_t n = Q.n();
  CorrelationReport r;
  r.p = p;
  r.n = n;
  r.k = Q.degree();
  r.q_description = Q.to_string();
  const auto& mu = mobius_table(p, n);
  const auto pts = space_points(p, n);
  const auto chi = character_table(p);
  const double scale = 1.0 / static_cast<double>(pts.size());
  std::vector<Residue> values(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) values[i] = Q.eval(pts[i]);
  std::complex<double> S = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (mu[i] != 0) S += static_cast<double>(mu[i]) * chi[values[i]];
  r.S = S * scale;
  r.abs_S = std::abs(r.S);
  // nonzero constants sit at positions 1..p-1 (when n >= 1)
  if (n >= 1)
    for (std::uint32_t c = 1; c < p; ++c) r.constants += static_cast<double>(mu[c]) * chi[values[c]] * scale;

  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(shuffle_seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::complex<double> T = 0;
  for (auto i : order)
    if (mu[i] != 0) T += static_cast<double>(mu[i]) * chi[values[i]];
  r.permuted_deviation = std::abs(T * scale - r.S);
  if (timing) r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::complex<double> PhaseAverage::value() const {
  if (total == 0) return 0;
  const auto chi = character_table(static_cast<std::uint32_t>(counts.size()));
  std::complex<double> s = 0;
  for (std::size_t v = 0; v < counts.size(); ++v) s += static_cast<double>(counts[v]) * chi[v];
  return s / static_cast<double>(total);
}

std::string to_string(MultiplierSet s) { return s == MultiplierSet::Monic ? "A_m" : "G_m"; }

DichotomyReport vaughan_dichotomy_check(const PolynomialFn& Q, double c, std::size_t m0) {
  const std::uint32_t p = Q.p();
  const std::size_t n = Q.n();
  if (n == 0) throw InvalidArgument("dichotomy check needs n >= 1");
  DichotomyReport r;
  r.p = p;
  r.n = n;
  r.m0 = m0;
  r.c = c;
  r.measured = mobius_correlation(Q).abs_S;
  if (r.measured < c)
    throw HypothesisFailure("measured correlation " + std::to_string(r.measured) + " is below c = " + std::to_string(c));
  const unsigned k = static_cast<unsigned>(std::max(Q.degree(), 1));
  if (k >= p) throw InvalidArgument("dichotomy check needs deg Q < p");
  r.k = k;
  const double nd = static_cast<double>(n);
  r.first_threshold = c * c / (16 * std::pow(nd, 5));
  r.second_threshold = std::pow(c, 4) / (256 * std::pow(nd, 10));

  for (MultiplierSet set : {MultiplierSet::Monic, MultiplierSet::All}) {
    for (std::size_t m = (set == MultiplierSet::Monic ? 0 : 1); m < n; ++m) {
      const auto as = multipliers(p, m, set);
      const auto xs = space_points(p, n - m);
      require_within_budget(static_cast<long double>(as.size()) * as.size() * xs.size(), "dichotomy averages");
      std::vector<std::vector<Residue>> vals(as.size(), std::vector<Residue>(xs.size()));
      for (std::size_t ai = 0; ai < as.size(); ++ai)
        for (std::size_t xi = 0; xi < xs.size(); ++xi)
          vals[ai][xi] = Q.eval((as[ai] * PolyFp(p, xs[xi])).coordinates(n));
      DichotomyFirstCase row;
      row.m = m;
      row.set = set;
      row.square_average.counts.assign(p, 0);
      row.fourfold.counts.assign(p, 0);
      for (std::size_t ai = 0; ai < as.size(); ++ai) {
        std::vector<std::uint64_t> h(p, 0);
        for (auto v : vals[ai]) ++h[v];
        const auto dh = difference_histogram(h, p);
        for (std::uint32_t v = 0; v < p; ++v) row.square_average.counts[v] += dh[v];
        for (std::size_t bi = 0; bi < as.size(); ++bi) {
          std::vector<std::uint64_t> hd(p, 0);
          for (std::size_t xi = 0; xi < xs.size(); ++xi) ++hd[(vals[ai][xi] + p - vals[bi][xi]) % p];
          const auto d4 = difference_histogram(hd, p);
          for (std::uint32_t v = 0; v < p; ++v) row.fourfold.counts[v] += d4[v];
        }
      }
      const std::uint64_t N = xs.size(), A = as.size();
      row.square_average.total = A * N * N;
      row.fourfold.total = A * A * N * N;
      row.first_range = 9 * m <= n;
      row.second_range = 18 * m >= n && 18 * m <= 17 * n;
      row.first_holds = row.square_average.value().real() >= r.first_threshold;
      row.second_holds = row.fourfold.value().real() >= r.second_threshold;
      r.vaughan_rows.push_back(std::move(row));
    }
  }

  const MultilinearForm L = derived_symmetric_form(Q, k, false);
  r.bias_LQ = bias(L);
  r.first_disjunct_positive = r.bias_LQ.numerator() > 0;
  for (std::size_t m = 1; m < n; ++m) {
    ComposedBiasRow row;
    row.m = m;
    row.in_range = m >= m0 && 18 * m <= 17 * n;
    const auto as = multipliers(p, m, MultiplierSet::All);
    const ProductSpace tuples(p, std::vector<std::size_t>(k, m));
    row.tuples = tuples.size("multiplier tuples");
    Rational sum = 0;
    tuples.for_each([&](std::uint64_t, const PointTuple& a) {
      std::vector<PolyFp> polys;
      for (const auto& ai : a) polys.emplace_back(p, ai);
      const ExactFraction b = bias(composed_multiplication_form(L, polys, m, n));
      ++row.bias_histogram[b];
      sum += b.to_rational();
    });
    row.mean_bias = sum / Rational(row.tuples);
    if (row.in_range && row.mean_bias > 0) r.second_disjunct_positive = true;
    r.composed_rows.push_back(std::move(row));
  }
  return r;
}

ChevalleyWarningReport chevalley_warning_search(const MultilinearVariety& W, std::size_t d, std::size_t g) {
  const std::uint32_t p = W.p();
  const std::size_t k = W.k();
  if (k == 0) throw InvalidArgument("Chevalley-Warning search needs k >= 1");
  const std::size_t m = W.ambient()[0];
  for (auto dim : W.ambient())
    if (dim != m) throw InvalidArgument("Chevalley-Warning search needs W on G_m^k");
  if (d == 0 || g == 0 || g * d > m) throw InvalidArgument("Chevalley-Warning search needs 1 <= g d <= m");
  ChevalleyWarningReport r;
  r.d = d;
  r.g = g;
  r.k = k;

  // one equation per constraint and per choice of exponents on its slots
  struct Equation {
    const MultilinearForm* form;
    std::vector<std::size_t> exponents;
  };
  std::vector<Equation> equations;
  for (const auto& con : W.constraints()) {
    const auto slots = mask_slots(con.subset);
    const ProductSpace choices(static_cast<std::uint32_t>(g), std::vector<std::size_t>(slots.size(), 1));
    const std::uint64_t count = power_u64(g, slots.size());
    for (std::uint64_t code = 0; code < count; ++code) {
      std::vector<std::size_t> e(slots.size());
      std::uint64_t rest = code;
      for (auto& ei : e) {
        ei = rest % g;
        rest /= g;
      }
      equations.push_back({&con.form, e});
    }
    r.degree_sum += slots.size() * count;
  }
  r.equations = equations.size();
  r.degree_condition = d > r.degree_sum;
  r.dimension_condition = d > k * r.equations;

  const ProductSpace Gd(p, {d});
  Gd.for_each(
      [&](std::uint64_t index, const PointTuple& wt) {
        const PolyFp w(p, wt[0]);
        std::vector<Point> shifted(g);
        for (std::size_t i = 0; i < g; ++i) shifted[i] = times_t_power(w, i * d).coordinates(m);
        for (const auto& eq : equations) {
          PointTuple args;
          for (auto e : eq.exponents) args.push_back(shifted[e]);
          if (eq.form->eval(args) != 0) return;
        }
        ++r.solutions;
        if (index != 0 && !r.w) r.w = w;
      },
      "Chevalley-Warning search");
  r.divisible = r.solutions % p == 0;
  if (r.degree_condition && !r.divisible)
    throw Error("solution count " + std::to_string(r.solutions) + " is not divisible by p despite d > degree sum");
  return r;
}

SequencePlan sequence_plan(const std::vector<std::size_t>& j, std::size_t g, std::size_t s, std::size_t d,
                           std::uint32_t p) {
  const std::size_t k = j.size();
  if (k == 0) throw InvalidArgument("sequence plan needs a nonempty tuple");
  if (g == 0) throw InvalidArgument("sequence plan needs g >= 1");
  if (s < g || k > s - g) throw InvalidArgument("sequence plan needs k <= s - g");
  for (std::size_t i = 0; i < k; ++i) {
    if (j[i] >= s) throw InvalidArgument("sequence plan entries must lie in [0, s-1]");
    if (i > 0 && j[i] < j[i - 1]) throw InvalidArgument("sequence plan needs a nondecreasing tuple");
  }
  SequencePlan plan;
  plan.j = j;
  plan.g = g;
  plan.s = s;
  plan.d = d;
  plan.l.resize(k);
  plan.a.resize(k);
  plan.l[0] = std::min(j[0], g - 1);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (j[i + 1] > j[i] + 1)
      plan.l[i + 1] = std::min(j[i + 1] - (j[i] - plan.l[i]) - 1, g - 1);
    else
      plan.l[i + 1] = plan.l[i];
  }
  for (std::size_t i = 0; i < k; ++i) plan.a[i] = j[i] - plan.l[i];

  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (plan.l[i] > plan.l[i + 1]) throw Error("sequence plan: l is not nondecreasing");
    if (plan.a[i] > plan.a[i + 1]) throw Error("sequence plan: a is not nondecreasing");
  }
  for (std::size_t i = 0; i < k; ++i)
    if (plan.a[i] > s - g) throw Error("sequence plan: a exceeds s - g");
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y)
      if (plan.l[x] > plan.l[y] && !(plan.a[x] > plan.a[y])) throw Error("sequence plan: l order not reflected in a");

  plan.multiplicity = multiplicity_product(j);
  plan.stabilizer_of_l = multiplicity_product(plan.l);
  if (p > 0 && (plan.multiplicity % p == 0 || plan.stabilizer_of_l % p == 0))
    throw InvalidArgument("sequence plan: multiplicities vanish mod p (needs p > k)");
  return plan;
}

bool precedes(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
  return sum_of_squares(x) < sum_of_squares(y);
}

CascadeReport bias_cascade_report(const PolynomialFn& Q, std::size_t d, std::size_t m,
                                  const std::optional<MultilinearVariety>& W_in,
                                  const std::optional<PolyFp>& w_in) {
  const std::uint32_t p = Q.p();
  const std::size_t n = Q.n();
  const int degree = Q.degree();
  if (degree < 1 || static_cast<std::uint32_t>(degree) >= p) throw InvalidArgument("cascade needs 1 <= deg Q < p");
  const std::size_t k = static_cast<std::size_t>(degree);
  if (d == 0 || d > m || m >= n) throw InvalidArgument("cascade needs 1 <= d <= m < n");
  CascadeReport r;
  r.p = p;
  r.n = n;
  r.m = m;
  r.d = d;
  r.k = k;
  r.g = m / d;
  r.s = r.g - 1 + (n - m) / d;
  const std::size_t g = r.g, s = r.s;
  if (s < g || k > s - g)
    throw InvalidArgument("cascade dimension precondition: k <= s - g fails (g = " + std::to_string(g) +
                          ", s = " + std::to_string(s) + ")");

  const MultilinearForm L = derived_symmetric_form(Q, static_cast<unsigned>(k));
  const MultilinearVariety W = W_in ? *W_in : MultilinearVariety(p, std::vector<std::size_t>(k, m));
  r.search = chevalley_warning_search(W, d, g);
  if (w_in) {
    r.w = *w_in;
    if (r.w.is_zero() || r.w.degree() >= static_cast<int>(d)) throw InvalidArgument("cascade needs nonzero w in G_d");
  } else if (r.search.w) {
    r.w = *r.search.w;
  } else {
    throw Error("no nonzero w satisfies the pulled-back constraints");
  }
  const PolyFp& w = r.w;
  r.block_dimension_condition =
      static_cast<double>(d) >
      static_cast<double>(k * W.codimension_bound()) * std::pow(static_cast<double>(n) / static_cast<double>(d), k);

  auto wt = [&](std::size_t e) { return times_t_power(w, e * d); };
  // c: the smallest bias among psi at the grid points
  {
    bool first = true;
    for (std::uint64_t code = 0; code < power_u64(g, k); ++code) {
      std::vector<PolyFp> a;
      std::uint64_t rest = code;
      for (std::size_t i = 0; i < k; ++i) {
        a.push_back(wt(rest % g));
        rest /= g;
      }
      const ExactFraction b = bias(composed_multiplication_form(L, a, m, n));
      if (first || b < r.c) r.c = b;
      first = false;
    }
  }

  // L_v for every v in [0, s-1]^k
  std::vector<Matrix> maps(s);
  for (std::size_t e = 0; e < s; ++e) maps[e] = multiplication_map(wt(e), d, n);
  auto form_of = [&](const std::vector<std::size_t>& v) {
    std::vector<Matrix> mv;
    for (auto e : v) mv.push_back(maps[e]);
    return pullback(L, mv);
  };
  std::vector<std::vector<std::size_t>> order;
  for (std::size_t c = 0; c < s; ++c) order.push_back(std::vector<std::size_t>(k, c));
  std::vector<std::vector<std::size_t>> rest;
  for (std::uint64_t code = 0; code < power_u64(s, k); ++code) {
    std::vector<std::size_t> v(k);
    std::uint64_t x = code;
    for (std::size_t i = k; i-- > 0;) {
      v[i] = x % s;
      x /= s;
    }
    if (std::all_of(v.begin(), v.end(), [&](std::size_t e) { return e == v[0]; })) continue;
    rest.push_back(v);
  }
  std::stable_sort(rest.begin(), rest.end(), [](const auto& x, const auto& y) {
    const auto sx = sum_of_squares(x), sy = sum_of_squares(y);
    return sx != sy ? sx < sy : x < y;
  });
  order.insert(order.end(), rest.begin(), rest.end());
  std::map<std::vector<std::size_t>, std::size_t> row_of;
  for (std::size_t i = 0; i < order.size(); ++i) row_of[order[i]] = i;

  std::vector<MultilinearForm> forms;
  const auto perms = all_permutations(k);
  r.first_rows_at_least_c = true;
  r.all_identities_hold = true;
  r.bounds_consistent = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& v = order[i];
    forms.push_back(form_of(v));
    CascadeRow row;
    row.v = v;
    row.bias = bias(forms.back());
    if (i < s) {
      row.lower_bound = r.c;
      if (row.bias < r.c) r.first_rows_at_least_c = false;
    } else if (!std::is_sorted(v.begin(), v.end())) {
      row.sorted = false;
      auto sv = v;
      std::sort(sv.begin(), sv.end());
      const std::size_t source = row_of.at(sv);
      row.permutation_of = source;
      row.lower_bound = r.rows[source].lower_bound;
      bool found = false;
      for (const auto& tau : perms)
        if (source < i && permute_slots(forms[source], tau) == forms.back()) {
          found = true;
          break;
        }
      row.identity_holds = found;
      row.identity_with_multiplicity = found;
      if (!found) r.all_identities_hold = false;
    } else {
      const SequencePlan plan = sequence_plan(v, g, s, d, p);
      std::vector<PolyFp> lw;
      for (auto e : plan.l) lw.push_back(wt(e));
      const MultilinearForm psi = composed_multiplication_form(L, lw, m, n);
      std::vector<Matrix> bases(k);
      for (std::size_t iota = 0; iota < k; ++iota)
        for (std::size_t q = 0; q < d; ++q) bases[iota].push_back(unit_vector(n - m, plan.a[iota] * d + q));
      const MultilinearForm H = restrict_form(psi, bases);
      row.h_bias = bias(H);
      row.h_bias_at_least_c = !(row.h_bias < r.c);
      MultilinearForm rhs = H;
      ExactFraction chain = r.c;
      bool sources_ok = true;
      for (const auto& sigma : perms) {
        bool fixes = true;
        for (std::size_t iota = 0; iota < k; ++iota)
          if (plan.l[sigma[iota]] != plan.l[iota]) fixes = false;
        if (fixes) continue;
        std::vector<std::size_t> u(k);
        for (std::size_t iota = 0; iota < k; ++iota) u[iota] = plan.l[iota] + plan.a[sigma[iota]];
        const std::size_t source = row_of.at(u);
        if (source >= i || !precedes(u, v)) sources_ok = false;
        row.earlier.push_back(source);
        if (source < forms.size()) {
          rhs = add(rhs, negate(permute_slots(forms[source], sigma)));
          chain = chain * r.rows[source].lower_bound;
        }
      }
      row.identity_holds = sources_ok && scale(forms.back(), static_cast<Residue>(plan.stabilizer_of_l % p)) == rhs;
      row.identity_with_multiplicity =
          sources_ok && scale(forms.back(), static_cast<Residue>(plan.multiplicity % p)) == rhs;
      row.lower_bound = chain;
      row.plan = plan;
      if (!row.identity_holds || !row.h_bias_at_least_c) r.all_identities_hold = false;
    }
    if (row.bias < row.lower_bound) r.bounds_consistent = false;
    r.rows.push_back(std::move(row));
  }

  // base-w split of G_n
  const SpaceIndex Gn{p, n, SpaceKind::G};
  r.reconstruction_exact = true;
  r.hom_identity_exact = true;
  const PolynomialFn Qk = Q.homogeneous_part(static_cast<unsigned>(k));
  ffpoly::for_each_in_space(Gn, [&](const PolyFp& x) {
    if (ffpoly::base_w_decompose(x, w, d, s).reconstruct() != x) r.reconstruction_exact = false;
    const Point xc = x.coordinates(n);
    if (Qk.eval(xc) != L.eval(PointTuple(k, xc))) r.hom_identity_exact = false;
  });
  Matrix main_map, res_map, over_map;
  for (std::size_t q = 0; q < n; ++q) {
    const auto split = ffpoly::base_w_decompose(PolyFp::monomial(p, q), w, d, s);
    main_map.push_back(split.main_part().coordinates(n));
    res_map.push_back(split.res.coordinates(n));
    over_map.push_back(split.over.coordinates(n));
  }
  r.rank_res = rank_mod_p(res_map, p);
  r.rank_over = rank_mod_p(over_map, p);
  r.bias_main = bias(pullback(L, std::vector<Matrix>(k, main_map)));
  r.main_lower_bound = ExactFraction::one(p);
  for (const auto& row : r.rows) r.main_lower_bound = r.main_lower_bound * row.bias;
  if (r.bias_main < r.main_lower_bound) r.bounds_consistent = false;
  r.bias_LQ = bias(L);
  std::uint32_t three_k = 1;
  for (std::size_t i = 0; i < k; ++i) three_k *= 3;
  r.removal_inequality =
      !(r.bias_LQ < ExactFraction::inverse_power(p, static_cast<std::uint32_t>(2 * three_k * d)) * r.bias_main);
  const std::size_t rmax = std::max(r.rank_res, r.rank_over);
  r.removal_inequality_ranks =
      !(r.bias_LQ < ExactFraction::inverse_power(p, static_cast<std::uint32_t>(rmax * (three_k - 1))) * r.bias_main);
  return r;
}

DegreeLoweringReport degree_lowering(const PolynomialFn& Q, unsigned k, double c, std::uint64_t seed,
                                     const MlApproxOptions& options) {
  const std::uint32_t p = Q.p();
  if (k == 0 || k >= p) throw InvalidArgument("degree lowering needs 1 <= k < p");
  DegreeLoweringReport r;
  const CorrelationReport base = mobius_correlation(Q);
  r.measured_c = base.abs_S;
  if (Q.degree() < static_cast<int>(k)) {
    // already of degree at most k - 1
    r.Q_tilde = Q;
    r.correlation = base.abs_S;
    r.recomputed = mobius_correlation(Q, false, seed + 1).abs_S;
    r.bias_LQ = ExactFraction::one(p);
    r.terms = 1;
    r.l1 = 1;
    r.averaging_bound = base.abs_S;
    r.meets_averaging_bound = true;
    return r;
  }
  if (Q.degree() != static_cast<int>(k)) throw InvalidArgument("degree lowering: deg Q exceeds k");
  r.bias_LQ = bias(derived_symmetric_form(Q, k));
  if (r.bias_LQ.to_double() < c) throw HypothesisFailure("bias L_Q = " + r.bias_LQ.to_string() + " is below c");
  if (r.measured_c < c) throw HypothesisFailure("measured correlation " + std::to_string(r.measured_c) + " is below c");
  r.eps = c * c / 4;
  const PolyApproxResult approx = approximate_polynomial_phase(Q, r.eps, seed, options);
  r.terms = approx.combination.terms.size();
  r.l1 = approx.combination.l1;
  double best = -1;
  for (const auto& term : approx.combination.terms) {
    const auto& R = std::get<PolynomialFn>(term.source);
    const double corr = mobius_correlation(R).abs_S;
    if (corr > best) {
      best = corr;
      r.Q_tilde = R;
    }
  }
  if (best < 0) throw Error("approximation produced no terms");
  r.correlation = best;
  r.recomputed = mobius_correlation(r.Q_tilde, false, seed + 1).abs_S;
  r.averaging_bound = std::max(0.0, (r.measured_c - approx.combination.l2_error) / r.l1);
  r.meets_averaging_bound = r.correlation >= r.averaging_bound - 1e-12;
  return r;
}

PolynomialFn random_degree_k_polynomial(std::uint32_t p, std::size_t n, unsigned k, Rng& rng) {
  if (n == 0 && k > 0) throw InvalidArgument("no degree-k polynomial in zero variables");
  while (true) {
    PolynomialFn Q = PolynomialFn::random(p, n, k, rng, true);
    if (Q.degree() == static_cast<int>(k)) return Q;
  }
}

std::string DecayTable::to_csv() const {
  std::ostringstream out;
  out << "n,max_abs_S,mean_abs_S,slope\n";
  char buf[64];
  std::string slope_cell;
  if (slope) {
    std::snprintf(buf, sizeof buf, "%.17g", *slope);
    slope_cell = buf;
  }
  for (const auto& row : rows) {
    out << row.n << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.max_abs_S);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.mean_abs_S);
    out << buf << ',' << slope_cell << '\n';
  }
  return out.str();
}

DecayTable decay_experiment(std::uint32_t p, unsigned k, const std::vector<std::size_t>& n_values,
                            std::size_t samples, std::uint64_t seed) {
  if (k == 0 || k >= p) throw InvalidArgument("decay experiment needs 1 <= k < p");
  DecayTable table;
  table.p = p;
  table.k = k;
  Rng rng(seed);
  for (auto n : n_values) {
    std::vector<PolynomialFn> polys;
    for (const auto& e : monomials_of_degree(p, n, k)) {
      PolynomialFn Q(p, n);
      Q.add_term(e, 1);
      polys.push_back(std::move(Q));
    }
    for (std::size_t i = 0; i < samples; ++i) polys.push_back(random_degree_k_polynomial(p, n, k, rng));
    DecayRow row;
    row.n = n;
    long double sum = 0;
    for (const auto& Q : polys) {
      const double a = mobius_correlation(Q).abs_S;
      row.max_abs_S = std::max(row.max_abs_S, a);
      sum += a;
    }
    row.evaluated = polys.size();
    row.mean_abs_S = polys.empty() ? 0 : static_cast<double>(sum / polys.size());
    table.rows.push_back(row);
  }
  table.monotone = true;
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    if (table.rows[i].max_abs_S > table.rows[i - 1].max_abs_S) table.monotone = false;

  std::vector<std::pair<double, double>> pts;
  for (const auto& row : table.rows)
    if (row.max_abs_S > 0) pts.emplace_back(static_cast<double>(row.n), std::log(row.max_abs_S) / std::log(double(p)));
  bool distinct = false;
  for (const auto& pt : pts)
    if (pt.first != pts.front().first) distinct = true;
  if (pts.size() >= 2 && distinct) {
    double mx = 0, my = 0;
    for (const auto& [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= pts.size();
    my /= pts.size();
    double sxy = 0, sxx = 0;
    for (const auto& [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    table.slope = -sxy / sxx;
  }
  return table;
}

}  // namespace hoff
