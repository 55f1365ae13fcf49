#include "hoff/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "hoff/errors.hpp"
#include "hoff/exact_fraction.hpp"
#include "hoff/ffpoly.hpp"
#include "hoff/formcore.hpp"
#include "hoff/linalg.hpp"
#include "hoff/multiaffine_form.hpp"
#include "hoff/multilinear_form.hpp"
#include "hoff/phaseapprox.hpp"
#include "hoff/pipeline.hpp"
#include "hoff/polynomial_fn.hpp"
#include "hoff/rng.hpp"
#include "hoff/space.hpp"
#include "hoff/variety.hpp"

namespace hoff {
namespace {

using ffpoly::PolyFp;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;
  std::size_t failures = 0;
  std::string first_failure;

  void fail(const std::string& what) {
    passed = false;
    if (failures++ == 0) first_failure = what;
  }
};

std::string finish(Outcome& o) {
  std::string d = o.detail.str();
  if (o.failures) d += "; " + std::to_string(o.failures) + " violation(s), first: " + o.first_failure;
  return d;
}

std::vector<std::size_t> random_dims(Rng& rng, std::size_t k, std::size_t max_total, std::size_t max_each) {
  std::vector<std::size_t> dims(k, 1);
  std::size_t total = k;
  for (int tries = 0; tries < 16 && total < max_total; ++tries) {
    const std::size_t slot = rng.below(k);
    if (dims[slot] < max_each) {
      ++dims[slot];
      ++total;
    }
  }
  return dims;
}

// Forms with few nonzero entries, so that small biases and large ones both
// show up.
MultilinearForm sparse_form(std::uint32_t p, const std::vector<std::size_t>& dims, Rng& rng) {
  if (rng.below(3) == 0) return MultilinearForm::random(p, dims, rng);
  MultilinearForm f(p, dims);
  const std::size_t entries = rng.below(4);
  for (std::size_t e = 0; e < entries; ++e) {
    Index idx(dims.size());
    for (std::size_t s = 0; s < dims.size(); ++s) idx[s] = rng.below(dims[s]);
    f.set(idx, rng.residue(p));
  }
  return f;
}

// Direct character sum with exact integer bookkeeping: counts of each value.
std::vector<std::uint64_t> value_histogram(const MultilinearForm& alpha) {
  std::vector<std::uint64_t> hist(alpha.p(), 0);
  ProductSpace(alpha.p(), alpha.dims()).for_each([&](std::uint64_t, const PointTuple& x) { ++hist[alpha.eval(x)]; });
  return hist;
}

double character_sum_real(const std::vector<std::uint64_t>& hist, std::uint64_t total) {
  const std::uint32_t p = static_cast<std::uint32_t>(hist.size());
  long double re = 0;
  for (std::uint32_t v = 0; v < p; ++v)
    re += static_cast<long double>(hist[v]) * std::cos(2.0L * std::acos(-1.0L) * v / p);
  return static_cast<double>(re / total);
}

Residue eval_constraint(const VarietyConstraint& c, const PointTuple& x) {
  PointTuple sub;
  for (auto slot : mask_slots(c.subset)) sub.push_back(x[slot]);
  return c.form.eval(sub);
}

bool in_variety(const MultilinearVariety& W, const PointTuple& x) {
  for (const auto& c : W.constraints())
    if (eval_constraint(c, x) != 0) return false;
  return true;
}

std::uint64_t count_direct(const MultilinearVariety& W) {
  std::uint64_t n = 0;
  W.space().for_each([&](std::uint64_t, const PointTuple& x) { n += in_variety(W, x) ? 1 : 0; });
  return n;
}

MultilinearVariety random_variety(std::uint32_t p, const std::vector<std::size_t>& dims, std::size_t r, bool strict,
                                  Rng& rng) {
  const std::size_t k = dims.size();
  MultilinearVariety W(p, dims);
  for (std::size_t i = 0; i < r; ++i) {
    SlotMask mask = strict ? full_mask(k) : static_cast<SlotMask>(1 + rng.below(full_mask(k)));
    std::vector<std::size_t> sub;
    for (auto slot : mask_slots(mask)) sub.push_back(dims[slot]);
    W.add_constraint(mask, sparse_form(p, sub, rng));
  }
  return W;
}

Matrix random_independent_rows(std::uint32_t p, std::size_t rows, std::size_t dim, Rng& rng) {
  for (;;) {
    Matrix m(rows);
    for (auto& r : m) r = rng.point(p, dim);
    if (rank_mod_p(m, p) == rows) return m;
  }
}

Point apply_rows(const Matrix& rows, const Point& y, std::uint32_t p, std::size_t dim) {
  Point out(dim, 0);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < dim; ++c) out[c] = static_cast<Residue>((out[c] + std::uint64_t{y[i]} * rows[i][c]) % p);
  return out;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------

void mobius_exactness(Outcome& o, const VerifyOptions&) {
  std::size_t checked = 0;
  for (std::uint32_t p : {2u, 3u}) {
    const std::size_t top = p == 2 ? 8 : 5;
    for (std::size_t n = 1; n <= top; ++n) {
      const std::int64_t expected = n == 1 ? -static_cast<std::int64_t>(p) : 0;
      const std::int64_t got = mobius_sum(p, n, true);
      ++checked;
      if (got != expected)
        o.fail("p=" + std::to_string(p) + " n=" + std::to_string(n) + " sum " + std::to_string(got));
    }
  }
  o.detail << checked << " sums exact";
}

void bias_equivalence(Outcome& o, const VerifyOptions& opt) {
  Rng rng(opt.seed ^ 0x2);
  double worst = 0;
  std::size_t exact_p2 = 0;
  const std::uint32_t primes[] = {2, 3, 5};
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t p = primes[trial % 3];
    const std::size_t cap = p == 2 ? 12 : p == 3 ? 7 : 5;
    const std::size_t k = 1 + rng.below(3);
    const auto dims = random_dims(rng, k, cap, cap);
    const MultilinearForm alpha = sparse_form(p, dims, rng);
    const ExactFraction b = bias(alpha);
    const ProductSpace U(p, dims);
    const std::uint64_t total = U.size();
    const auto hist = value_histogram(alpha);
    const std::string tag = "trial " + std::to_string(trial) + " p=" + std::to_string(p);
    if (p == 2) {
      const std::int64_t sum = static_cast<std::int64_t>(hist[0]) - static_cast<std::int64_t>(hist[1]);
      if (sum < 0 || ExactFraction(BigInt(sum), 2, static_cast<std::uint32_t>(U.total_dim())) != b)
        o.fail(tag + ": exact mismatch");
      else
        ++exact_p2;
    }
    const double direct = character_sum_real(hist, total);
    const double diff = std::abs(direct - b.to_double());
    const double diff_oracle = std::abs(bias_direct_oracle(alpha) - std::complex<double>(b.to_double(), 0));
    worst = std::max({worst, diff, diff_oracle});
    if (diff > 1e-9 || diff_oracle > 1e-9) o.fail(tag + ": |difference| " + fmt("%.3g", std::max(diff, diff_oracle)));
    const std::size_t head = U.total_dim() - dims.back();
    if (ExactFraction::from_count(kernel_count_enumerated(alpha), p, static_cast<std::uint32_t>(head)) != b)
      o.fail(tag + ": kernel count disagrees with rank bias");
  }
  o.detail << "200 forms, max |diff| " << fmt("%.2e", worst) << ", " << exact_p2 << " exact at p=2";
}

void form_inequality_suite(Outcome& o, const VerifyOptions& opt) {
  Rng rng(opt.seed ^ 0x3);
  const std::uint32_t primes[] = {2, 3};

  // Density of bounded codimension varieties.
  for (int t = 0; t < 100; ++t) {
    const std::uint32_t p = primes[t % 2];
    const std::size_t k = 1 + rng.below(3);
    const auto dims = random_dims(rng, k, p == 2 ? 9 : 6, 3);
    const std::size_t r = 1 + rng.below(3);
    const auto W = random_variety(p, dims, r, false, rng);
    const std::uint64_t size = count_direct(W);
    if (size != W.count()) o.fail("density: count mismatch at " + std::to_string(t));
    if (BigInt(size) * boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(r)) <
        BigInt(W.space().size()))
      o.fail("density: variety " + std::to_string(t) + " below p^-r");
  }

  // Restrictions: bias(beta) >= bias(alpha) >= p^{-codim} bias(beta).
  std::size_t codim_checked = 0;
  for (int t = 0; t < 100; ++t) {
    const std::uint32_t p = primes[t % 2];
    const std::size_t k = t < 10 ? 1 : 2 + rng.below(2);
    const auto dims = random_dims(rng, k, p == 2 ? 10 : 6, 4);
    const auto alpha = sparse_form(p, dims, rng);
    std::vector<Matrix> bases;
    std::vector<std::size_t> sub;
    std::uint32_t codim = 0;
    for (auto d : dims) {
      const std::size_t u = 1 + rng.below(d);
      sub.push_back(u);
      codim += static_cast<std::uint32_t>(d - u);
      bases.push_back(random_independent_rows(p, u, d, rng));
    }
    const auto beta = restrict_form(alpha, bases);
    for (int s = 0; s < 8; ++s) {
      PointTuple y(k), x(k);
      for (std::size_t i = 0; i < k; ++i) {
        y[i] = rng.point(p, sub[i]);
        x[i] = apply_rows(bases[i], y[i], p, dims[i]);
      }
      if (beta.eval(y) != alpha.eval(x)) o.fail("restriction: restricted form disagrees at " + std::to_string(t));
    }
    const ExactFraction ba = bias(alpha), bb = bias(beta);
    if (bb < ba) o.fail("restriction: bias decreased at " + std::to_string(t));
    // The codimension bound needs a variable to linearize in: for k = 1 a
    // nonzero linear form has bias 0 while its restriction to the kernel has 1.
    codim_checked += k >= 2 ? 1 : 0;
    if (k >= 2 && ba < ExactFraction::inverse_power(p, codim) * bb)
      o.fail("restriction: codimension bound fails at " + std::to_string(t) + " (" + ba.to_string() + " vs " + bb.to_string() + " codim " + std::to_string(codim) + ")");
  }

  // Correlation of strictly multilinear varieties.
  for (int t = 0; t < 50; ++t) {
    const std::uint32_t p = primes[t % 2];
    const std::size_t k = 1 + rng.below(3);
    const auto dims = random_dims(rng, k, p == 2 ? 9 : 6, 3);
    const auto V = random_variety(p, dims, 1 + rng.below(2), true, rng);
    const auto W = random_variety(p, dims, 1 + rng.below(2), true, rng);
    const std::uint64_t u = V.space().size();
    const std::uint64_t v = count_direct(V), w = count_direct(W), vw = count_direct(intersect(V, W));
    if (BigInt(vw) * u < BigInt(v) * w) o.fail("correlation: pair " + std::to_string(t));
  }

  // Bias of a sum.
  for (int t = 0; t < 200; ++t) {
    const std::uint32_t p = primes[t % 2];
    const std::size_t k = 1 + rng.below(3);
    const auto dims = random_dims(rng, k, p == 2 ? 10 : 6, 4);
    const auto a = sparse_form(p, dims, rng), b = sparse_form(p, dims, rng);
    if (bias(add(a, b)) < bias(a) * bias(b)) o.fail("sum bias: pair " + std::to_string(t));
  }

  // Convolution positivity with |B| at the size threshold.
  std::size_t positive = 0;
  for (int t = 0; t < 20; ++t) {
    const bool two = t % 2 == 0;
    const std::uint32_t p = two ? 2 : 3;
    const std::vector<std::size_t> dims = two ? std::vector<std::size_t>{4, 4} : std::vector<std::size_t>{4};
    const std::size_t k = dims.size();
    MultilinearVariety W = random_variety(p, dims, 1, false, rng);
    const ProductSpace U = W.space();
    const std::uint64_t total = U.size();
    std::uint64_t denom = std::uint64_t{1} << (2 * k);
    for (std::size_t i = 0; i < k; ++i) denom *= p;  // r = 1
    const std::uint64_t threshold = total / denom;
    std::vector<std::uint64_t> members;
    U.for_each([&](std::uint64_t idx, const PointTuple& x) {
      if (in_variety(W, x)) members.push_back(idx);
    });
    for (std::size_t i = 0; i < members.size(); ++i) std::swap(members[i], members[i + rng.below(members.size() - i)]);
    std::vector<std::uint64_t> B(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(std::min<std::uint64_t>(threshold, members.size())));
    const auto rep = directional_convolution_positive(W, B);
    // Support oracle: conv_i f > 0 at x iff some y_i has f > 0 at both shifts.
    std::vector<bool> support(total, false);
    for (auto idx : members) support[idx] = true;
    for (auto idx : B) support[idx] = false;
    for (std::size_t slot = 0; slot < k; ++slot) {
      std::vector<bool> next(total, false);
      U.for_each([&](std::uint64_t idx, const PointTuple& x) {
        PointTuple a = x, b = x;
        ProductSpace(p, {dims[slot]}).for_each([&](std::uint64_t, const PointTuple& y) {
          if (next[idx]) return;
          a[slot] = add_points(y[0], x[slot], p);
          b[slot] = y[0];
          if (support[U.encode(a)] && support[U.encode(b)]) next[idx] = true;
        });
      });
      support = std::move(next);
    }
    bool oracle_positive = true;
    for (auto idx : members) oracle_positive = oracle_positive && support[idx];
    if (!rep.size_precondition_ok) o.fail("convolution: size precondition rejected at " + std::to_string(t));
    if (!rep.positive || !oracle_positive) o.fail("convolution: not positive at " + std::to_string(t));
    if (rep.positive != oracle_positive) o.fail("convolution: oracle disagrees at " + std::to_string(t));
    positive += rep.positive ? 1 : 0;
  }
  o.detail << "100 densities, 100 restrictions (" << codim_checked << " with k >= 2 for the codimension bound), 50 + 200 pairs, " << positive << "/20 convolutions positive";
}

void rearrangement(Outcome& o, const VerifyOptions&) {
  std::uint64_t admissible = 0, rejected = 0;
  for (std::size_t k = 1; k <= 4; ++k) {
    std::vector<std::vector<std::int64_t>> seqs;
    std::vector<std::int64_t> cur(k, 0);
    std::function<void(std::size_t, std::int64_t)> gen = [&](std::size_t i, std::int64_t lo) {
      if (i == k) {
        seqs.push_back(cur);
        return;
      }
      for (std::int64_t v = lo; v <= 4; ++v) {
        cur[i] = v;
        gen(i + 1, v);
      }
    };
    gen(0, 0);
    const auto perms = all_permutations(k);
    for (const auto& x : seqs)
      for (const auto& y : seqs) {
        bool pairing = true;
        for (std::size_t j = 0; j < k; ++j)
          for (std::size_t l = 0; l < k; ++l) pairing = pairing && (y[j] != y[l] || x[j] == x[l]);
        for (const auto& sigma : perms) {
          bool moves = false;
          for (std::size_t j = 0; j < k; ++j) moves = moves || x[sigma[j]] != x[j];
          const bool hyp = pairing && moves;
          try {
            const bool strict = rearrangement_dominates(x, y, sigma);
            if (!hyp) o.fail("accepted a case outside the hypotheses");
            std::int64_t lhs = 0, rhs = 0;
            for (std::size_t j = 0; j < k; ++j) {
              lhs += (x[j] + y[j]) * (x[j] + y[j]);
              rhs += (x[j] + y[sigma[j]]) * (x[j] + y[sigma[j]]);
            }
            if (!strict || !(lhs > rhs)) o.fail("strict inequality fails");
            ++admissible;
          } catch (const RearrangementPrecondition&) {
            if (hyp) o.fail("rejected an admissible case");
            ++rejected;
          }
        }
      }
  }
  o.detail << admissible << " admissible cases strict, " << rejected << " rejected by hypotheses";
}

void multilinear_construction(Outcome& o, const VerifyOptions& opt) {
  Rng rng(opt.seed ^ 0x5);
  const double eps = 0.25;
  double worst = 0;
  std::size_t terms_max = 0;
  int made = 0;
  while (made < 20) {
    const int shape = made % 5;
    std::uint32_t p;
    std::vector<std::size_t> dims;
    switch (shape) {
      case 0: p = 2; dims = {2, 3}; break;
      case 1: p = 3; dims = {2, 2}; break;
      case 2: p = 5; dims = {1, 2}; break;
      case 3: p = 2; dims = {2, 2, 2}; break;
      default: p = 3; dims = {1, 2, 2}; break;
    }
    const auto alpha = sparse_form(p, dims, rng);
    const ExactFraction b = bias(alpha);
    if (b < ExactFraction::inverse_power(p, 1)) continue;
    const std::string tag = "form " + std::to_string(made);
    ++made;
    const auto res = approximate_multilinear_phase(alpha, eps, rng.next());
    const auto& c = res.construction;
    const double err = l2_distance(phase_table(alpha), res.combination);
    worst = std::max(worst, err);
    if (err > eps) o.fail(tag + ": L2 error " + fmt("%.4f", err));
    if (c.literal_l2_error && std::abs(*c.literal_l2_error - err) > 1e-9) o.fail(tag + ": literal error disagrees");
    const Rational l1(Rational(BigInt(c.u_size)) / Rational(BigInt(c.z_size)));
    if (c.l1_exact != l1) o.fail(tag + ": coefficient sum differs from |U|/|Z|");
    if (c.l1_exact * b.to_rational() > 1) o.fail(tag + ": coefficient sum exceeds 1/bias");
    if (c.coefficient * Rational(BigInt(res.combination.terms.size())) != c.l1_exact)
      o.fail(tag + ": term coefficients do not sum to |U|/|Z|");
    for (const auto& term : res.combination.terms) {
      const auto* lambda = std::get_if<MultiaffineForm>(&term.source);
      if (!lambda || !extract_multilinear_part(*lambda).is_zero()) {
        o.fail(tag + ": a term has a nonzero multilinear part");
        break;
      }
    }
    const double terms_log2 = std::log2(static_cast<double>(res.combination.terms.size()));
    const double bound_log2 = 25 - 14 * std::log2(eps) - 14 * std::log2(b.to_double());
    if (terms_log2 > bound_log2 + 1e-9) o.fail(tag + ": too many terms");
    terms_max = std::max(terms_max, res.combination.terms.size());
  }
  o.detail << "20 forms, worst L2 " << fmt("%.4f", worst) << ", at most " << terms_max << " terms";
}

// |E chi(f)|^2 * N^2 from a value histogram, exact for p <= 3.
BigInt squared_sum(const std::vector<std::uint64_t>& h) {
  if (h.size() == 2) return (BigInt(h[0]) - BigInt(h[1])) * (BigInt(h[0]) - BigInt(h[1]));
  const BigInt a(h[0]), b(h[1]), c(h[2]);
  return a * a + b * b + c * c - a * b - b * c - c * a;
}

std::vector<std::uint64_t> difference_histogram(const PolynomialFn& Q, const PolynomialFn& P) {
  std::vector<std::uint64_t> h(Q.p(), 0);
  ProductSpace(Q.p(), {Q.n()}).for_each([&](std::uint64_t, const PointTuple& x) {
    ++h[(Q.eval(x[0]) + Q.p() - P.eval(x[0])) % Q.p()];
  });
  return h;
}

void gowers_inverse(Outcome& o, const VerifyOptions& opt) {
  const std::uint32_t p = 3;
  PolynomialFn Q(p, 1);
  Q.add_term({2}, 1);
  const double norm = gowers_norm(phase_table(Q), 2);
  const double expected = std::pow(1.0 / 3.0, 0.25);
  if (std::abs(norm - expected) > 1e-9) o.fail("U^2 norm of x^2 is " + fmt("%.12f", norm));
  const auto inv = gowers_inverse_polynomial(Q, 2, opt.seed ^ 0x6);
  const auto h = difference_histogram(Q, inv.P);
  const BigInt N = BigInt(3);
  // |S| >= 1/(2m)  <=>  4 m^2 |sum|^2 >= N^2
  if (BigInt(4) * BigInt(inv.m) * BigInt(inv.m) * squared_sum(h) < N * N)
    o.fail("x^2: correlation below 1/(2m)");
  if (inv.P.degree() > 1) o.fail("x^2: P has degree " + std::to_string(inv.P.degree()));

  Rng rng(opt.seed ^ 0x66);
  double worst = 0;
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 1 + t % 3;
    const auto R = random_degree_k_polynomial(p, n, 2, rng);
    if (bias(derived_symmetric_form(R, 2)).is_zero()) o.fail("random Q unbiased");
    const auto res = gowers_inverse_polynomial(R, 2, rng.next());
    if (res.P.degree() > 1) o.fail("P of degree " + std::to_string(res.P.degree()));
    const auto hist = difference_histogram(R, res.P);
    std::complex<double> direct = 0;
    const std::uint64_t total = std::accumulate(hist.begin(), hist.end(), std::uint64_t{0});
    for (std::uint32_t v = 0; v < p; ++v) direct += static_cast<double>(hist[v]) * character(v, p);
    direct /= static_cast<double>(total);
    const double diff = std::max(std::abs(std::abs(direct) - res.correlation),
                                 std::abs(std::abs(phase_correlation(R, res.P)) - std::abs(direct)));
    worst = std::max(worst, diff);
    if (diff > 1e-9) o.fail("correlation recomputation differs by " + fmt("%.3g", diff));
  }
  o.detail << "||x^2||_U2 = " << fmt("%.12f", norm) << ", m = " << inv.m << ", |corr| = " << fmt("%.6f", inv.correlation)
           << "; 10 random Q, max recompute diff " << fmt("%.2e", worst);
}

void cascade_machinery(Outcome& o, const VerifyOptions& opt) {
  std::uint64_t plans = 0;
  for (std::size_t s = 1; s <= 6; ++s)
    for (std::size_t k = 1; k <= 4; ++k)
      for (std::size_t g = 1; g + k <= s; ++g) {
        std::vector<std::size_t> j(k, 0);
        for (;;) {
          const auto plan = sequence_plan(j, g, s, 1);
          ++plans;
          bool ok = plan.l.size() == k && plan.a.size() == k;
          for (std::size_t i = 0; ok && i < k; ++i) {
            ok = plan.l[i] + plan.a[i] == j[i] && plan.l[i] <= g - 1 && plan.a[i] <= s - g;
            if (i + 1 < k) ok = ok && plan.l[i] <= plan.l[i + 1] && plan.a[i] <= plan.a[i + 1];
            for (std::size_t y = 0; y < k; ++y) ok = ok && (plan.l[i] <= plan.l[y] || plan.a[i] > plan.a[y]);
          }
          if (!ok) o.fail("plan property violated");
          std::size_t i = k;
          while (i > 0 && j[i - 1] == s - 1) --i;
          if (i == 0) break;
          ++j[i - 1];
          for (std::size_t r = i; r < k; ++r) j[r] = j[i - 1];
        }
      }
  {
    const auto plan = sequence_plan({0, 2, 3}, 2, 5, 1);
    if (plan.l != std::vector<std::size_t>{0, 1, 1} || plan.a != std::vector<std::size_t>{0, 1, 2})
      o.fail("plan of (0,2,3)");
  }

  Rng rng(opt.seed ^ 0x7);
  std::uint64_t points = 0;
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (std::size_t n = 1; power_u64(p, n) <= 4096; ++n) {
      for (int rep = 0; rep < 2; ++rep) {
        const std::size_t d = 1 + rng.below(n);
        const std::size_t s = 1 + rng.below(n);
        PolyFp w(p);
        while (w.is_zero()) w = PolyFp(p, rng.point(p, d + 1));
        ffpoly::for_each_in_space({p, n, ffpoly::SpaceKind::G}, [&](const PolyFp& x) {
          ++points;
          const auto dec = ffpoly::base_w_decompose(x, w, d, s);
          bool ok = dec.reconstruct() == x && dec.res.degree() < w.degree() && dec.chunks.size() == s;
          for (const auto& ch : dec.chunks) ok = ok && ch.degree() < static_cast<int>(d);
          ok = ok && ffpoly::mod(dec.over, ffpoly::shift(w, s * d)).is_zero();
          if (!ok) o.fail("base-w reconstruction at p=" + std::to_string(p) + " n=" + std::to_string(n));
        });
      }
    }
  }

  const auto Q = random_degree_k_polynomial(3, 10, 2, rng);
  const auto rep = bias_cascade_report(Q, 2, 4);
  bool first_ok = true;
  for (std::size_t i = 0; i < rep.rows.size() && i < rep.s; ++i) first_ok = first_ok && !(rep.rows[i].bias < rep.c);
  if (!first_ok || !rep.first_rows_at_least_c) o.fail("cascade: an early row is below c");
  if (!rep.all_identities_hold) o.fail("cascade: a tensor identity fails");
  if (!rep.reconstruction_exact || !rep.hom_identity_exact) o.fail("cascade: reconstruction identities fail");
  std::size_t identities = 0;
  for (const auto& row : rep.rows) identities += row.plan ? 1 : 0;
  o.detail << plans << " plans, " << points << " decompositions, cascade p=3 n=10 m=4 d=2: " << rep.rows.size()
           << " rows, " << identities << " identities, c = " << rep.c.to_string();
}

void chevalley_warning(Outcome& o, const VerifyOptions& opt) {
  Rng rng(opt.seed ^ 0x8);
  for (int t = 0; t < 20; ++t) {
    std::uint32_t p;
    std::size_t k, g, r;
    switch (t % 4) {
      case 0: p = 2; k = 2; g = 1; r = 1; break;
      case 1: p = 3; k = 2; g = 1; r = 1; break;
      case 2: p = 2; k = 2; g = 1; r = 2; break;
      default: p = 2; k = 1; g = 2; r = 1; break;
    }
    std::size_t equations = 0;
    MultilinearVariety W(p, {1});
    std::size_t d = 0, m = 0;
    // Degrees sum to at most k r g^k; d one above keeps the system in range.
    std::size_t gk = 1;
    for (std::size_t i = 0; i < k; ++i) gk *= g;
    d = k * r * gk + 1;
    m = g * d;
    W = random_variety(p, std::vector<std::size_t>(k, m), r, false, rng);
    for (const auto& c : W.constraints()) {
      std::size_t e = 1;
      for (std::size_t i = 0; i < mask_slots(c.subset).size(); ++i) e *= g;
      equations += e;
    }
    const auto rep = chevalley_warning_search(W, d, g);
    const std::string tag = "system " + std::to_string(t);
    if (!rep.dimension_condition || !rep.degree_condition) o.fail(tag + ": outside the dimension condition");
    if (rep.equations != equations) o.fail(tag + ": equation count");
    // Direct count over G_d.
    std::uint64_t direct = 0;
    ffpoly::for_each_in_space({p, d, ffpoly::SpaceKind::G}, [&](const PolyFp& w) {
      bool all = true;
      std::vector<std::size_t> i(k, 0);
      for (;;) {
        PointTuple x(k);
        for (std::size_t a = 0; a < k; ++a) x[a] = ffpoly::shift(w, i[a] * d).coordinates(m);
        all = all && in_variety(W, x);
        std::size_t a = 0;
        while (a < k && ++i[a] == g) i[a++] = 0;
        if (a == k) break;
      }
      direct += all ? 1 : 0;
    });
    if (direct != rep.solutions) o.fail(tag + ": solution count differs from direct count");
    if (rep.solutions % p != 0) o.fail(tag + ": count not divisible by p");
    if (!rep.w || rep.w->is_zero()) {
      o.fail(tag + ": no nonzero solution");
      continue;
    }
    std::vector<std::size_t> i(k, 0);
    for (;;) {
      PointTuple x(k);
      for (std::size_t a = 0; a < k; ++a) x[a] = ffpoly::shift(*rep.w, i[a] * d).coordinates(m);
      if (!W.contains(x)) o.fail(tag + ": returned w is not a solution");
      std::size_t a = 0;
      while (a < k && ++i[a] == g) i[a++] = 0;
      if (a == k) break;
    }
  }
  o.detail << "20 systems, counts divisible by p, nonzero w verified";
}

void decay_trend(Outcome& o, const VerifyOptions& opt) {
  const std::vector<std::size_t> ns{2, 3, 4, 5, 6};
  const auto a = decay_experiment(3, 2, ns, 50, opt.seed);
  const auto b = decay_experiment(3, 2, ns, 50, opt.seed);
  const std::string ca = a.to_csv(), cb = b.to_csv();
  if (ca != cb) o.fail("tables differ under the same seed");
  if (a.rows.size() != ns.size()) o.fail("missing rows");
  o.detail << a.rows.size() << " rows, " << ca.size() << " bytes identical, slope "
           << (a.slope ? fmt("%.6f", *a.slope) : std::string("n/a"));
}

void dichotomy(Outcome& o, const VerifyOptions& opt) {
  Rng rng(opt.seed ^ 0xa);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const auto Q = random_degree_k_polynomial(3, 4, 2, rng);
    const auto cor = mobius_correlation(Q);
    if (!(cor.abs_S > 1e-12)) continue;
    const double c = cor.abs_S;
    const auto rep = vaughan_dichotomy_check(Q, c, 1);
    if (rep.vaughan_rows.empty() || rep.composed_rows.empty()) o.fail("report lacks disjunct quantities");
    for (const auto& row : rep.vaughan_rows) {
      const auto sum = [](const PhaseAverage& avg) {
        return std::accumulate(avg.counts.begin(), avg.counts.end(), std::uint64_t{0});
      };
      if (sum(row.square_average) != row.square_average.total || sum(row.fourfold) != row.fourfold.total)
        o.fail("histogram totals inconsistent");
    }
    const bool bias_positive = !rep.bias_LQ.is_zero();
    if (bias_positive != rep.first_disjunct_positive) o.fail("first disjunct flag inconsistent");
    if (bias_positive && !(std::abs(bias_direct_oracle(derived_symmetric_form(Q, 2)) -
                                    std::complex<double>(rep.bias_LQ.to_double(), 0)) < 1e-9))
      o.fail("bias of L_Q disagrees with the character sum");
    if (!rep.first_disjunct_positive && !rep.second_disjunct_positive) o.fail("neither disjunct positive");
    o.detail << "Q = " << Q.to_string() << ", c = " << fmt("%.6f", c) << ", bias L_Q = " << rep.bias_LQ.to_string()
             << ", " << rep.vaughan_rows.size() << " averaging rows, " << rep.composed_rows.size() << " composed rows";
    return;
  }
  o.fail("no sampled Q had nonzero correlation");
}

struct Entry {
  const char* name;
  void (*run)(Outcome&, const VerifyOptions&);
};

const Entry kEntries[kCriterionCount] = {
    {"mobius-exactness", mobius_exactness},   {"bias-oracle-equivalence", bias_equivalence},
    {"form-inequality-suite", form_inequality_suite},             {"rearrangement-exhaustive", rearrangement},
    {"multilinear-phase-construction", multilinear_construction},
    {"gowers-inverse", gowers_inverse},       {"cascade-machinery", cascade_machinery},
    {"chevalley-warning", chevalley_warning}, {"decay-trend", decay_trend},
    {"pipeline-dichotomy", dichotomy},
};

}  // namespace

CriterionResult run_criterion(int id, const VerifyOptions& options) {
  if (id < 1 || id > kCriterionCount) throw InvalidArgument("criterion id must lie in 1.." + std::to_string(kCriterionCount));
  const Entry& e = kEntries[id - 1];
  CriterionResult r;
  r.id = id;
  r.name = e.name;
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    e.run(o, options);
  } catch (const std::exception& ex) {
    o.fail(std::string("exception: ") + ex.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = o.passed;
  r.detail = finish(o);
  return r;
}

std::vector<CriterionResult> run_acceptance(const VerifyOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) {
    out.push_back(run_criterion(id, options));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %2d  %-32s (%.2f s)  ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
  return head + r.detail;
}

}  // namespace hoff
