#include "hoff/variety.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "hoff/budget.hpp"
#include "hoff/formcore.hpp"
#include "hoff/rng.hpp"

namespace hoff {
namespace {

using Bits = std::vector<std::uint64_t>;

Bits make_bits(const std::vector<bool>& table) {
  Bits b((table.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i]) b[i / 64] |= std::uint64_t{1} << (i % 64);
  return b;
}

bool subset_of(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

std::vector<std::size_t> dims_of(const std::vector<std::size_t>& ambient, SlotMask mask) {
  std::vector<std::size_t> d;
  for (auto s : mask_slots(mask)) d.push_back(ambient[s]);
  return d;
}

/// Zero set over the ambient of one constraint form on the slots of `mask`.
std::vector<bool> constraint_zero_table(std::uint32_t p, const std::vector<std::size_t>& ambient, SlotMask mask,
                                        const MultilinearForm& form) {
  MultilinearVariety single(p, ambient);
  single.add_constraint(mask, form);
  return single.membership_table();
}

}  // namespace

MultilinearVariety::MultilinearVariety(std::uint32_t p, std::vector<std::size_t> ambient)
    : p_(PrimeField(p).p()), ambient_(std::move(ambient)) {
  if (ambient_.size() >= 32) throw InvalidArgument("varieties support at most 31 slots");
}

void MultilinearVariety::add_constraint(SlotMask subset, const MultilinearForm& form) {
  if (subset == 0 || (subset & ~full_mask(k()))) throw InvalidArgument("constraint subset must be a nonempty subset of [k]");
  if (form.p() != p_ || form.dims() != dims_of(ambient_, subset))
    throw InvalidArgument("constraint form shape does not match its slot subset");
  constraints_.push_back({subset, form});
}

bool MultilinearVariety::is_strictly_multilinear() const {
  return std::all_of(constraints_.begin(), constraints_.end(),
                     [&](const VarietyConstraint& c) { return c.subset == full_mask(k()); });
}

bool MultilinearVariety::contains(const PointTuple& x) const {
  if (x.size() != k()) throw InvalidArgument("variety membership: arity mismatch");
  for (const auto& c : constraints_) {
    PointTuple args;
    for (auto s : mask_slots(c.subset)) args.push_back(x[s]);
    if (c.form.eval(args) != 0) return false;
  }
  return true;
}

std::vector<bool> MultilinearVariety::membership_table() const {
  const ProductSpace U = space();
  std::vector<bool> table(U.size("variety membership"), false);
  U.for_each([&](std::uint64_t i, const PointTuple& x) { table[i] = contains(x); }, "variety membership");
  return table;
}

std::uint64_t MultilinearVariety::count() const {
  std::uint64_t n = 0;
  space().for_each([&](std::uint64_t, const PointTuple& x) { n += contains(x) ? 1 : 0; }, "variety density");
  return n;
}

ExactFraction variety_density(const MultilinearVariety& W) {
  return ExactFraction::from_count(W.count(), W.p(), static_cast<std::uint32_t>(W.space().total_dim()));
}

MultilinearVariety intersect(const MultilinearVariety& V, const MultilinearVariety& W) {
  if (V.p() != W.p() || V.ambient() != W.ambient()) throw InvalidArgument("intersect: ambient mismatch");
  MultilinearVariety out = V;
  for (const auto& c : W.constraints()) out.add_constraint(c.subset, c.form);
  return out;
}

ConvolutionReport directional_convolution_positive(const MultilinearVariety& W, const std::vector<std::uint64_t>& B) {
  const ProductSpace U = W.space();
  const std::uint64_t N = U.size("directional convolution");
  const std::uint32_t p = W.p();
  const std::size_t k = W.k();
  const std::vector<bool> in_W = W.membership_table();
  std::vector<bool> support(N);
  for (std::uint64_t i = 0; i < N; ++i) support[i] = in_W[i];
  for (auto b : B) {
    if (b >= N || !in_W[b]) throw InvalidArgument("directional convolution: B is not contained in W");
    support[b] = false;
  }
  ConvolutionReport report;
  {
    BigInt lhs = BigInt(B.size()) * boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(2 * k)) *
                 boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(k * W.codimension_bound()));
    report.size_precondition_ok = lhs <= BigInt(N);
  }
  std::vector<long double> f(N);
  for (std::uint64_t i = 0; i < N; ++i) f[i] = support[i] ? 1.0L : 0.0L;

  std::size_t offset = 0;  // digit offset of the current slot
  for (std::size_t slot = 0; slot < k; ++slot) {
    const std::size_t d = W.ambient()[slot];
    const std::uint64_t radix = power_u64(p, offset);
    const std::uint64_t q = power_u64(p, d);
    // contribution to the ambient index of each value of this slot
    std::vector<std::uint64_t> contrib(q);
    std::vector<std::vector<std::uint64_t>> sum_table(q, std::vector<std::uint64_t>(q));
    for (std::uint64_t v = 0; v < q; ++v) contrib[v] = v * radix;
    // value index of (u + v) digitwise mod p
    for (std::uint64_t u = 0; u < q; ++u)
      for (std::uint64_t v = 0; v < q; ++v) {
        std::uint64_t a = u, b = v, r = 0, place = 1;
        for (std::size_t j = 0; j < d; ++j) {
          r += ((a % p + b % p) % p) * place;
          a /= p;
          b /= p;
          place *= p;
        }
        sum_table[u][v] = r;
      }
    std::vector<long double> g(N, 0);
    std::vector<bool> gs(N, false);
    for (std::uint64_t i = 0; i < N; ++i) {
      const std::uint64_t xi = (i / radix) % q;
      const std::uint64_t base = i - contrib[xi];
      long double acc = 0;
      bool pos = false;
      for (std::uint64_t y = 0; y < q; ++y) {
        const std::uint64_t i1 = base + contrib[sum_table[y][xi]];
        const std::uint64_t i2 = base + contrib[y];
        if (support[i1] && support[i2]) {
          pos = true;
          acc += f[i1] * f[i2];
        }
      }
      g[i] = acc / static_cast<long double>(q);
      gs[i] = pos;
    }
    f = std::move(g);
    support = std::move(gs);
    offset += d;
  }
  report.positive = true;
  report.min_value = INFINITY;
  for (std::uint64_t i = 0; i < N; ++i) {
    if (!in_W[i]) continue;
    ++report.points_checked;
    report.positive = report.positive && support[i];
    report.min_value = std::min(report.min_value, f[i]);
  }
  if (report.points_checked == 0) report.min_value = 0;
  return report;
}

ExternalApproximation external_approximation(const MultilinearForm& alpha, const Rational& target_excess,
                                             std::uint64_t seed, std::optional<std::size_t> s_cap,
                                             std::size_t draws_per_s) {
  const std::size_t k = alpha.k();
  if (k < 2) throw InvalidArgument("external approximation needs a form with at least two slots");
  const std::uint32_t p = alpha.p();
  const std::vector<std::size_t> head_dims(alpha.dims().begin(), alpha.dims().end() - 1);
  const std::size_t s_total = alpha.dims().back();
  const ProductSpace U(p, head_dims);
  const std::uint64_t N = U.size("external approximation");
  std::vector<Point> A(N);
  std::uint64_t z_size = 0;
  U.for_each([&](std::uint64_t i, const PointTuple& x) {
    A[i] = alpha.last_slot_map(x);
    if (std::all_of(A[i].begin(), A[i].end(), [](Residue c) { return c == 0; })) ++z_size;
  });
  const std::size_t s_max = std::min(s_total, s_cap.value_or(s_total));
  Rng rng(seed);
  std::uint64_t draws = 0;

  auto evaluate = [&](const std::vector<Point>& taus) -> std::uint64_t {
    std::uint64_t v_size = 0;
    for (std::uint64_t i = 0; i < N; ++i) {
      bool in = true;
      for (const auto& tau : taus)
        if (dot(tau, A[i], p) != 0) {
          in = false;
          break;
        }
      v_size += in ? 1 : 0;
    }
    return v_size - z_size;
  };
  auto finish = [&](std::vector<Point> taus, std::uint64_t excess) {
    MultilinearVariety V(p, head_dims);
    for (const auto& tau : taus) V.add_constraint(full_mask(k - 1), alpha.contract(k - 1, tau));
    return ExternalApproximation{std::move(V), std::move(taus), 0, z_size, excess, N, draws};
  };
  auto acceptable = [&](std::uint64_t excess) { return Rational(excess) <= target_excess * Rational(N); };

  for (std::size_t s = 0; s <= s_max; ++s) {
    const std::size_t attempts = s == 0 ? 1 : draws_per_s;
    for (std::size_t a = 0; a < attempts; ++a) {
      std::vector<Point> taus;
      for (std::size_t j = 0; j < s; ++j) taus.push_back(rng.point(p, s_total));
      ++draws;
      const std::uint64_t excess = evaluate(taus);
      if (acceptable(excess)) {
        auto out = finish(std::move(taus), excess);
        out.s = s;
        return out;
      }
    }
    if (s == s_total) {
      // the coordinate functionals cut out Z exactly
      std::vector<Point> taus;
      for (std::size_t j = 0; j < s_total; ++j) taus.push_back(unit_vector(s_total, j));
      ++draws;
      auto out = finish(std::move(taus), 0);
      out.s = s_total;
      return out;
    }
  }
  throw BudgetExceeded("external approximation: excess target unreachable with s <= " + std::to_string(s_max));
}

std::string to_string(FinderStatus s) {
  switch (s) {
    case FinderStatus::Found: return "found";
    case FinderStatus::NotFound: return "not-found";
    case FinderStatus::BudgetExhausted: return "budget-exhausted";
  }
  return "unknown";
}

FinderResult subvariety_finder(const MultilinearVariety& W, std::size_t max_codim, const FinderOptions& options) {
  const std::uint32_t p = W.p();
  const std::size_t k = W.k();
  const auto& ambient = W.ambient();
  const Bits target = make_bits(W.membership_table());

  struct Entry {
    SlotMask mask;
    MultilinearForm form;
    Bits zeros;
  };
  std::vector<Entry> dictionary;
  std::set<Bits> seen;
  auto offer = [&](SlotMask mask, const MultilinearForm& form) {
    if (form.is_zero()) return;
    Bits zeros = make_bits(constraint_zero_table(p, ambient, mask, form));
    if (!seen.insert(zeros).second) return;
    dictionary.push_back({mask, form, std::move(zeros)});
  };
  if (options.include_defining_forms)
    for (const auto& c : W.constraints()) offer(c.subset, c.form);
  for (SlotMask mask = 1; mask <= full_mask(k) && k > 0; ++mask) {
    const auto dims = dims_of(ambient, mask);
    MultilinearForm zero(p, dims);
    const std::size_t n = zero.entry_count();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        std::vector<Residue> t(n, 0);
        t[a] = 1;
        t[b] = 1;
        offer(mask, MultilinearForm(p, dims, std::move(t)));
      }
    if (mask == full_mask(k)) break;
  }
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t d = ambient[s];
    if (power_ld(p, d) > 4096) continue;
    const std::uint64_t q = power_u64(p, d);
    for (std::uint64_t v = 1; v < q; ++v) {
      std::vector<Residue> coeffs(d);
      std::uint64_t r = v;
      for (auto& c : coeffs) {
        c = static_cast<Residue>(r % p);
        r /= p;
      }
      offer(SlotMask{1} << s, MultilinearForm(p, {d}, std::move(coeffs)));
    }
  }

  FinderResult result;
  result.dictionary_size = dictionary.size();
  const Bits all_ones = make_bits(std::vector<bool>(W.space().size(), true));
  std::vector<std::size_t> chosen;
  bool exhausted = false;
  std::function<bool(std::size_t, std::size_t, const Bits&)> search = [&](std::size_t start, std::size_t left,
                                                                          const Bits& current) -> bool {
    if (left == 0) {
      if (++result.combinations_tried > options.combination_budget) {
        exhausted = true;
        return false;
      }
      return subset_of(current, target);
    }
    for (std::size_t i = start; i + left <= dictionary.size(); ++i) {
      Bits next = current;
      for (std::size_t w = 0; w < next.size(); ++w) next[w] &= dictionary[i].zeros[w];
      chosen.push_back(i);
      if (search(i + 1, left - 1, next)) return true;
      chosen.pop_back();
      if (exhausted) return false;
    }
    return false;
  };
  for (std::size_t codim = 0; codim <= max_codim; ++codim) {
    chosen.clear();
    if (search(0, codim, all_ones)) {
      MultilinearVariety V(p, ambient);
      for (auto i : chosen) V.add_constraint(dictionary[i].mask, dictionary[i].form);
      // containment re-checked pointwise
      const auto table_v = V.membership_table(), table_w = W.membership_table();
      for (std::size_t i = 0; i < table_v.size(); ++i)
        if (table_v[i] && !table_w[i]) throw Error("subvariety finder produced a variety outside W");
      result.status = FinderStatus::Found;
      result.variety = std::move(V);
      return result;
    }
    if (exhausted) {
      result.status = FinderStatus::BudgetExhausted;
      return result;
    }
  }
  result.status = FinderStatus::NotFound;
  return result;
}

MultilinearForm slice_form(const MultilinearForm& alpha, const PointTuple& head) {
  std::vector<const Point*> fixed(alpha.k(), nullptr);
  for (std::size_t s = 0; s < head.size(); ++s) fixed[s] = &head[s];
  return alpha.contract_many(fixed);
}

FiberReport biased_fiber_variety(const MultilinearForm& alpha, std::size_t k, const ExactFraction& c, std::uint64_t seed,
                                 const FiberOptions& options) {
  const std::uint32_t p = alpha.p();
  if (k == 0 || k >= alpha.k()) throw InvalidArgument("biased_fiber_variety needs 1 <= k < number of slots");
  const std::size_t l = alpha.k() - k;
  const std::vector<std::size_t> u_dims(alpha.dims().begin(), alpha.dims().begin() + static_cast<std::ptrdiff_t>(k));
  const std::vector<std::size_t> v_dims(alpha.dims().begin() + static_cast<std::ptrdiff_t>(k), alpha.dims().end());
  const std::vector<std::size_t> v_head(v_dims.begin(), v_dims.end() - 1);
  const ProductSpace U(p, u_dims);
  const ProductSpace Vh(p, v_head);
  const std::uint64_t NU = U.size("fiber variety");
  const std::uint64_t NV = Vh.size("fiber variety");
  require_within_budget(static_cast<long double>(NU) * static_cast<long double>(NV), "fiber variety");

  FiberReport rep;
  rep.k = k;
  rep.l = l;
  rep.c = c;
  rep.seed = seed;
  rep.draws = options.draws;
  rep.max_codim = options.max_codim;

  // |T_a| for every a, and the slice biases
  std::vector<ExactFraction> slice_bias(NU);
  std::vector<std::uint64_t> t_size(NU);
  U.for_each([&](std::uint64_t i, const PointTuple& a) {
    slice_bias[i] = bias(slice_form(alpha, a));
    t_size[i] = static_cast<std::uint64_t>(boost::multiprecision::numerator(slice_bias[i].to_rational() * Rational(NV)));
  });
  for (std::uint64_t i = 0; i < NU; ++i) rep.s_c_size += (slice_bias[i] >= c) ? 1 : 0;
  if (ExactFraction::from_count(rep.s_c_size, p, static_cast<std::uint32_t>(U.total_dim())) < c)
    throw HypothesisFailure("|S_c| = " + std::to_string(rep.s_c_size) + " is below c|U| for c = " + c.to_string());

  const unsigned K = static_cast<unsigned>(std::max<std::size_t>(options.max_codim, 1));
  const Rational cr = c.to_rational();
  {
    Rational eps = Rational(1) / Rational(boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(2 * k)));
    eps /= Rational(boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(2 * k * K)));
    Rational cp = 1;
    for (unsigned i = 0; i < 2 * k * K; ++i) cp *= cr;
    rep.eps = eps * cp;
    rep.c_prime = cr * cr * rep.eps / 2;
  }

  // dependent random choice over y_[l-1]
  Rng rng(seed);
  Rational best_objective;
  bool have_best = false;
  std::vector<Point> best_y;
  std::vector<std::uint64_t> best_A, best_B;
  const Rational bad_cut = rep.c_prime * Rational(NV);
  for (std::size_t draw = 0; draw < std::max<std::size_t>(options.draws, 1); ++draw) {
    std::vector<Point> y;
    for (auto d : v_head) y.push_back(rng.point(p, d));
    std::vector<std::uint64_t> A, B;
    U.for_each([&](std::uint64_t i, const PointTuple& a) {
      PointTuple head = a;
      head.insert(head.end(), y.begin(), y.end());
      const Point last = alpha.last_slot_map(head);
      if (!std::all_of(last.begin(), last.end(), [](Residue v) { return v == 0; })) return;
      A.push_back(i);
      if (Rational(t_size[i]) <= bad_cut) B.push_back(i);
    });
    const Rational objective = Rational(A.size()) - Rational(B.size()) / rep.eps;
    if (!have_best || objective > best_objective) {
      have_best = true;
      best_objective = objective;
      best_y = y;
      best_A = std::move(A);
      best_B = std::move(B);
    }
  }
  rep.y = best_y;
  rep.a_size = best_A.size();
  rep.b_size = best_B.size();
  rep.a_density = ExactFraction::from_count(rep.a_size, p, static_cast<std::uint32_t>(U.total_dim()));

  // A as a strictly multilinear variety: alpha(a, y, e_j) = 0 for each j
  MultilinearVariety A_var(p, u_dims);
  {
    std::vector<const Point*> fixed(alpha.k(), nullptr);
    for (std::size_t j = 0; j + 1 < l; ++j) fixed[k + j] = &rep.y[j];
    const MultilinearForm partial = alpha.contract_many(fixed);  // slots: U_[k], V_l
    for (std::size_t j = 0; j < v_dims.back(); ++j) {
      MultilinearForm f = partial.contract(k, unit_vector(v_dims.back(), j));
      if (!f.is_zero()) A_var.add_constraint(full_mask(k), f);
    }
  }
  const FinderResult found = subvariety_finder(A_var, options.max_codim, options.finder);
  rep.finder_status = found.status;
  {
    const double lp2 = std::log(2.0) / std::log(static_cast<double>(p));
    const double kd = static_cast<double>(k);
    rep.guaranteed_c_tilde_log_p = -std::pow(2.0, kd + 2) * kd * lp2 - std::pow(2.0, kd + 1) * kd * K +
                              std::pow(2.0, kd + 2) * kd * K * c.log_p();
  }
  if (found.status != FinderStatus::Found) return rep;

  const MultilinearVariety& W = *found.variety;
  rep.variety = W;
  rep.codimension = W.codimension_bound();
  const std::vector<bool> in_W = W.membership_table();
  std::vector<std::uint64_t> bad_in_W;
  for (auto b : best_B)
    if (in_W[b]) bad_in_W.push_back(b);
  rep.convolution = directional_convolution_positive(W, bad_in_W);
  std::optional<ExactFraction> min_bias;
  for (std::uint64_t i = 0; i < NU; ++i) {
    if (!in_W[i]) continue;
    rep.table.push_back({i, slice_bias[i]});
    if (!min_bias || slice_bias[i] < *min_bias) min_bias = slice_bias[i];
  }
  rep.measured_c_tilde = min_bias;
  rep.meets_guaranteed_bound = min_bias && (min_bias->is_zero() ? false : min_bias->log_p() >= rep.guaranteed_c_tilde_log_p - 1e-9);
  return rep;
}

}  // namespace hoff
