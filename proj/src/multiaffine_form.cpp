#include "hoff/multiaffine_form.hpp"

#include <bit>
#include <string>

#include "hoff/space.hpp"

namespace hoff {

std::vector<std::size_t> mask_slots(SlotMask mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask; ++i, mask >>= 1)
    if (mask & 1) out.push_back(i);
  return out;
}

MultiaffineForm::MultiaffineForm(std::uint32_t p, std::vector<std::size_t> dims)
    : p_(PrimeField(p).p()), dims_(std::move(dims)) {
  if (dims_.size() >= 32) throw InvalidArgument("multiaffine forms support at most 31 slots");
}

void MultiaffineForm::add_component(SlotMask subset, const MultilinearForm& form) {
  if (subset & ~full_mask(k())) throw InvalidArgument("component subset outside [k]");
  std::vector<std::size_t> expected;
  for (auto s : mask_slots(subset)) expected.push_back(dims_[s]);
  if (form.p() != p_ || form.dims() != expected)
    throw InvalidArgument("component shape does not match subset " + std::to_string(subset));
  auto it = components_.find(subset);
  if (it == components_.end()) {
    components_.emplace(subset, form);
    return;
  }
  std::vector<Residue> t = it->second.tensor();
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = (t[i] + form.tensor()[i]) % p_;
  it->second = MultilinearForm(p_, expected, std::move(t));
}

MultilinearForm MultiaffineForm::component(SlotMask subset) const {
  auto it = components_.find(subset);
  if (it != components_.end()) return it->second;
  std::vector<std::size_t> dims;
  for (auto s : mask_slots(subset)) dims.push_back(dims_[s]);
  return MultilinearForm(p_, std::move(dims));
}

Residue MultiaffineForm::eval(const PointTuple& x) const {
  if (x.size() != k()) throw InvalidArgument("multiaffine eval: arity mismatch");
  std::uint64_t sum = 0;
  for (const auto& [mask, form] : components_) {
    PointTuple args;
    for (auto s : mask_slots(mask)) args.push_back(x[s]);
    sum += form.eval(args);
  }
  return static_cast<Residue>(sum % p_);
}

bool MultiaffineForm::has_vanishing_multilinear_part() const {
  auto it = components_.find(full_mask(k()));
  return it == components_.end() || it->second.is_zero();
}

void MultiaffineForm::prune() {
  std::erase_if(components_, [](const auto& kv) { return kv.second.is_zero(); });
}

Residue multilinear_part_at(const MultiaffineForm& lambda, const PointTuple& x, const PointTuple& d) {
  const std::size_t k = lambda.k();
  const std::uint32_t p = lambda.p();
  std::int64_t sum = 0;
  for (SlotMask I = 0; I <= full_mask(k); ++I) {
    PointTuple args = x;
    for (auto s : mask_slots(I)) args[s] = add_points(x[s], d[s], p);
    const std::int64_t v = lambda.eval(args);
    sum += ((k - std::popcount(I)) % 2 == 0) ? v : -v;
    if (I == full_mask(k)) break;
  }
  return PrimeField(p).reduce(sum);
}

MultilinearForm extract_multilinear_part(const MultiaffineForm& lambda) {
  MultilinearForm out(lambda.p(), lambda.dims());
  PointTuple zero(lambda.k());
  for (std::size_t s = 0; s < lambda.k(); ++s) zero[s].assign(lambda.dims()[s], 0);
  for_each_index(lambda.dims(), [&](const Index& idx) {
    PointTuple d(lambda.k());
    for (std::size_t s = 0; s < lambda.k(); ++s) d[s] = unit_vector(lambda.dims()[s], idx[s]);
    out.set(idx, multilinear_part_at(lambda, zero, d));
  });
  return out;
}

MultiaffineForm translate_form(const MultilinearForm& alpha, const PointTuple& t) {
  const std::size_t k = alpha.k();
  if (t.size() != k) throw InvalidArgument("translate_form: arity mismatch");
  MultiaffineForm out(alpha.p(), alpha.dims());
  PrimeField F(alpha.p());
  for (SlotMask I = 0; I <= full_mask(k); ++I) {
    std::vector<const Point*> fixed(k, nullptr);
    for (std::size_t s = 0; s < k; ++s)
      if (!(I >> s & 1)) fixed[s] = &t[s];
    MultilinearForm part = alpha.contract_many(fixed);
    if ((k - std::popcount(I)) % 2 == 1) {
      std::vector<Residue> neg = part.tensor();
      for (auto& c : neg) c = F.neg(c);
      part = MultilinearForm(alpha.p(), part.dims(), std::move(neg));
    }
    if (!part.is_zero()) out.add_component(I, part);
    if (I == full_mask(k)) break;
  }
  return out;
}

}  // namespace hoff
