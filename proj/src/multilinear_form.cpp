#include "hoff/multilinear_form.hpp"

#include <string>

namespace hoff {
namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

}  // namespace

MultilinearForm::MultilinearForm(std::uint32_t p, std::vector<std::size_t> dims)
    : p_(PrimeField(p).p()), dims_(std::move(dims)), tensor_(product(dims_), 0) {}

MultilinearForm::MultilinearForm(std::uint32_t p, std::vector<std::size_t> dims, std::vector<Residue> tensor)
    : p_(PrimeField(p).p()), dims_(std::move(dims)), tensor_(std::move(tensor)) {
  if (tensor_.size() != product(dims_))
    throw InvalidArgument("tensor has " + std::to_string(tensor_.size()) + " entries, shape needs " +
                          std::to_string(product(dims_)));
  for (auto& c : tensor_) c %= p_;
}

MultilinearForm MultilinearForm::random(std::uint32_t p, std::vector<std::size_t> dims, Rng& rng) {
  MultilinearForm f(p, std::move(dims));
  for (auto& c : f.tensor_) c = rng.residue(p);
  return f;
}

MultilinearForm MultilinearForm::dot_product(std::uint32_t p, std::size_t k, std::size_t dim) {
  MultilinearForm f(p, std::vector<std::size_t>(k, dim));
  for (std::size_t i = 0; i < dim; ++i) f.set(Index(k, i), 1);
  return f;
}

std::size_t MultilinearForm::offset(const Index& idx) const {
  if (idx.size() != dims_.size()) throw InvalidArgument("index arity mismatch");
  std::size_t off = 0;
  for (std::size_t s = 0; s < dims_.size(); ++s) {
    if (idx[s] >= dims_[s]) throw InvalidArgument("index out of range in slot " + std::to_string(s));
    off = off * dims_[s] + idx[s];
  }
  return off;
}

Index MultilinearForm::unflatten(std::size_t off) const {
  Index idx(dims_.size());
  for (std::size_t s = dims_.size(); s-- > 0;) {
    idx[s] = off % dims_[s];
    off /= dims_[s];
  }
  return idx;
}

void MultilinearForm::add_to(const Index& idx, Residue c) {
  auto& e = tensor_[offset(idx)];
  e = static_cast<Residue>((std::uint64_t{e} + c) % p_);
}

bool MultilinearForm::is_zero() const {
  for (auto c : tensor_)
    if (c) return false;
  return true;
}

std::vector<std::pair<Index, Residue>> MultilinearForm::entries() const {
  std::vector<std::pair<Index, Residue>> out;
  for (std::size_t off = 0; off < tensor_.size(); ++off)
    if (tensor_[off]) out.emplace_back(unflatten(off), tensor_[off]);
  return out;
}

MultilinearForm MultilinearForm::contract(std::size_t slot, const Point& v) const {
  if (slot >= dims_.size()) throw InvalidArgument("contract: slot out of range");
  if (v.size() != dims_[slot]) throw InvalidArgument("contract: dimension mismatch in slot " + std::to_string(slot));
  std::size_t outer = 1, inner = 1;
  for (std::size_t s = 0; s < slot; ++s) outer *= dims_[s];
  for (std::size_t s = slot + 1; s < dims_.size(); ++s) inner *= dims_[s];
  const std::size_t d = dims_[slot];
  std::vector<std::uint64_t> acc(outer * inner, 0);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t j = 0; j < d; ++j) {
      if (v[j] == 0) continue;
      const Residue* src = &tensor_[(o * d + j) * inner];
      std::uint64_t* dst = &acc[o * inner];
      for (std::size_t i = 0; i < inner; ++i) dst[i] += std::uint64_t{src[i]} * v[j];
    }
  std::vector<std::size_t> dims;
  for (std::size_t s = 0; s < dims_.size(); ++s)
    if (s != slot) dims.push_back(dims_[s]);
  std::vector<Residue> t(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) t[i] = static_cast<Residue>(acc[i] % p_);
  return MultilinearForm(p_, std::move(dims), std::move(t));
}

MultilinearForm MultilinearForm::contract_many(const std::vector<const Point*>& fixed) const {
  if (fixed.size() != dims_.size()) throw InvalidArgument("contract_many: arity mismatch");
  MultilinearForm out = *this;
  // contract from the highest slot down so lower slot numbers stay valid
  for (std::size_t s = dims_.size(); s-- > 0;)
    if (fixed[s]) out = out.contract(s, *fixed[s]);
  return out;
}

Residue MultilinearForm::eval(const PointTuple& x) const {
  if (x.size() != dims_.size()) throw InvalidArgument("eval: expected " + std::to_string(dims_.size()) + " arguments");
  for (std::size_t s = 0; s < dims_.size(); ++s)
    if (x[s].size() != dims_[s]) throw InvalidArgument("eval: dimension mismatch in slot " + std::to_string(s));
  // contract the last slot repeatedly; the running tensor stays row-major
  std::vector<std::uint64_t> cur(tensor_.begin(), tensor_.end());
  std::size_t size = cur.size();
  for (std::size_t s = dims_.size(); s-- > 0;) {
    const std::size_t d = dims_[s];
    const std::size_t outer = d ? size / d : 0;
    for (std::size_t o = 0; o < outer; ++o) {
      std::uint64_t sum = 0;
      for (std::size_t j = 0; j < d; ++j) sum += (cur[o * d + j] % p_) * x[s][j];
      cur[o] = sum % p_;
    }
    size = outer;
  }
  return size ? static_cast<Residue>(cur[0] % p_) : 0;
}

Point MultilinearForm::last_slot_map(const PointTuple& head) const {
  if (dims_.empty()) throw InvalidArgument("last_slot_map: form has no slots");
  if (head.size() + 1 != dims_.size()) throw InvalidArgument("last_slot_map: expected k-1 arguments");
  std::vector<const Point*> fixed(dims_.size(), nullptr);
  for (std::size_t s = 0; s < head.size(); ++s) {
    if (head[s].size() != dims_[s]) throw InvalidArgument("last_slot_map: dimension mismatch");
    fixed[s] = &head[s];
  }
  return contract_many(fixed).tensor();
}

void for_each_index(const std::vector<std::size_t>& dims, const std::function<void(const Index&)>& visit) {
  for (auto d : dims)
    if (d == 0) return;
  Index idx(dims.size(), 0);
  while (true) {
    visit(idx);
    std::size_t s = dims.size();
    while (s > 0) {
      --s;
      if (++idx[s] < dims[s]) break;
      idx[s] = 0;
      if (s == 0) return;
    }
    if (dims.empty()) return;
  }
}

}  // namespace hoff
