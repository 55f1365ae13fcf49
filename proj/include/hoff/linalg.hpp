#pragma once

#include <vector>

#include "hoff/modp.hpp"

namespace hoff {

using Matrix = std::vector<std::vector<Residue>>;

/// Row-reduces a copy of `rows` over F_p and returns its rank.
inline std::size_t rank_mod_p(Matrix rows, std::uint32_t p) {
  PrimeField F(p);
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    const Residue inv = F.inv(rows[rank][c]);
    for (auto& v : rows[rank]) v = F.mul(v, inv);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      const Residue f = rows[r][c];
      for (std::size_t j = c; j < cols; ++j) rows[r][j] = F.sub(rows[r][j], F.mul(f, rows[rank][j]));
    }
    ++rank;
  }
  return rank;
}

}  // namespace hoff
