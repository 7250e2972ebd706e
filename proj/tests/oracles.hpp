#pragma once

// Independent reference checks used by the tests. Nothing here calls the
// library's elimination code.

#include <cstdint>
#include <random>
#include <vector>

#include "bcu/matrix.hpp"
#include "bcu/pda.hpp"

namespace oracles {

// Literal validity over GF(2): for every node k, no nonzero x on X_k with
// wt(x) <= 2 eps and no y on Y_k satisfy H_X x = H_Y y. Columns are bit masks.
inline bool brute_force_valid_gf2(const bcu::Matrix& h, const bcu::Placement& pl, std::size_t eps) {
  std::vector<std::uint32_t> col(h.cols(), 0);
  for (std::size_t j = 0; j < h.cols(); ++j) {
    for (std::size_t i = 0; i < h.rows(); ++i) col[j] |= static_cast<std::uint32_t>(h(i, j)) << i;
  }
  for (std::size_t k = 0; k < pl.nodes(); ++k) {
    const auto& x = pl.cached[k];
    const auto& y = pl.uncached[k];
    std::vector<bool> reachable(std::size_t{1} << h.rows(), false);
    for (std::uint64_t ym = 0; ym < (std::uint64_t{1} << y.size()); ++ym) {
      std::uint32_t v = 0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        if ((ym >> i) & 1u) v ^= col[y[i]];
      }
      reachable[v] = true;
    }
    for (std::uint64_t xm = 1; xm < (std::uint64_t{1} << x.size()); ++xm) {
      if (static_cast<std::size_t>(__builtin_popcountll(xm)) > 2 * eps) continue;
      std::uint32_t v = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if ((xm >> i) & 1u) v ^= col[x[i]];
      }
      if (reachable[v]) return false;
    }
  }
  return true;
}

inline bcu::Matrix random_gf2(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                              const std::vector<bcu::Label>& labels) {
  std::vector<bcu::Field::Value> d(rows * cols);
  for (auto& v : d) v = static_cast<bcu::Field::Value>(rng() & 1u);
  return bcu::Matrix(bcu::Field(1), rows, cols, std::move(d)).with_labels(labels);
}

}  // namespace oracles
