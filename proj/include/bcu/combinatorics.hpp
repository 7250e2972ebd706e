#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bcu {

// C(n, k); 0 when k < 0 or k > n. Throws std::overflow_error past 2^64.
inline std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 acc = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      throw std::overflow_error("binomial coefficient overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(acc);
}

// Iterates the k-subsets of {0, ..., n-1} in lexicographic order.
//
//   for (Combinations c(n, k); c; c.next()) use(c.current());
class Combinations {
 public:
  Combinations(std::size_t n, std::size_t k) : n_(n), idx_(k), valid_(k <= n) {
    for (std::size_t i = 0; i < k; ++i) idx_[i] = i;
  }

  explicit operator bool() const noexcept { return valid_; }
  const std::vector<std::size_t>& current() const noexcept { return idx_; }

  void next() {
    const std::size_t k = idx_.size();
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (idx_[i] != i + n_ - k) {
        ++idx_[i];
        for (std::size_t j = i + 1; j < k; ++j) idx_[j] = idx_[j - 1] + 1;
        return;
      }
    }
    valid_ = false;
  }

 private:
  std::size_t n_;
  std::vector<std::size_t> idx_;
  bool valid_;
};

// Integer power with 0^0 = 1.
inline std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) {
      throw std::overflow_error("integer power overflows 64 bits");
    }
    r *= base;
  }
  return r;
}

}  // namespace bcu
