#pragma once

// Lower and upper bounds on the optimal linear update cost l*, the exact
// values known for near-extreme cache sizes, and a brute-force optimum over
// GF(2) for tiny instances.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bcu/matrix.hpp"
#include "bcu/pda.hpp"
#include "bcu/update_code.hpp"

namespace bcu {

struct BoundEntry {
  std::string name;
  std::uint64_t value = 0;
  std::string basis;  // one-line description of the argument behind it
};

// Formula evaluation for an asymptotic regime; not a bound on this instance.
struct Diagnostic {
  std::string name;
  double value = 0.0;
  std::string regime;
};

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};
Rational make_rational(std::uint64_t num, std::uint64_t den);

struct BoundReport {
  std::vector<BoundEntry> lower;
  std::vector<BoundEntry> upper;
  std::optional<std::uint64_t> exact;
  std::string exact_basis;  // name of the lower bound meeting an upper bound
  Rational gap;             // best upper / best lower
  std::vector<Diagnostic> diagnostics;

  std::uint64_t best_lower() const;
  std::uint64_t best_upper() const;
};

// min{2 eps (K - r) + 1, F - (Z - 2 eps)^+}, dropping the first term when the
// rows do not have distinct supports. Throws ParameterError unless K Z = r F.
std::uint64_t upper_bound_joint(std::uint64_t nodes, std::uint64_t subfiles,
                                std::uint64_t cache_size, std::uint64_t replication,
                                std::uint64_t epsilon, bool distinct_supports);

// F when Z <= 2 eps; otherwise 2 eps, 2 eps + 1, 2 eps + 2 for Z = F, F - 1,
// F - 2; otherwise absent.
std::optional<std::uint64_t> exact_cases(std::uint64_t subfiles, std::uint64_t cache_size,
                                         std::uint64_t epsilon);

// sum_i min{2 eps, |X_{pi_i} \ (X_{pi_1} u ... u X_{pi_{i-1}})|}. Throws
// ParameterError for repeated or out-of-range nodes.
std::uint64_t bound_generic(const Placement& placement, std::uint64_t epsilon,
                            std::span<const std::size_t> sequence);

struct SequenceBound {
  std::uint64_t value = 0;
  std::vector<std::size_t> sequence;
};

// Appends the node with the largest term min{2 eps, new}, preferring the
// fewest new subfiles and then the smallest label, until every term is 0.
SequenceBound bound_generic_greedy(const Placement& placement, std::uint64_t epsilon);

// Maximum over all orderings of the nodes. Throws BudgetExceeded for K > 8.
SequenceBound bound_generic_best(const Placement& placement, std::uint64_t epsilon);

// |X_S| + min{2 eps, F - |X_S|} where S holds the nodes caching <= 2 eps
// subfiles.
std::uint64_t bound_xs(const Placement& placement, std::uint64_t epsilon);

// Smallest a0 with C(a0, k) >= target; absent when k == 0 and target > 1.
std::optional<std::uint64_t> smallest_binomial_row(std::uint64_t k, std::uint64_t target);

struct HypergraphBound {
  std::uint64_t value = 0;                  // the window sum
  std::optional<std::uint64_t> a0;
  std::optional<std::uint64_t> closed_form;  // when a0 <= n - b
  bool exact = false;                        // a == 1
};

// 2 eps + sum_{j=0}^{n-b-1} min{2 eps, C(j, a-1)} for the hypergraph family.
// Throws ParameterError unless a + b <= n and Z >= 2 eps + 1.
HypergraphBound bound_hypergraph(std::uint64_t n, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t epsilon);

struct MnBound {
  std::uint64_t value = 0;
  bool exact = false;
  std::optional<std::uint64_t> a0;
  std::optional<std::uint64_t> relaxed;  // 2 eps (K - 1 - a'), a' from the root estimate
  std::vector<Diagnostic> diagnostics;
};

MnBound bound_mn(std::uint64_t nodes, std::uint64_t t, std::uint64_t epsilon);

struct UvProfile {
  std::uint64_t q = 0;
  std::uint64_t m = 0;
  // x[v * m + (u - 1)] for u in 1..m, v in 0..q-1, in sequence order.
  std::vector<std::uint64_t> x;
  std::uint64_t u0 = 0;
  std::uint64_t v0 = 0;

  std::uint64_t at(std::uint64_t u, std::uint64_t v) const { return x.at(v * m + (u - 1)); }
};

struct UvBound {
  std::uint64_t value = 0;        // full sequence sum
  std::uint64_t closed_form = 0;  // 2 eps (v0 (m-1) + u0 + q - 2)
  bool exact = false;             // Z <= 2 eps
  std::optional<UvProfile> profile;
  std::vector<Diagnostic> diagnostics;
};

// Sequence bound for the grouping family with the profile of new-subfile
// counts. Checks the profile identities on every call and throws
// std::logic_error if one fails.
UvBound bound_uv(std::uint64_t q, std::uint64_t m, std::uint64_t epsilon);

struct OracleResult {
  std::size_t length = 0;
  Matrix witness;
};

inline constexpr std::size_t kOracleMaxSubfiles = 8;
inline constexpr std::size_t kOracleMaxLength = 6;

// Least l <= l_max for which some l x F binary matrix is a valid encoder, or
// absent. Only full-rank matrices in reduced row echelon form are tried:
// validity depends on the row space alone. Throws BudgetExceeded when F > 8
// or l_max > 6.
std::optional<OracleResult> oracle_exhaustive_lopt(const Placement& placement,
                                                   std::size_t epsilon, std::size_t l_max,
                                                   unsigned threads = 1);

struct FamilyHint {
  enum class Kind { kGeneric, kMn, kHypergraph, kGrouping };

  Kind kind = Kind::kGeneric;
  std::uint64_t p1 = 0;  // K | n | q
  std::uint64_t p2 = 0;  // t | a | m
  std::uint64_t p3 = 0;  //   | b |

  static FamilyHint generic() { return {}; }
  static FamilyHint mn(std::uint64_t nodes, std::uint64_t t) { return {Kind::kMn, nodes, t, 0}; }
  static FamilyHint hypergraph(std::uint64_t n, std::uint64_t a, std::uint64_t b) {
    return {Kind::kHypergraph, n, a, b};
  }
  static FamilyHint grouping(std::uint64_t q, std::uint64_t m) {
    return {Kind::kGrouping, q, m, 0};
  }
};

// Every applicable bound for the problem. Throws ParameterError when the hint
// disagrees with the placement's dimensions and std::logic_error when a lower
// bound exceeds an upper bound.
BoundReport report(const UpdateProblem& problem, const FamilyHint& hint = {});

// Rows "kind,name,value,basis" (kind is lower, upper, exact or diagnostic).
std::string report_csv(const BoundReport& r);
std::string report_table(const BoundReport& r);

}  // namespace bcu
