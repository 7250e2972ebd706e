#pragma once

// Placement delivery arrays and the cache placements they induce.
//
// A PDA is an F x K array whose rows are subfiles and columns are caching
// nodes. A star at (f, k) means node k caches subfile f. Integer entries drive
// the delivery phase, which this library only validates; family constructors
// leave them unknown ("?").

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcu/label.hpp"

namespace bcu {

struct Cell {
  enum class Kind { kStar, kInt, kUnknown };

  Kind kind = Kind::kUnknown;
  int value = 0;  // meaningful for kInt only

  static Cell star() { return {Kind::kStar, 0}; }
  static Cell integer(int v) { return {Kind::kInt, v}; }
  static Cell unknown() { return {Kind::kUnknown, 0}; }

  bool is_star() const noexcept { return kind == Kind::kStar; }
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Unvalidated array as read from a file or built by hand.
struct RawGrid {
  std::vector<Label> row_labels;
  std::vector<Label> col_labels;
  std::vector<std::vector<Cell>> cells;  // cells[f][k]
  std::optional<std::size_t> declared_symbols;  // S from a file header
};

class Pda {
 public:
  std::size_t subfiles() const noexcept { return row_labels_.size(); }  // F
  std::size_t nodes() const noexcept { return col_labels_.size(); }     // K
  std::size_t cache_size() const noexcept { return cache_size_; }       // Z
  // S; absent when any delivery integer is unknown.
  std::optional<std::size_t> symbols() const noexcept { return symbols_; }
  // Stars per row (r); absent when rows disagree.
  std::optional<std::size_t> replication() const noexcept { return replication_; }
  bool row_regular() const noexcept { return replication_.has_value(); }
  // Every row has a different set of caching nodes.
  bool distinct_supports() const noexcept { return distinct_supports_; }
  bool has_integers() const noexcept { return symbols_.has_value(); }

  const std::vector<Label>& subfile_labels() const noexcept { return row_labels_; }
  const std::vector<Label>& node_labels() const noexcept { return col_labels_; }
  const Cell& cell(std::size_t f, std::size_t k) const { return cells_.at(f).at(k); }
  bool is_star(std::size_t f, std::size_t k) const { return cell(f, k).is_star(); }

  // Non-fatal findings such as row irregularity.
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  friend bool operator==(const Pda&, const Pda&) = default;

 private:
  friend Pda pda_validate(RawGrid grid);

  std::vector<Label> row_labels_;
  std::vector<Label> col_labels_;
  std::vector<std::vector<Cell>> cells_;
  std::size_t cache_size_ = 0;
  std::optional<std::size_t> symbols_;
  std::optional<std::size_t> replication_;
  bool distinct_supports_ = false;
  std::vector<std::string> warnings_;
};

// Checks the PDA conditions and derives (K, F, Z, S, r). Throws
// ValidationError when columns hold different numbers of stars, or, for arrays
// with integer entries, when an integer in 0..S-1 is missing or two equal
// integers are not in a star-completed "rectangle". Row irregularity only adds
// a warning.
Pda pda_validate(RawGrid grid);

// Maddah-Ali--Niesen placement: subfiles are t-subsets of {1..K}, node k
// caches f iff k is in f.
Pda pda_mn(std::size_t nodes, std::size_t t);

// Hypergraph family: subfiles are a-subsets of {1..n}, nodes are b-subsets,
// node k caches f iff they intersect.
Pda pda_hypergraph(std::size_t n, std::size_t a, std::size_t b);

// Grouping family over Z_q^m: node (u, v) with u <= m caches the vectors whose
// u-th coordinate is v; node (m+1, v) caches those whose coordinate sum is v.
Pda pda_grouping(std::size_t q, std::size_t m);

// The cache placement X = (X_k) with its complements. All sets hold indices
// into subfile_labels / node_labels, sorted ascending.
struct Placement {
  std::vector<Label> subfile_labels;
  std::vector<Label> node_labels;
  std::vector<std::vector<std::size_t>> cached;      // X_k
  std::vector<std::vector<std::size_t>> uncached;    // Y_k = F \ X_k
  std::vector<std::vector<std::size_t>> missing_at;  // I_f = {k : f not in X_k}

  std::size_t subfiles() const noexcept { return subfile_labels.size(); }
  std::size_t nodes() const noexcept { return node_labels.size(); }
  // Common |X_k|; throws ValidationError when caches differ in size.
  std::size_t cache_size() const;
  std::optional<std::size_t> replication() const;
  bool distinct_supports() const;

  // Builds the derived sets from X alone.
  static Placement from_cached(std::vector<Label> subfile_labels,
                               std::vector<Label> node_labels,
                               std::vector<std::vector<std::size_t>> cached);
};

Placement placement_of(const Pda& pda);

// Text form:
//   pda <F> <K> [S]
//   <F row labels>
//   <K column labels>
//   <F lines of K tokens: '*', a decimal integer, or '?'>
std::string pda_to_text(const Pda& pda);
Pda pda_from_text(std::string_view text);
void pda_to_file(const Pda& pda, const std::string& path);
Pda pda_from_file(const std::string& path);

}  // namespace bcu
