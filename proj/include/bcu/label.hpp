#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace bcu {

// Identifier of a subfile (PDA row) or node (PDA column).
//
//   kIndex  a plain integer, written "3"
//   kSet    a sorted set of integers, written "{1,2}"
//   kTuple  an ordered tuple, written "(0,2)"
//
// Labels order lexicographically by kind and then by parts, which puts
// k-subsets in the usual lexicographic enumeration order and Z_q^m vectors in
// odometer order.
struct Label {
  enum class Kind { kIndex, kSet, kTuple };

  Kind kind = Kind::kIndex;
  std::vector<int> parts;

  static Label index(int i) { return {Kind::kIndex, {i}}; }
  static Label set(std::vector<int> members);  // sorts, rejects duplicates
  static Label tuple(std::vector<int> coords) { return {Kind::kTuple, std::move(coords)}; }

  std::string str() const;
  static Label parse(std::string_view text);  // throws ValidationError

  friend auto operator<=>(const Label&, const Label&) = default;
  friend bool operator==(const Label&, const Label&) = default;
};

}  // namespace bcu
