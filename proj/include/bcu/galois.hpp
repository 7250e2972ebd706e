#pragma once

// Arithmetic in binary extension fields GF(2^b), 1 <= b <= 32, and the
// univariate polynomials the encoder constructions are built from.
//
// A Field is a cheap, immutable handle onto shared lookup tables; copies are
// free to pass around and compare. Elements are stored as the low b bits of a
// uint32_t, bit i holding the coefficient of alpha^i.

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bcu {

using Rng = std::mt19937_64;

namespace detail {
struct FieldTables;
}

class FieldElement;

class Field {
 public:
  using Value = std::uint32_t;

  static constexpr unsigned kMinBits = 1;
  static constexpr unsigned kMaxBits = 32;
  static constexpr unsigned kDefaultBits = 16;

  // Throws ParameterError unless 1 <= bits <= 32. The modulus is fixed per
  // degree, so two Fields with the same degree are always interchangeable.
  explicit Field(unsigned bits = kDefaultBits);

  unsigned bits() const noexcept;
  // Full modulus bit pattern including the leading x^b term.
  std::uint64_t modulus() const noexcept;
  std::uint64_t order() const noexcept { return std::uint64_t{1} << bits(); }
  Value mask() const noexcept { return static_cast<Value>(order() - 1); }
  bool contains(Value v) const noexcept { return (v & ~mask()) == 0; }

  static Value add(Value x, Value y) noexcept { return x ^ y; }
  Value mul(Value x, Value y) const noexcept;
  // Throws std::domain_error on zero.
  Value inv(Value x) const;
  Value pow(Value x, std::uint64_t e) const noexcept;

  FieldElement element(Value v) const;
  FieldElement zero() const;
  FieldElement one() const;

  // Lowercase hex, ceil(b/4) digits.
  std::string format(Value v) const;
  // Accepts the format() output (any case, any digit count that fits).
  Value parse(std::string_view text) const;

  // "gf2^<b> <modulus hex>"
  std::string descriptor() const;
  static Field from_descriptor(std::string_view text);

  friend bool operator==(const Field& a, const Field& b) noexcept {
    return a.impl_ == b.impl_;
  }

 private:
  std::shared_ptr<const detail::FieldTables> impl_;
};

// Returns the built-in irreducible modulus for degree `bits`.
std::uint64_t default_modulus(unsigned bits);

// Field element bound to its field. Mixed-field arithmetic throws FieldMismatch.
class FieldElement {
 public:
  FieldElement(Field field, Field::Value value);

  Field::Value value() const noexcept { return value_; }
  const Field& field() const noexcept { return field_; }
  bool is_zero() const noexcept { return value_ == 0; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) noexcept {
    return a.field_ == b.field_ && a.value_ == b.value_;
  }

 private:
  Field field_;
  Field::Value value_;
};

FieldElement add(const FieldElement& x, const FieldElement& y);
FieldElement mul(const FieldElement& x, const FieldElement& y);
FieldElement inv(const FieldElement& x);

inline FieldElement operator+(const FieldElement& x, const FieldElement& y) {
  return add(x, y);
}
// Characteristic 2: subtraction is addition.
inline FieldElement operator-(const FieldElement& x, const FieldElement& y) {
  return add(x, y);
}
inline FieldElement operator*(const FieldElement& x, const FieldElement& y) {
  return mul(x, y);
}

// Polynomial over a Field with coefficients stored lowest degree first. The
// zero polynomial has no coefficients; otherwise the leading one is nonzero.
class Polynomial {
 public:
  explicit Polynomial(Field field) : field_(std::move(field)) {}
  Polynomial(Field field, std::vector<Field::Value> coeffs);

  const Field& field() const noexcept { return field_; }
  // -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_monic() const noexcept { return !coeffs_.empty() && coeffs_.back() == 1; }
  std::span<const Field::Value> coeffs() const noexcept { return coeffs_; }
  Field::Value coefficient(std::size_t i) const noexcept {
    return i < coeffs_.size() ? coeffs_[i] : 0;
  }

  Field::Value evaluate(Field::Value x) const noexcept;
  FieldElement evaluate(const FieldElement& x) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) noexcept {
    return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
  }

 private:
  Field field_;
  std::vector<Field::Value> coeffs_;
};

// prod_i (x + r_i), expanded. Characteristic 2 makes x - r = x + r.
Polynomial poly_from_roots(const Field& field, std::span<const Field::Value> roots);
Polynomial poly_from_roots(const Field& field, std::span<const FieldElement> roots);

// Uniform over all 2^b values; only the standardized mt19937_64 output stream
// is consumed, so sequences are identical across platforms for a given seed.
Field::Value sample_value(const Field& field, Rng& rng);
FieldElement sample_uniform(const Field& field, Rng& rng);

}  // namespace bcu
