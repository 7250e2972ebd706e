#include "bcu/galois.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "bcu/error.hpp"

namespace bcu {

namespace {

// Lowest-weight irreducible polynomial of each degree, ties broken by the
// smallest integer value. Index = degree.
constexpr std::array<std::uint64_t, 33> kModulus = {
    0x0,        0x3,        0x7,        0xb,         0x13,       0x25,
    0x43,       0x83,       0x11b,      0x203,       0x409,      0x805,
    0x1009,     0x201b,     0x4021,     0x8003,      0x1002b,    0x20009,
    0x40009,    0x80027,    0x100009,   0x200005,    0x400003,   0x800021,
    0x100001b,  0x2000009,  0x400001b,  0x8000027,   0x10000003, 0x20000005,
    0x40000003, 0x80000009, 0x10000008d,
};

constexpr unsigned kTableBits = 16;

// Degree of a GF(2)[x] polynomial held in a bit pattern; -1 for zero.
int poly_degree(std::uint64_t p) {
  return p == 0 ? -1 : 63 - std::countl_zero(p);
}

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
  const int dm = poly_degree(m);
  for (int da = poly_degree(a); da >= dm; da = poly_degree(a)) {
    a ^= m << (da - dm);
  }
  return a;
}

// Exhaustive trial division by every polynomial of degree 1..deg/2.
bool irreducible_by_trial(std::uint64_t m) {
  const int deg = poly_degree(m);
  if (deg < 1) return false;
  for (std::uint64_t d = 2; poly_degree(d) <= deg / 2; ++d) {
    if (poly_mod(m, d) == 0) return false;
  }
  return true;
}

std::uint32_t clmul_reduce(std::uint32_t x, std::uint32_t y, unsigned bits,
                           std::uint64_t modulus) {
  // 4-bit windowed carryless product, then fold the bits above x^bits back
  // through the low part of the modulus.
  std::uint64_t table[16];
  table[0] = 0;
  for (unsigned i = 1; i < 16; ++i) table[i] = (i & 1u) ? table[i - 1] ^ x : table[i >> 1] << 1;
  std::uint64_t acc = 0;
  for (int shift = 28; shift >= 0; shift -= 4) acc = (acc << 4) ^ table[(y >> shift) & 15u];
  const std::uint64_t low = modulus ^ (std::uint64_t{1} << bits);
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  while (acc >> bits) {
    const std::uint64_t hi = acc >> bits;
    acc &= mask;
    for (std::uint64_t l = low; l != 0; l &= l - 1) acc ^= hi << std::countr_zero(l);
  }
  return static_cast<std::uint32_t>(acc);
}

}  // namespace

namespace detail {

struct FieldTables {
  unsigned bits = 0;
  std::uint64_t modulus = 0;
  // Present only for bits <= kTableBits. exp has 2*(q-1) entries so that
  // exp[log a + log b] needs no reduction.
  std::vector<std::uint32_t> exp;
  std::vector<std::uint32_t> log;

  bool has_tables() const noexcept { return !log.empty(); }

  std::uint32_t slow_mul(std::uint32_t x, std::uint32_t y) const {
    return clmul_reduce(x, y, bits, modulus);
  }
};

}  // namespace detail

namespace {

std::shared_ptr<const detail::FieldTables> build_tables(unsigned bits) {
  auto t = std::make_shared<detail::FieldTables>();
  t->bits = bits;
  t->modulus = kModulus[bits];
  if (bits <= kTableBits) {
    if (!irreducible_by_trial(t->modulus)) {
      throw std::logic_error("built-in modulus for gf2^" + std::to_string(bits) +
                             " is reducible");
    }
    const std::uint32_t n = (1u << bits) - 1;  // multiplicative group order
    if (n == 1) {
      t->exp = {1, 1};
      t->log = {0, 0};
      return t;
    }
    // The modulus need not be primitive, so search for a generator.
    for (std::uint32_t g = 2; g <= n; ++g) {
      std::vector<std::uint32_t> exp(2 * static_cast<std::size_t>(n));
      std::uint32_t x = 1;
      std::uint32_t i = 0;
      bool ok = true;
      for (; i < n; ++i) {
        if (i > 0 && x == 1) {
          ok = false;
          break;
        }
        exp[i] = x;
        x = t->slow_mul(x, g);
      }
      if (!ok) continue;
      std::vector<std::uint32_t> log(static_cast<std::size_t>(n) + 1, 0);
      for (std::uint32_t k = 0; k < n; ++k) {
        exp[n + k] = exp[k];
        log[exp[k]] = k;
      }
      t->exp = std::move(exp);
      t->log = std::move(log);
      return t;
    }
    throw std::logic_error("no generator found for gf2^" + std::to_string(bits));
  }
  return t;
}

std::shared_ptr<const detail::FieldTables> tables_for(unsigned bits) {
  static std::array<std::shared_ptr<const detail::FieldTables>, 33> cache;
  static std::array<std::once_flag, 33> once;
  std::call_once(once[bits], [bits] { cache[bits] = build_tables(bits); });
  return cache[bits];
}

}  // namespace

std::uint64_t default_modulus(unsigned bits) {
  if (bits < Field::kMinBits || bits > Field::kMaxBits) {
    throw ParameterError("field degree must be in 1..32, got " + std::to_string(bits));
  }
  return kModulus[bits];
}

Field::Field(unsigned bits) {
  if (bits < kMinBits || bits > kMaxBits) {
    throw ParameterError("field degree must be in 1..32, got " + std::to_string(bits));
  }
  impl_ = tables_for(bits);
}

unsigned Field::bits() const noexcept { return impl_->bits; }

std::uint64_t Field::modulus() const noexcept { return impl_->modulus; }

Field::Value Field::mul(Value x, Value y) const noexcept {
  if (x == 0 || y == 0) return 0;
  const auto& t = *impl_;
  if (t.has_tables()) return t.exp[t.log[x] + t.log[y]];
  return t.slow_mul(x, y);
}

Field::Value Field::pow(Value x, std::uint64_t e) const noexcept {
  Value result = 1;
  while (e != 0) {
    if (e & 1u) result = mul(result, x);
    x = mul(x, x);
    e >>= 1;
  }
  return result;
}

Field::Value Field::inv(Value x) const {
  if (x == 0) throw std::domain_error("inverse of zero");
  const auto& t = *impl_;
  if (t.has_tables()) {
    const std::uint32_t n = static_cast<std::uint32_t>(order() - 1);
    return t.exp[(n - t.log[x]) % n];
  }
  return pow(x, order() - 2);
}

FieldElement Field::element(Value v) const { return FieldElement(*this, v); }
FieldElement Field::zero() const { return FieldElement(*this, 0); }
FieldElement Field::one() const { return FieldElement(*this, 1); }

std::string Field::format(Value v) const {
  const unsigned digits = (bits() + 3) / 4;
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(digits, '0');
  for (unsigned i = 0; i < digits; ++i) {
    out[digits - 1 - i] = kHex[(v >> (4 * i)) & 0xfu];
  }
  return out;
}

Field::Value Field::parse(std::string_view text) const {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, 16);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError("bad field element '" + std::string(text) + "'");
  }
  if (v >= order()) {
    throw ValidationError("element '" + std::string(text) + "' out of range for gf2^" +
                          std::to_string(bits()));
  }
  return static_cast<Value>(v);
}

std::string Field::descriptor() const {
  std::ostringstream os;
  os << "gf2^" << bits() << ' ' << std::hex << modulus();
  return os.str();
}

Field Field::from_descriptor(std::string_view text) {
  if (text.substr(0, 4) != "gf2^") {
    throw ValidationError("bad field descriptor '" + std::string(text) + "'");
  }
  text.remove_prefix(4);
  unsigned bits = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), bits);
  if (ec != std::errc{}) {
    throw ValidationError("bad field degree in descriptor");
  }
  Field f(bits);
  std::string_view rest(ptr, text.data() + text.size() - ptr);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  if (!rest.empty()) {
    std::uint64_t m = 0;
    auto [p2, ec2] = std::from_chars(rest.data(), rest.data() + rest.size(), m, 16);
    if (ec2 != std::errc{} || m != f.modulus()) {
      throw ValidationError("descriptor modulus does not match built-in modulus " +
                            f.descriptor());
    }
  }
  return f;
}

FieldElement::FieldElement(Field field, Field::Value value)
    : field_(std::move(field)), value_(value) {
  if (!field_.contains(value)) {
    throw std::out_of_range("value does not fit gf2^" + std::to_string(field_.bits()));
  }
}

namespace {
void require_same(const FieldElement& x, const FieldElement& y) {
  if (!(x.field() == y.field())) {
    throw FieldMismatch("operands from gf2^" + std::to_string(x.field().bits()) +
                        " and gf2^" + std::to_string(y.field().bits()));
  }
}
}  // namespace

FieldElement add(const FieldElement& x, const FieldElement& y) {
  require_same(x, y);
  return FieldElement(x.field(), Field::add(x.value(), y.value()));
}

FieldElement mul(const FieldElement& x, const FieldElement& y) {
  require_same(x, y);
  return FieldElement(x.field(), x.field().mul(x.value(), y.value()));
}

FieldElement inv(const FieldElement& x) {
  return FieldElement(x.field(), x.field().inv(x.value()));
}

Polynomial::Polynomial(Field field, std::vector<Field::Value> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  for (auto c : coeffs_) {
    if (!field_.contains(c)) throw std::out_of_range("coefficient outside field");
  }
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Field::Value Polynomial::evaluate(Field::Value x) const noexcept {
  Field::Value acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = field_.mul(acc, x) ^ *it;
  }
  return acc;
}

FieldElement Polynomial::evaluate(const FieldElement& x) const {
  if (!(x.field() == field_)) throw FieldMismatch("evaluation point from another field");
  return FieldElement(field_, evaluate(x.value()));
}

Polynomial poly_from_roots(const Field& field, std::span<const Field::Value> roots) {
  // Multiply by (x + r) one root at a time: c'[i] = c[i-1] + r * c[i].
  std::vector<Field::Value> c(roots.size() + 1, 0);
  c[0] = 1;
  std::size_t deg = 0;
  for (auto r : roots) {
    if (!field.contains(r)) throw std::out_of_range("root outside field");
    c[deg + 1] = c[deg];
    for (std::size_t i = deg; i > 0; --i) {
      c[i] = c[i - 1] ^ field.mul(r, c[i]);
    }
    c[0] = field.mul(r, c[0]);
    ++deg;
  }
  return Polynomial(field, std::move(c));
}

Polynomial poly_from_roots(const Field& field, std::span<const FieldElement> roots) {
  std::vector<Field::Value> values;
  values.reserve(roots.size());
  for (const auto& r : roots) {
    if (!(r.field() == field)) throw FieldMismatch("root from another field");
    values.push_back(r.value());
  }
  return poly_from_roots(field, std::span<const Field::Value>(values));
}

Field::Value sample_value(const Field& field, Rng& rng) {
  return static_cast<Field::Value>(rng() & field.mask());
}

FieldElement sample_uniform(const Field& field, Rng& rng) {
  return FieldElement(field, sample_value(field, rng));
}

}  // namespace bcu
