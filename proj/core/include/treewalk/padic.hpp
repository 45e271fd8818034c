#pragma once

// Bounded-precision p-adic numbers.
//
// A nonzero value is p^v * u where u is a unit known modulo p^N; N is the
// relative precision.  A value whose every known digit is zero is kept in a
// separate ZeroToPrecision state that only records the absolute precision A
// (the value is 0 mod p^A).  Operations never invent digits: cancellation
// raises the valuation and shrinks N, and a nonzero result left with fewer
// than `min_acceptable` digits is an error.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treewalk/rational.hpp"

namespace treewalk {

using u128 = unsigned __int128;

struct PrecisionBudget {
  int working_precision = 48;
  int min_acceptable = 16;

  // Throws InvalidArgument / InvalidPrime when the budget is unusable for p.
  void validate(int prime) const;
  friend bool operator==(const PrecisionBudget&, const PrecisionBudget&) = default;
};

bool is_prime(std::int64_t n) noexcept;

// Largest digit count N with p^N < 2^126 (units live in 128-bit words).
int max_digits(int prime);

// An exact value base^exponent, or zero.  For ZeroToPrecision inputs the
// value is reported as 0 with `upper_bound_only` set and `exponent` giving
// the bound base^exponent.
struct PowerValue {
  int base = 2;
  int exponent = 0;
  bool is_zero = false;
  bool upper_bound_only = false;

  [[nodiscard]] double to_double() const;
  // Throws InvalidArgument when base^|exponent| does not fit in 63 bits.
  [[nodiscard]] Rational to_rational() const;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const PowerValue& a, const PowerValue& b);
  friend std::partial_ordering operator<=>(const PowerValue& a, const PowerValue& b);
};

class PAdic {
 public:
  PAdic() = default;

  static PAdic zero(int prime, int absolute_precision, PrecisionBudget budget = {});
  static PAdic one(int prime, PrecisionBudget budget = {});
  // p^valuation * unit, unit taken modulo p^precision.  The unit may carry
  // factors of p; they are moved into the valuation.
  static PAdic from_parts(int prime, int valuation, u128 unit, int precision,
                          PrecisionBudget budget = {});

  [[nodiscard]] int prime() const noexcept { return prime_; }
  [[nodiscard]] bool is_zero() const noexcept { return prec_ == 0; }
  // Valuation of a nonzero value.  For ZeroToPrecision returns the absolute
  // precision, which is a lower bound on the true valuation.
  [[nodiscard]] int valuation() const noexcept { return val_; }
  [[nodiscard]] int precision() const noexcept { return prec_; }
  [[nodiscard]] int absolute_precision() const noexcept { return is_zero() ? val_ : val_ + prec_; }
  [[nodiscard]] u128 unit() const noexcept { return unit_; }
  [[nodiscard]] PrecisionBudget budget() const noexcept {
    return PrecisionBudget{work_, min_};
  }

  // Digit of p^index in the expansion, nullopt when beyond the known window.
  [[nodiscard]] std::optional<int> digit(int index) const;
  // Unit digits d0..d_{N-1}, least significant first.
  [[nodiscard]] std::vector<int> unit_digits() const;

  // "p^v * (d0.d1.d2)_p" or "O(p^A)" for ZeroToPrecision.
  [[nodiscard]] std::string to_string() const;

  // True when x - y is ZeroToPrecision.
  [[nodiscard]] bool same_to_precision(const PAdic& other) const;

  // Structural equality: same prime, state, valuation, precision and unit.
  friend bool operator==(const PAdic& a, const PAdic& b) noexcept {
    return a.prime_ == b.prime_ && a.val_ == b.val_ && a.prec_ == b.prec_ && a.unit_ == b.unit_;
  }

 private:
  u128 unit_ = 0;
  std::int32_t val_ = 0;
  std::int16_t prec_ = 0;
  std::int16_t prime_ = 2;
  std::int16_t work_ = 48;
  std::int16_t min_ = 16;

  friend PAdic padd(const PAdic&, const PAdic&);
  friend PAdic pmul(const PAdic&, const PAdic&);
  friend PAdic pinv(const PAdic&);
  friend PAdic pneg(const PAdic&);
  friend PAdic reduce_mod(const PAdic&, int);
  friend PAdic truncate_absolute(const PAdic&, int);
  friend PAdic pshift(const PAdic&, int);
  friend PAdic pad_absolute(const PAdic&, int);
};

PAdic padd(const PAdic& x, const PAdic& y);
// x + y without the min_acceptable check.  The result is still exact on the
// digits it reports; it may simply report very few.  Used by predicates that
// only look at leading digits.
PAdic padd_unchecked(const PAdic& x, const PAdic& y);
PAdic pneg(const PAdic& x);
PAdic psub(const PAdic& x, const PAdic& y);
PAdic pmul(const PAdic& x, const PAdic& y);
PAdic pinv(const PAdic& x);
PAdic pdiv(const PAdic& x, const PAdic& y);
// x * p^k, exact (valuation shift).
PAdic pshift(const PAdic& x, int k);
PowerValue pnorm(const PAdic& x);

PAdic from_rational(std::int64_t num, std::int64_t den, int prime, PrecisionBudget budget = {});
PAdic from_rational(const Rational& r, int prime, PrecisionBudget budget = {});
inline PAdic from_int(std::int64_t n, int prime, PrecisionBudget budget = {}) {
  return from_rational(n, 1, prime, budget);
}

// Accepts "num/den", "num", "p^v * (d0.d1...)_p", "(d0.d1...)_p" and "O(p^A)".
PAdic parse_padic(std::string_view text, int prime, PrecisionBudget budget = {});

// Canonical representative of x modulo p^h: keeps only digits of index < h.
// Throws IndistinguishableAtPrecision when some of those digits are unknown.
PAdic reduce_mod(const PAdic& x, int h);
// Forget every digit of index >= h (the result's absolute precision is at
// most h).  Never throws.
PAdic truncate_absolute(const PAdic& x, int h);

// Reads the known digits of x as an exact finite expansion and pads it with
// zero digits up to absolute precision A (truncates when A is smaller).
// Vertex centers are such finite expansions.
PAdic pad_absolute(const PAdic& x, int a);

// v_p(x) >= h, decided exactly.  Throws IndistinguishableAtPrecision when x
// is ZeroToPrecision with absolute precision below h.
bool valuation_at_least(const PAdic& x, int h);

inline PAdic operator+(const PAdic& a, const PAdic& b) { return padd(a, b); }
inline PAdic operator-(const PAdic& a, const PAdic& b) { return psub(a, b); }
inline PAdic operator-(const PAdic& a) { return pneg(a); }
inline PAdic operator*(const PAdic& a, const PAdic& b) { return pmul(a, b); }
inline PAdic operator/(const PAdic& a, const PAdic& b) { return pdiv(a, b); }

}  // namespace treewalk
