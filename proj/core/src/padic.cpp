#include "treewalk/padic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "treewalk/error.hpp"
#include "text_util.hpp"

namespace treewalk {
namespace {

constexpr int kSaturate = 1 << 24;

int clamp_exponent(long long e) {
  return static_cast<int>(std::clamp<long long>(e, -kSaturate, kSaturate));
}

int ctz128(u128 x) {
  const auto lo = static_cast<std::uint64_t>(x);
  if (lo != 0) return __builtin_ctzll(lo);
  return 64 + __builtin_ctzll(static_cast<std::uint64_t>(x >> 64));
}

// p^k for k <= max_digits(p) + 1.
const std::array<u128, 130>& pow_table(int p) {
  thread_local int cached = 0;
  thread_local std::array<u128, 130> table{};
  if (cached != p) {
    const int n = max_digits(p);
    table.fill(0);
    table[0] = 1;
    for (int k = 1; k <= n + 1 && k < 130; ++k) table[k] = table[k - 1] * static_cast<u128>(p);
    cached = p;
  }
  return table;
}

u128 modulus(int p, int k) {
  if (p == 2) return static_cast<u128>(1) << k;
  return pow_table(p)[k];
}

u128 mod_reduce(u128 a, int p, int k) {
  if (p == 2) return k >= 128 ? a : (a & ((static_cast<u128>(1) << k) - 1));
  return a % pow_table(p)[k];
}

u128 mulmod(u128 a, u128 b, int p, int k) {
  if (p == 2) return mod_reduce(a * b, 2, k);
  const u128 m = pow_table(p)[k];
  if (m <= (static_cast<u128>(1) << 64)) return (a * b) % m;
  // m < 2^126, so r + r and r + a never overflow.
  u128 r = 0;
  int top = 127;
  while (top > 0 && ((b >> top) & 1) == 0) --top;
  for (int bit = top; bit >= 0; --bit) {
    r += r;
    if (r >= m) r -= m;
    if ((b >> bit) & 1) {
      r += a;
      if (r >= m) r -= m;
    }
  }
  return r;
}

u128 invmod(u128 unit, int p, int k) {
  // Inverse modulo p, then Newton lifting x <- x (2 - u x).
  const auto u0 = static_cast<std::int64_t>(unit % static_cast<u128>(p));
  std::int64_t inv0 = 1;
  for (std::int64_t c = 1; c < p; ++c) {
    if ((u0 * c) % p == 1) {
      inv0 = c;
      break;
    }
  }
  u128 x = static_cast<u128>(inv0);
  int known = 1;
  while (known < k) {
    known = std::min(2 * known, k);
    const u128 m = modulus(p, known);
    const u128 ux = mulmod(mod_reduce(unit, p, known), x, p, known);
    const u128 two_minus = (static_cast<u128>(2) + m - ux) % m;
    x = mulmod(x, two_minus, p, known);
  }
  return mod_reduce(x, p, k);
}

struct Parts {
  int val;
  u128 unit;
  int prec;
};

// Move factors of p from the unit into the valuation.
Parts strip(int p, int val, u128 unit, int prec) {
  if (unit == 0) return {val + prec, 0, 0};
  if (p == 2) {
    const int z = ctz128(unit);
    return {val + z, unit >> z, prec - z};
  }
  const auto up = static_cast<u128>(p);
  while (unit % up == 0) {
    unit /= up;
    ++val;
    --prec;
  }
  return {val, unit, prec};
}

void check_same_prime(const PAdic& x, const PAdic& y) {
  if (x.prime() != y.prime()) {
    fail(ErrorCode::PrimeMismatch,
         "p=" + std::to_string(x.prime()) + " vs p=" + std::to_string(y.prime()));
  }
}

int vp(std::int64_t n, int p, std::int64_t& rest) {
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  rest = n;
  return v;
}

u128 signed_mod(std::int64_t n, int p, int k) {
  const u128 m = modulus(p, k);
  const u128 mag = static_cast<u128>(n < 0 ? -static_cast<__int128>(n) : static_cast<__int128>(n));
  const u128 r = mag % m;
  if (n >= 0 || r == 0) return r;
  return m - r;
}

}  // namespace

bool is_prime(std::int64_t n) noexcept {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

int max_digits(int prime) {
  if (prime < 2) fail(ErrorCode::InvalidPrime, std::to_string(prime));
  int n = 0;
  u128 pw = 1;
  const u128 limit = static_cast<u128>(1) << 126;
  while (pw <= limit / static_cast<u128>(prime) && pw * static_cast<u128>(prime) < limit) {
    pw *= static_cast<u128>(prime);
    ++n;
  }
  return n;
}

void PrecisionBudget::validate(int prime) const {
  if (!is_prime(prime)) fail(ErrorCode::InvalidPrime, std::to_string(prime) + " is not prime");
  if (working_precision < 1 || working_precision > max_digits(prime)) {
    fail(ErrorCode::InvalidArgument,
         "working precision " + std::to_string(working_precision) + " outside [1, " +
             std::to_string(max_digits(prime)) + "] for p=" + std::to_string(prime));
  }
  if (min_acceptable < 1 || min_acceptable > working_precision) {
    fail(ErrorCode::InvalidArgument, "min_acceptable must lie in [1, working_precision]");
  }
}

// ---------------------------------------------------------------------------
// PowerValue

double PowerValue::to_double() const {
  if (is_zero) return 0.0;
  return std::pow(static_cast<double>(base), exponent);
}

Rational PowerValue::to_rational() const {
  if (is_zero) return Rational(0);
  std::int64_t mag = 1;
  for (int i = 0; i < std::abs(exponent); ++i) {
    if (mag > std::numeric_limits<std::int64_t>::max() / base) {
      fail(ErrorCode::InvalidArgument, "power does not fit a 64-bit rational");
    }
    mag *= base;
  }
  return exponent >= 0 ? Rational(mag) : Rational(1, mag);
}

std::string PowerValue::to_string() const {
  if (is_zero) {
    return upper_bound_only ? "0 (<= " + std::to_string(base) + "^" + std::to_string(exponent) + ")"
                            : "0";
  }
  return std::to_string(base) + "^" + std::to_string(exponent);
}

bool operator==(const PowerValue& a, const PowerValue& b) {
  if (a.is_zero || b.is_zero) return a.is_zero == b.is_zero;
  return a.base == b.base && a.exponent == b.exponent;
}

std::partial_ordering operator<=>(const PowerValue& a, const PowerValue& b) {
  if (a.is_zero && b.is_zero) return std::partial_ordering::equivalent;
  if (a.is_zero) return std::partial_ordering::less;
  if (b.is_zero) return std::partial_ordering::greater;
  if (a.base != b.base) return std::partial_ordering::unordered;
  return a.exponent <=> b.exponent;
}

// ---------------------------------------------------------------------------
// PAdic construction

PAdic PAdic::zero(int prime, int absolute_precision, PrecisionBudget budget) {
  PAdic z;
  z.prime_ = static_cast<std::int16_t>(prime);
  z.work_ = static_cast<std::int16_t>(budget.working_precision);
  z.min_ = static_cast<std::int16_t>(budget.min_acceptable);
  z.val_ = clamp_exponent(absolute_precision);
  z.prec_ = 0;
  z.unit_ = 0;
  return z;
}

PAdic PAdic::one(int prime, PrecisionBudget budget) { return from_int(1, prime, budget); }

PAdic PAdic::from_parts(int prime, int valuation, u128 unit, int precision, PrecisionBudget budget) {
  if (precision < 0 || precision > max_digits(prime)) {
    fail(ErrorCode::PrecisionExhausted, "precision " + std::to_string(precision) +
                                            " not representable for p=" + std::to_string(prime));
  }
  PAdic out = zero(prime, valuation + precision, budget);
  if (precision == 0) return out;
  const Parts s = strip(prime, valuation, mod_reduce(unit, prime, precision), precision);
  if (s.prec == 0) return zero(prime, valuation + precision, budget);
  out.val_ = clamp_exponent(s.val);
  out.prec_ = static_cast<std::int16_t>(s.prec);
  out.unit_ = s.unit;
  return out;
}

std::optional<int> PAdic::digit(int index) const {
  if (index >= absolute_precision()) return std::nullopt;
  if (is_zero() || index < val_) return 0;
  u128 u = unit_;
  const auto p = static_cast<u128>(prime_);
  for (int i = val_; i < index; ++i) u /= p;
  return static_cast<int>(u % p);
}

std::vector<int> PAdic::unit_digits() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(prec_));
  u128 u = unit_;
  const auto p = static_cast<u128>(prime_);
  for (int i = 0; i < prec_; ++i) {
    out.push_back(static_cast<int>(u % p));
    u /= p;
  }
  return out;
}

std::string PAdic::to_string() const {
  const std::string p = std::to_string(prime_);
  if (is_zero()) return "O(" + p + "^" + std::to_string(val_) + ")";
  std::string digits;
  for (int d : unit_digits()) {
    if (!digits.empty()) digits += '.';
    digits += std::to_string(d);
  }
  return p + "^" + std::to_string(val_) + " * (" + digits + ")_" + p;
}

// ---------------------------------------------------------------------------
// Arithmetic

namespace {

// Sum without the cancellation check; `cancelled` reports whether leading
// digits cancelled.
PAdic add_unchecked(const PAdic& x, const PAdic& y, bool& cancelled) {
  cancelled = false;
  const int p = x.prime();
  const PrecisionBudget budget = x.budget();
  const int abs_prec = std::min(x.absolute_precision(), y.absolute_precision());
  if (x.is_zero() && y.is_zero()) return PAdic::zero(p, abs_prec, budget);
  if (x.is_zero()) return truncate_absolute(y, abs_prec);
  if (y.is_zero()) return truncate_absolute(x, abs_prec);

  const int v0 = std::min(x.valuation(), y.valuation());
  const int k = abs_prec - v0;
  if (k <= 0) return PAdic::zero(p, abs_prec, budget);

  auto aligned = [&](const PAdic& z) -> u128 {
    const int shift = z.valuation() - v0;
    if (shift >= k) return 0;
    const u128 u = mod_reduce(z.unit(), p, k);
    if (shift == 0) return u;
    return mulmod(u, modulus(p, shift), p, k);
  };
  const u128 m = modulus(p, k);
  u128 sum = aligned(x) + aligned(y);
  if (sum >= m) sum -= m;
  PAdic out = PAdic::from_parts(p, v0, sum, k, budget);
  cancelled = out.is_zero() || out.valuation() > v0;
  return out;
}

}  // namespace

PAdic padd(const PAdic& x, const PAdic& y) {
  check_same_prime(x, y);
  bool cancelled = false;
  PAdic out = add_unchecked(x, y, cancelled);
  if (cancelled && !out.is_zero()) {
    const int floor_in = std::min(x.is_zero() ? x.budget().working_precision : x.precision(),
                                  y.is_zero() ? y.budget().working_precision : y.precision());
    const int min_ok = x.budget().min_acceptable;
    if (floor_in >= min_ok && out.precision() < min_ok) {
      fail(ErrorCode::PrecisionExhausted,
           "cancellation left " + std::to_string(out.precision()) + " digits (< " +
               std::to_string(min_ok) + ")");
    }
  }
  return out;
}

PAdic padd_unchecked(const PAdic& x, const PAdic& y) {
  check_same_prime(x, y);
  bool cancelled = false;
  return add_unchecked(x, y, cancelled);
}

PAdic pneg(const PAdic& x) {
  if (x.is_zero()) return x;
  PAdic out = x;
  out.unit_ = modulus(x.prime(), x.precision()) - x.unit();
  return out;
}

PAdic psub(const PAdic& x, const PAdic& y) { return padd(x, pneg(y)); }

PAdic pmul(const PAdic& x, const PAdic& y) {
  check_same_prime(x, y);
  const int p = x.prime();
  if (x.is_zero() || y.is_zero()) {
    // O(p^A) * p^v u = O(p^{A+v}); O(p^A) * O(p^B) = O(p^{A+B}).
    return PAdic::zero(p, clamp_exponent(static_cast<long long>(x.valuation()) + y.valuation()),
                       x.budget());
  }
  PAdic out = x;
  out.prec_ = static_cast<std::int16_t>(std::min(x.precision(), y.precision()));
  out.val_ = clamp_exponent(static_cast<long long>(x.valuation()) + y.valuation());
  out.unit_ = mulmod(mod_reduce(x.unit(), p, out.prec_), mod_reduce(y.unit(), p, out.prec_), p,
                     out.prec_);
  return out;
}

PAdic pinv(const PAdic& x) {
  if (x.is_zero()) fail(ErrorCode::DivisionByZero, "inverse of " + x.to_string());
  PAdic out = x;
  out.val_ = -x.valuation();
  out.unit_ = invmod(x.unit(), x.prime(), x.precision());
  return out;
}

PAdic pdiv(const PAdic& x, const PAdic& y) { return pmul(x, pinv(y)); }

PAdic pshift(const PAdic& x, int k) {
  PAdic out = x;
  out.val_ = clamp_exponent(static_cast<long long>(x.valuation()) + k);
  return out;
}

PowerValue pnorm(const PAdic& x) {
  if (x.is_zero()) return PowerValue{x.prime(), -x.absolute_precision(), true, true};
  return PowerValue{x.prime(), -x.valuation(), false, false};
}

bool PAdic::same_to_precision(const PAdic& other) const {
  check_same_prime(*this, other);
  bool cancelled = false;
  return add_unchecked(*this, pneg(other), cancelled).is_zero();
}

PAdic reduce_mod(const PAdic& x, int h) {
  if (x.is_zero()) {
    if (x.absolute_precision() < h) {
      fail(ErrorCode::IndistinguishableAtPrecision,
           x.to_string() + " is unknown modulo " + std::to_string(x.prime()) + "^" +
               std::to_string(h));
    }
    return PAdic::zero(x.prime(), h, x.budget());
  }
  if (x.valuation() >= h) return PAdic::zero(x.prime(), h, x.budget());
  if (x.absolute_precision() < h) {
    fail(ErrorCode::IndistinguishableAtPrecision,
         x.to_string() + " is unknown modulo " + std::to_string(x.prime()) + "^" +
             std::to_string(h));
  }
  return truncate_absolute(x, h);
}

PAdic truncate_absolute(const PAdic& x, int h) {
  if (x.absolute_precision() <= h) return x;
  if (x.is_zero() || x.valuation() >= h) return PAdic::zero(x.prime(), h, x.budget());
  PAdic out = x;
  out.prec_ = static_cast<std::int16_t>(h - x.valuation());
  out.unit_ = mod_reduce(x.unit(), x.prime(), out.prec_);
  return out;
}

PAdic pad_absolute(const PAdic& x, int a) {
  if (a <= x.absolute_precision()) return truncate_absolute(x, a);
  if (x.is_zero()) return PAdic::zero(x.prime(), a, x.budget());
  if (a - x.valuation() > max_digits(x.prime())) {
    fail(ErrorCode::PrecisionExhausted, "cannot pad " + x.to_string() + " to absolute precision " +
                                            std::to_string(a));
  }
  PAdic out = x;
  out.prec_ = static_cast<std::int16_t>(a - x.valuation());
  return out;
}

bool valuation_at_least(const PAdic& x, int h) {
  if (!x.is_zero()) return x.valuation() >= h;
  if (x.absolute_precision() >= h) return true;
  fail(ErrorCode::IndistinguishableAtPrecision,
       x.to_string() + ": valuation >= " + std::to_string(h) + " undecidable");
}

// ---------------------------------------------------------------------------
// Conversion

PAdic from_rational(std::int64_t num, std::int64_t den, int prime, PrecisionBudget budget) {
  if (den == 0) fail(ErrorCode::ZeroDenominator, std::to_string(num) + "/0");
  budget.validate(prime);
  const int n = budget.working_precision;
  if (num == 0) return PAdic::zero(prime, n, budget);
  std::int64_t num_rest = 0;
  std::int64_t den_rest = 0;
  const int v = vp(num, prime, num_rest) - vp(den, prime, den_rest);
  const u128 a = signed_mod(num_rest, prime, n);
  const u128 b = signed_mod(den_rest, prime, n);
  return PAdic::from_parts(prime, v, mulmod(a, invmod(b, prime, n), prime, n), n, budget);
}

PAdic from_rational(const Rational& r, int prime, PrecisionBudget budget) {
  return from_rational(r.numerator(), r.denominator(), prime, budget);
}

PAdic parse_padic(std::string_view text, int prime, PrecisionBudget budget) {
  budget.validate(prime);
  text = detail::trim(text);
  const std::string ptxt = std::to_string(prime);
  auto bad = [&](const std::string& why) -> PAdic {
    fail(ErrorCode::MalformedSyntax, "p-adic literal '" + std::string(text) + "': " + why);
  };
  auto read_int = [&](std::string_view s) {
    return parse_rational(s).numerator();
  };

  if (detail::starts_with(text, "O(")) {
    if (text.back() != ')') return bad("unterminated O(...)");
    const auto inner = detail::trim(text.substr(2, text.size() - 3));
    const auto caret = inner.find('^');
    if (caret == std::string_view::npos || detail::trim(inner.substr(0, caret)) != ptxt) {
      return bad("expected O(p^A)");
    }
    return PAdic::zero(prime, static_cast<int>(read_int(inner.substr(caret + 1))), budget);
  }

  const auto open = text.find('(');
  if (open == std::string_view::npos) {
    return from_rational(parse_rational(text), prime, budget);
  }

  int v = 0;
  const auto head = detail::trim(text.substr(0, open));
  if (!head.empty()) {
    // "p^v *"
    if (head.back() != '*') return bad("expected '*' before digits");
    const auto pv = detail::trim(head.substr(0, head.size() - 1));
    const auto caret = pv.find('^');
    if (caret == std::string_view::npos || detail::trim(pv.substr(0, caret)) != ptxt) {
      return bad("expected p^v prefix");
    }
    v = static_cast<int>(read_int(pv.substr(caret + 1)));
  }
  const auto close = text.find(')', open);
  if (close == std::string_view::npos) return bad("unterminated digits");
  const auto suffix = detail::trim(text.substr(close + 1));
  if (suffix != "_" + ptxt) return bad("expected suffix _" + ptxt);

  const auto body = text.substr(open + 1, close - open - 1);
  std::vector<int> digits;
  for (auto piece : detail::split_top(body, '.')) {
    const auto d = read_int(piece);
    if (d < 0 || d >= prime) return bad("digit out of range");
    digits.push_back(static_cast<int>(d));
  }
  const int count = static_cast<int>(digits.size());
  if (count > max_digits(prime)) return bad("too many digits");
  u128 unit = 0;
  for (int i = count - 1; i >= 0; --i) unit = unit * static_cast<u128>(prime) + static_cast<u128>(digits[i]);
  return PAdic::from_parts(prime, v, unit, count, budget);
}

}  // namespace treewalk
