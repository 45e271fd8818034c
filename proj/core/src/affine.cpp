#include "treewalk/affine.hpp"

#include <numeric>

#include "treewalk/error.hpp"
#include "text_util.hpp"

namespace treewalk {
namespace {

void same_realization(const AffineElement& g, Realization kind, int q) {
  if (g.kind != kind || g.q != q) fail(ErrorCode::RealizationMismatch, "operands live in different groups");
}

std::string lamps_literal(const LampConfig& c) {
  std::string out = "[";
  for (const auto& [pos, val] : c.lamps()) {
    if (out.size() > 1) out += ", ";
    out += std::to_string(pos) + ":" + std::to_string(val);
  }
  return out + "]";
}

}  // namespace

AffineElement padic_affine(const PAdic& t, const PAdic& a) {
  if (a.is_zero()) fail(ErrorCode::DivisionByZero, "multiplier " + a.to_string() + " is not invertible");
  if (t.prime() != a.prime()) fail(ErrorCode::PrimeMismatch, "t and a over different primes");
  AffineElement g;
  g.kind = Realization::PAdic;
  g.q = a.prime();
  g.t = t;
  g.a = a;
  return g;
}

AffineElement lamp_affine(int q, LampConfig sigma, int shift) {
  if (q < 2) fail(ErrorCode::InvalidArgument, "lamp modulus must be >= 2");
  AffineElement g;
  g.kind = Realization::Lamplighter;
  g.q = q;
  g.sigma = std::move(sigma);
  g.shift = shift;
  return g;
}

AffineElement identity_element(Realization kind, int q, PrecisionBudget budget) {
  if (kind == Realization::Lamplighter) return lamp_affine(q, {}, 0);
  return padic_affine(PAdic::zero(q, budget.working_precision, budget), PAdic::one(q, budget));
}

AffineElement compose(const AffineElement& g1, const AffineElement& g2) {
  same_realization(g2, g1.kind, g1.q);
  if (g1.kind == Realization::Lamplighter) {
    return lamp_affine(g1.q, g1.sigma.plus(g2.sigma.shifted(g1.shift), g1.q), g1.shift + g2.shift);
  }
  return padic_affine(g1.t + g1.a * g2.t, g1.a * g2.a);
}

AffineElement invert(const AffineElement& g) {
  if (g.kind == Realization::Lamplighter) {
    return lamp_affine(g.q, g.sigma.shifted(-g.shift).negated(g.q), -g.shift);
  }
  const PAdic inv = pinv(g.a);
  return padic_affine(-(g.t * inv), inv);
}

AffineElement power(const AffineElement& g, int n) {
  AffineElement base = n < 0 ? invert(g) : g;
  unsigned e = n < 0 ? static_cast<unsigned>(-static_cast<long long>(n)) : static_cast<unsigned>(n);
  AffineElement out = identity_element(g.kind, g.q, g.a.budget());
  while (e != 0) {
    if (e & 1U) out = compose(out, base);
    e >>= 1U;
    if (e != 0) base = compose(base, base);
  }
  return out;
}

int phi(const AffineElement& g) {
  return g.kind == Realization::Lamplighter ? g.shift : g.a.valuation();
}

bool same_to_precision(const AffineElement& g, const AffineElement& h) {
  if (g.kind != h.kind || g.q != h.q) return false;
  if (g.kind == Realization::Lamplighter) return g.sigma == h.sigma && g.shift == h.shift;
  return g.t.same_to_precision(h.t) && g.a.same_to_precision(h.a);
}

bool is_identity(const AffineElement& g) {
  return same_to_precision(g, identity_element(g.kind, g.q, g.a.budget()));
}

Vertex act_vertex(const AffineElement& g, const Vertex& x) {
  same_realization(g, x.kind, x.q);
  if (g.kind == Realization::Lamplighter) {
    return lamp_vertex(g.q, x.height + g.shift, g.sigma.plus(x.lamps.shifted(g.shift), g.q));
  }
  return padic_vertex(padd_unchecked(g.a * x.center, g.t), x.height + phi(g));
}

End act_end(const AffineElement& g, const End& e) {
  if (e.is_omega()) return e;
  same_realization(g, e.realization(), e.q);
  if (g.kind == Realization::Lamplighter) {
    return lamp_end(g.q, g.sigma.plus(e.lamps.shifted(g.shift), g.q), e.known_upto + g.shift);
  }
  return padic_end(padd_unchecked(g.a * e.point, g.t));
}

int norm(const AffineElement& g) {
  const Vertex o = origin(g.kind, g.q, g.a.budget());
  return graph_distance(act_vertex(g, o), o);
}

bool maps_to(const AffineElement& g, const Vertex& x, const Vertex& y) {
  same_realization(g, x.kind, x.q);
  if (x.height + phi(g) != y.height) return false;
  if (g.kind == Realization::Lamplighter) {
    return g.sigma.plus(x.lamps.shifted(g.shift), g.q).up_to(y.height) == y.lamps;
  }
  const PAdic image = padd_unchecked(g.a * x.center, g.t);
  return valuation_at_least(padd_unchecked(image, pneg(y.center)), y.height);
}

Vertex origin_image_ancestor(const AffineElement& g, int h) {
  if (h > phi(g)) fail(ErrorCode::InvalidArgument, "ancestor above g o");
  if (g.kind == Realization::Lamplighter) return lamp_vertex(g.q, h, g.sigma);
  return padic_vertex(g.t, h);
}

ReferenceHomothety default_homothety(Realization kind, int q, PrecisionBudget budget) {
  if (kind == Realization::Lamplighter) return {lamp_affine(q, {}, 1), lamp_end(q, {}, budget.working_precision)};
  return {padic_affine(PAdic::zero(q, budget.working_precision, budget), from_int(q, q, budget)),
          padic_end(PAdic::zero(q, budget.working_precision, budget))};
}

Decomposition decompose(const AffineElement& g, const ReferenceHomothety& s) {
  const int n = phi(g);
  return {compose(g, power(s.element, -n)), n};
}

AffineElement rotation(const AffineElement& like, const PAdic& r) {
  if (like.kind == Realization::Lamplighter) return identity_element(like.kind, like.q);
  if (r.is_zero() || r.valuation() != 0) fail(ErrorCode::InvalidArgument, "rotation needs a unit");
  return padic_affine(PAdic::zero(r.prime(), r.budget().working_precision, r.budget()), r);
}

AffineElement translation(const End& xi) {
  if (xi.is_omega()) fail(ErrorCode::OmegaOperand, "no translation by omega");
  if (xi.kind == End::Kind::Lamp) return lamp_affine(xi.q, xi.lamps, 0);
  return padic_affine(xi.point, PAdic::one(xi.q, xi.point.budget()));
}

FixedEnds fixed_end(const AffineElement& g, int window) {
  if (g.kind == Realization::Lamplighter) {
    if (g.shift == 0) return {g.sigma.empty() ? FixedEnds::Kind::All : FixedEnds::Kind::None, {}};
    // tau = sigma + shift_h(tau), i.e. tau(n) = sigma(n) + tau(n - h).
    const int h = g.shift;
    const int top = (g.sigma.empty() ? 0 : g.sigma.lamps().back().first) + window;
    std::vector<LampConfig::Lamp> lamps;
    for (const auto& [pos, val] : g.sigma.lamps()) {
      if (h > 0) {
        for (int m = pos; m <= top; m += h) lamps.emplace_back(m, val);
      } else {
        for (int m = pos - h; m <= top; m -= h) lamps.emplace_back(m, g.q - val);
      }
    }
    return {FixedEnds::Kind::Unique, lamp_end(g.q, LampConfig(std::move(lamps), g.q), top)};
  }
  const PAdic one = PAdic::one(g.q, g.a.budget());
  const PAdic denom = padd_unchecked(one, pneg(g.a));
  if (denom.is_zero()) {
    // a == 1 to the known precision.
    return {g.t.is_zero() ? FixedEnds::Kind::All : FixedEnds::Kind::None, {}};
  }
  return {FixedEnds::Kind::Unique, padic_end(pdiv(g.t, denom))};
}

NonExceptionalReport validate_non_exceptional(const std::vector<AffineElement>& atoms, bool allow_gcd) {
  if (atoms.empty()) fail(ErrorCode::EmptySupport, "no atoms");
  NonExceptionalReport r;
  int g = 0;
  for (const auto& x : atoms) {
    g = std::gcd(g, phi(x));
    if (phi(x) != 0) r.has_nonzero_phi = true;
  }
  r.phi_gcd = g;
  if (!r.has_nonzero_phi) r.messages.emplace_back("support contained in Hor(T): every atom has phi = 0");

  std::vector<End> ends;
  bool some_free = false;
  for (const auto& x : atoms) {
    const FixedEnds f = fixed_end(x);
    if (f.kind == FixedEnds::Kind::None) some_free = true;
    if (f.kind == FixedEnds::Kind::Unique) ends.push_back(f.end);
  }
  if (some_free) {
    r.no_common_fixed_end = true;
  } else {
    for (std::size_t i = 1; i < ends.size() && !r.no_common_fixed_end; ++i) {
      try {
        (void)meet(ends[0], ends[i]);
        r.no_common_fixed_end = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::IndistinguishableAtPrecision) throw;
      }
    }
    if (!r.no_common_fixed_end) {
      r.messages.emplace_back(ends.empty() ? "every atom is the identity"
                                           : "all atoms fix the end " + to_string(ends[0]));
    }
  }
  const bool gcd_ok = g == 1 || (allow_gcd && g != 0);
  r.gcd_overridden = g != 1 && gcd_ok;
  if (!gcd_ok && r.has_nonzero_phi) {
    r.messages.emplace_back("phi values generate " + std::to_string(g) + "Z, not Z");
  }
  r.passed = r.has_nonzero_phi && r.no_common_fixed_end && gcd_ok;
  return r;
}

namespace {

// Values known to full working precision whose expansion is that of a small
// rational print as that rational; everything else keeps the digit form.
// Small r / s with u = r / s mod m, by the truncated extended Euclid
// algorithm; unique when 2 |r| s < m.
bool reconstruct(u128 u, u128 m, std::int64_t bound, std::int64_t& r, std::int64_t& s) {
  using i128 = __int128;
  i128 r0 = static_cast<i128>(m), r1 = static_cast<i128>(u), t0 = 0, t1 = 1;
  while (r1 >= bound) {
    const i128 q = r0 / r1;
    const i128 r2 = r0 - q * r1, t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0 || t1 >= bound || -t1 >= bound) return false;
  r = static_cast<std::int64_t>(t1 < 0 ? -r1 : r1);
  s = static_cast<std::int64_t>(t1 < 0 ? -t1 : t1);
  return std::gcd(r, s) == 1;
}

// Exact rationals with small numerator and denominator print as "r/s";
// everything else as a digit expansion.
std::string padic_literal(const PAdic& x) {
  const int n = x.budget().working_precision;
  if (x.is_zero()) return x.absolute_precision() >= n ? "0" : x.to_string();
  if (x.precision() < n) return x.to_string();
  const int p = x.prime();
  u128 m = 1;
  for (int i = 0; i < n; ++i) m *= static_cast<u128>(p);
  std::int64_t bound = std::int64_t{1} << 30;
  while (bound > 1 && static_cast<u128>(bound) * static_cast<u128>(bound) * 2 >= m) bound /= 2;
  std::int64_t r = 0, s = 1;
  if (!reconstruct(x.unit(), m, bound, r, s) || s % p == 0) return x.to_string();
  for (int i = 0; i < std::abs(x.valuation()); ++i) {
    std::int64_t& side = x.valuation() > 0 ? r : s;
    if (std::abs(side) > (std::int64_t{1} << 40) / p) return x.to_string();
    side *= p;
  }
  return s == 1 ? std::to_string(r) : std::to_string(r) + "/" + std::to_string(s);
}

}  // namespace

std::string to_string(const AffineElement& g) {
  if (g.kind == Realization::Lamplighter) {
    return "lamp(shift = " + std::to_string(g.shift) + ", lamps = " + lamps_literal(g.sigma) + ")";
  }
  return "affine(t = " + padic_literal(g.t) + ", a = " + padic_literal(g.a) + ")";
}

AffineElement parse_element(std::string_view text, Realization kind, int q, PrecisionBudget budget) {
  text = detail::trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    fail(ErrorCode::MalformedSyntax, "element literal '" + std::string(text) + "'");
  }
  const auto head = detail::trim(text.substr(0, open));
  const auto body = text.substr(open + 1, text.size() - open - 2);
  std::string_view fields[2];
  bool seen[2] = {false, false};
  const char* names[2] = {kind == Realization::PAdic ? "t" : "shift", kind == Realization::PAdic ? "a" : "lamps"};
  if (head != (kind == Realization::PAdic ? "affine" : "lamp")) {
    fail(ErrorCode::MalformedSyntax, "expected " + std::string(kind == Realization::PAdic ? "affine(...)" : "lamp(...)") +
                                         ", got '" + std::string(text) + "'");
  }
  for (auto item : detail::split_top(body, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::MalformedSyntax, "field without '=' in '" + std::string(text) + "'");
    const auto key = detail::trim(item.substr(0, eq));
    int slot = -1;
    for (int i = 0; i < 2; ++i) {
      if (key == names[i]) slot = i;
    }
    if (slot < 0 || seen[slot]) fail(ErrorCode::MalformedSyntax, "unexpected field '" + std::string(key) + "'");
    seen[slot] = true;
    fields[slot] = detail::trim(item.substr(eq + 1));
  }
  if (!seen[0] || !seen[1]) fail(ErrorCode::MalformedSyntax, "missing field in '" + std::string(text) + "'");

  if (kind == Realization::PAdic) {
    return padic_affine(parse_padic(fields[0], q, budget), parse_padic(fields[1], q, budget));
  }
  const Rational shift = parse_rational(fields[0]);
  if (shift.denominator() != 1) fail(ErrorCode::MalformedSyntax, "shift must be an integer");
  const auto lamps_text = fields[1];
  if (lamps_text.size() < 2 || lamps_text.front() != '[' || lamps_text.back() != ']') {
    fail(ErrorCode::MalformedSyntax, "lamps must be [pos:val, ...]");
  }
  std::vector<LampConfig::Lamp> lamps;
  const auto inner = detail::trim(lamps_text.substr(1, lamps_text.size() - 2));
  if (!inner.empty()) {
    for (auto item : detail::split_top(inner, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string_view::npos) fail(ErrorCode::MalformedSyntax, "lamp '" + std::string(item) + "'");
      const Rational pos = parse_rational(item.substr(0, colon));
      const Rational val = parse_rational(item.substr(colon + 1));
      if (pos.denominator() != 1 || val.denominator() != 1 || val.numerator() < 0 || val.numerator() >= q) {
        fail(ErrorCode::MalformedSyntax, "lamp '" + std::string(item) + "'");
      }
      lamps.emplace_back(static_cast<int>(pos.numerator()), static_cast<int>(val.numerator()));
    }
  }
  return lamp_affine(q, LampConfig(std::move(lamps), q), static_cast<int>(shift.numerator()));
}

}  // namespace treewalk
