#include "treewalk/tree.hpp"

#include <algorithm>
#include <map>

#include "treewalk/error.hpp"
#include "text_util.hpp"

namespace treewalk {
namespace {

int parse_int(std::string_view s) {
  const Rational r = parse_rational(s);
  if (r.denominator() != 1) fail(ErrorCode::MalformedSyntax, "expected integer: " + std::string(s));
  return static_cast<int>(r.numerator());
}

void same_kind(const Vertex& x, const Vertex& y) {
  if (x.kind != y.kind || x.q != y.q) fail(ErrorCode::RealizationMismatch, "vertices of different trees");
}

// Leading digits on which two p-adic values agree: v(x - y), or the common
// absolute precision when the difference is not visible.
int agreement(const PAdic& x, const PAdic& y) {
  const PAdic d = padd_unchecked(x, pneg(y));
  return d.is_zero() ? d.absolute_precision() : d.valuation();
}

std::string lamps_to_string(const LampConfig& c) {
  std::string out = "[";
  for (const auto& [pos, val] : c.lamps()) {
    if (out.size() > 1) out += ',';
    out += std::to_string(pos) + "=" + std::to_string(val);
  }
  return out + "]";
}

LampConfig parse_lamps(std::string_view text, int q, char sep) {
  text = detail::trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    fail(ErrorCode::MalformedSyntax, "expected [pos" + std::string(1, sep) + "val,...]: " + std::string(text));
  }
  std::vector<LampConfig::Lamp> lamps;
  const auto body = detail::trim(text.substr(1, text.size() - 2));
  if (!body.empty()) {
    for (auto item : detail::split_top(body, ',')) {
      const auto eq = item.find(sep);
      if (eq == std::string_view::npos) fail(ErrorCode::MalformedSyntax, "bad lamp: " + std::string(item));
      const int val = parse_int(item.substr(eq + 1));
      if (val < 0 || val >= q) fail(ErrorCode::MalformedSyntax, "lamp value out of range: " + std::string(item));
      lamps.emplace_back(parse_int(item.substr(0, eq)), val);
    }
  }
  return LampConfig(std::move(lamps), q);
}

}  // namespace

std::string_view to_string(Realization r) noexcept {
  return r == Realization::PAdic ? "padic" : "lamplighter";
}

// ---------------------------------------------------------------------------
// LampConfig

LampConfig::LampConfig(std::vector<Lamp> lamps, int q) {
  std::map<int, int> acc;
  for (const auto& [pos, val] : lamps) acc[pos] = ((acc[pos] + val) % q + q) % q;
  for (const auto& [pos, val] : acc) {
    if (val != 0) lamps_.emplace_back(pos, val);
  }
}

int LampConfig::at(int position) const {
  const auto it = std::lower_bound(lamps_.begin(), lamps_.end(), Lamp{position, 0});
  return it != lamps_.end() && it->first == position ? it->second : 0;
}

LampConfig LampConfig::up_to(int h) const {
  LampConfig out;
  const auto it = std::upper_bound(lamps_.begin(), lamps_.end(), Lamp{h, 1 << 30});
  out.lamps_.assign(lamps_.begin(), it);
  return out;
}

LampConfig LampConfig::shifted(int k) const {
  LampConfig out = *this;
  for (auto& lamp : out.lamps_) lamp.first += k;
  return out;
}

LampConfig LampConfig::negated(int q) const {
  LampConfig out = *this;
  for (auto& lamp : out.lamps_) lamp.second = q - lamp.second;
  return out;
}

LampConfig LampConfig::plus(const LampConfig& other, int q) const {
  LampConfig out;
  out.lamps_.reserve(lamps_.size() + other.lamps_.size());
  auto a = lamps_.begin();
  auto b = other.lamps_.begin();
  while (a != lamps_.end() || b != other.lamps_.end()) {
    if (b == other.lamps_.end() || (a != lamps_.end() && a->first < b->first)) {
      out.lamps_.push_back(*a++);
    } else if (a == lamps_.end() || b->first < a->first) {
      out.lamps_.push_back(*b++);
    } else {
      const int v = (a->second + b->second) % q;
      if (v != 0) out.lamps_.emplace_back(a->first, v);
      ++a;
      ++b;
    }
  }
  return out;
}

std::optional<int> LampConfig::first_difference(const LampConfig& other) const {
  auto a = lamps_.begin();
  auto b = other.lamps_.begin();
  while (a != lamps_.end() && b != other.lamps_.end()) {
    if (*a != *b) return std::min(a->first, b->first);
    ++a;
    ++b;
  }
  if (a != lamps_.end()) return a->first;
  if (b != other.lamps_.end()) return b->first;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Construction

Realization End::realization() const {
  switch (kind) {
    case Kind::PAdic: return Realization::PAdic;
    case Kind::Lamp: return Realization::Lamplighter;
    case Kind::Omega: break;
  }
  fail(ErrorCode::OmegaOperand, "omega belongs to every realization");
}

Vertex padic_vertex(const PAdic& center, int height) {
  Vertex v;
  v.kind = Realization::PAdic;
  v.q = center.prime();
  v.height = height;
  v.center = reduce_mod(center, height);
  return v;
}

Vertex lamp_vertex(int q, int height, LampConfig lamps) {
  Vertex v;
  v.kind = Realization::Lamplighter;
  v.q = q;
  v.height = height;
  v.lamps = lamps.up_to(height);
  return v;
}

Vertex origin(Realization kind, int q, PrecisionBudget budget) {
  if (kind == Realization::PAdic) return padic_vertex(PAdic::zero(q, 0, budget), 0);
  return lamp_vertex(q, 0, {});
}

End omega_end() { return End{}; }

End padic_end(const PAdic& point) {
  End e;
  e.kind = End::Kind::PAdic;
  e.q = point.prime();
  e.point = point;
  return e;
}

End lamp_end(int q, LampConfig lamps, int known_upto) {
  End e;
  e.kind = End::Kind::Lamp;
  e.q = q;
  e.lamps = lamps.up_to(known_upto);
  e.known_upto = known_upto;
  return e;
}

// ---------------------------------------------------------------------------
// Structure

Vertex father(const Vertex& x) { return ancestor(x, x.height - 1); }

Vertex son(const Vertex& x, int branch) {
  if (branch < 0 || branch >= x.q) {
    fail(ErrorCode::BranchOutOfRange, std::to_string(branch) + " not in [0, " + std::to_string(x.q) + ")");
  }
  if (x.kind == Realization::Lamplighter) {
    return lamp_vertex(x.q, x.height + 1,
                       x.lamps.plus(LampConfig({{x.height + 1, branch}}, x.q), x.q));
  }
  const PAdic digit = pshift(from_int(branch, x.q, x.center.budget()), x.height);
  return padic_vertex(padd_unchecked(pad_absolute(x.center, x.height + 1), digit), x.height + 1);
}

Vertex ancestor(const Vertex& x, int h) {
  if (h > x.height) {
    fail(ErrorCode::InvalidArgument, "ancestor height " + std::to_string(h) + " above " + std::to_string(x.height));
  }
  if (x.kind == Realization::Lamplighter) return lamp_vertex(x.q, h, x.lamps);
  return padic_vertex(x.center, h);
}

int known_depth(const End& e) {
  switch (e.kind) {
    case End::Kind::PAdic: return e.point.absolute_precision();
    case End::Kind::Lamp: return e.known_upto;
    case End::Kind::Omega: break;
  }
  fail(ErrorCode::OmegaOperand, "omega has no ancestors in the tree");
}

Vertex end_ancestor(const End& e, int h) {
  if (h > known_depth(e)) {
    fail(ErrorCode::IndistinguishableAtPrecision,
         to_string(e) + " is not known down to height " + std::to_string(h));
  }
  if (e.kind == End::Kind::Lamp) return lamp_vertex(e.q, h, e.lamps);
  return padic_vertex(e.point, h);
}

bool cone_contains(const Vertex& x, const End& e) {
  if (e.is_omega()) return false;
  if (e.realization() != x.kind || e.q != x.q) fail(ErrorCode::RealizationMismatch, "end and vertex");
  return end_ancestor(e, x.height) == x;
}

Vertex meet(const Vertex& x, const Vertex& y) {
  same_kind(x, y);
  const int top = std::min(x.height, y.height);
  if (x.kind == Realization::Lamplighter) {
    const auto diff = x.lamps.up_to(top).first_difference(y.lamps.up_to(top));
    return ancestor(x, diff ? std::min(top, *diff - 1) : top);
  }
  return ancestor(x, std::min(top, agreement(x.center, y.center)));
}

Vertex meet(const Vertex& x, const End& e) {
  if (e.is_omega()) fail(ErrorCode::OmegaOperand, "meet with omega");
  return meet(x, end_ancestor(e, x.height));
}

Vertex meet(const End& a, const End& b) {
  if (a.is_omega() || b.is_omega()) fail(ErrorCode::OmegaOperand, "meet with omega");
  if (a.realization() != b.realization() || a.q != b.q) fail(ErrorCode::RealizationMismatch, "ends");
  const int known = std::min(known_depth(a), known_depth(b));
  int h = known;
  if (a.kind == End::Kind::Lamp) {
    const auto diff = a.lamps.up_to(known).first_difference(b.lamps.up_to(known));
    if (diff) h = *diff - 1;
  } else {
    h = agreement(a.point, b.point);
  }
  if (h >= known) {
    fail(ErrorCode::IndistinguishableAtPrecision,
         to_string(a) + " and " + to_string(b) + " agree on the whole known window");
  }
  return end_ancestor(a, h);
}

int graph_distance(const Vertex& x, const Vertex& y) {
  return x.height + y.height - 2 * meet(x, y).height;
}

PowerValue theta(const End& a, const End& b) {
  try {
    return PowerValue{a.q, -meet(a, b).height, false, false};
  } catch (const Error& err) {
    if (err.code() != ErrorCode::IndistinguishableAtPrecision) throw;
    return PowerValue{a.q, -std::min(known_depth(a), known_depth(b)), true, true};
  }
}

PowerValue theta(const Vertex& x, const Vertex& y) {
  return PowerValue{x.q, -meet(x, y).height, false, false};
}

// ---------------------------------------------------------------------------
// Text

std::string to_string(const Vertex& x) {
  const std::string h = std::to_string(x.height);
  if (x.kind == Realization::Lamplighter) return "lamp:" + h + ":" + lamps_to_string(x.lamps);
  if (x.center.is_zero()) return "p:" + h + ":";
  std::string digits;
  for (int d : x.center.unit_digits()) {
    if (!digits.empty()) digits += '.';
    digits += std::to_string(d);
  }
  return "p:" + h + ":" + std::to_string(x.center.valuation()) + ";" + digits;
}

std::string to_string(const End& e) {
  switch (e.kind) {
    case End::Kind::Omega: return "omega";
    case End::Kind::PAdic: return e.point.to_string();
    case End::Kind::Lamp: return "lamp-end:" + std::to_string(e.known_upto) + ":" + lamps_to_string(e.lamps);
  }
  return {};
}

Vertex parse_vertex(std::string_view text, int q, PrecisionBudget budget) {
  text = detail::trim(text);
  const auto parts = detail::split_top(text, ':');
  if (parts.size() != 3) fail(ErrorCode::MalformedSyntax, "vertex '" + std::string(text) + "'");
  const int height = parse_int(parts[1]);
  if (detail::trim(parts[0]) == "lamp") {
    if (q < 2) fail(ErrorCode::InvalidArgument, "lamp modulus must be >= 2");
    const LampConfig lamps = parse_lamps(parts[2], q, '=');
    for (const auto& [pos, val] : lamps.lamps()) {
      if (pos > height) fail(ErrorCode::MalformedSyntax, "lamp above vertex height in '" + std::string(text) + "'");
    }
    return lamp_vertex(q, height, lamps);
  }
  if (detail::trim(parts[0]) != "p") fail(ErrorCode::MalformedSyntax, "vertex '" + std::string(text) + "'");
  budget.validate(q);
  const auto body = detail::trim(parts[2]);
  if (body.empty()) return padic_vertex(PAdic::zero(q, height, budget), height);
  const auto semi = body.find(';');
  if (semi == std::string_view::npos) fail(ErrorCode::MalformedSyntax, "vertex '" + std::string(text) + "'");
  const int start = parse_int(body.substr(0, semi));
  const auto digits = detail::split_top(body.substr(semi + 1), '.');
  if (start + static_cast<int>(digits.size()) != height) {
    fail(ErrorCode::MalformedSyntax, "digit count does not match height in '" + std::string(text) + "'");
  }
  u128 unit = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    const int d = parse_int(*it);
    if (d < 0 || d >= q) fail(ErrorCode::MalformedSyntax, "digit out of range in '" + std::string(text) + "'");
    unit = unit * static_cast<u128>(q) + static_cast<u128>(d);
  }
  if (unit % static_cast<u128>(q) == 0) {
    fail(ErrorCode::MalformedSyntax, "leading digit must be nonzero in '" + std::string(text) + "'");
  }
  return padic_vertex(PAdic::from_parts(q, start, unit, height - start, budget), height);
}

End parse_end(std::string_view text, Realization kind, int q, PrecisionBudget budget) {
  text = detail::trim(text);
  if (text == "omega") return omega_end();
  if (kind == Realization::PAdic) return padic_end(parse_padic(text, q, budget));
  const auto parts = detail::split_top(text, ':');
  if (parts.size() != 3 || detail::trim(parts[0]) != "lamp-end") {
    fail(ErrorCode::MalformedSyntax, "lamplighter end '" + std::string(text) + "'");
  }
  return lamp_end(q, parse_lamps(parts[2], q, '='), parse_int(parts[1]));
}

}  // namespace treewalk
