#pragma once

// Affinities of the tree: elements of Q_p x| Q_p* acting by u -> a u + t, or
// of the lamplighter group Z_q^(Z) x| Z acting by tau -> sigma + shift_k(tau).
// phi(g) is the height displacement: v_p(a), respectively the shift k.

#include <string>
#include <string_view>
#include <vector>

#include "treewalk/tree.hpp"

namespace treewalk {

struct AffineElement {
  Realization kind = Realization::PAdic;
  int q = 2;
  PAdic t;           // p-adic translation part
  PAdic a;           // p-adic multiplier, never ZeroToPrecision
  LampConfig sigma;  // lamplighter translation part
  int shift = 0;     // lamplighter height shift

  friend bool operator==(const AffineElement& x, const AffineElement& y) {
    return x.kind == y.kind && x.q == y.q && x.t == y.t && x.a == y.a && x.sigma == y.sigma &&
           x.shift == y.shift;
  }
};

AffineElement padic_affine(const PAdic& t, const PAdic& a);
AffineElement lamp_affine(int q, LampConfig sigma, int shift);
AffineElement identity_element(Realization kind, int q, PrecisionBudget budget = {});

AffineElement compose(const AffineElement& g1, const AffineElement& g2);
AffineElement invert(const AffineElement& g);
AffineElement power(const AffineElement& g, int n);
int phi(const AffineElement& g);

// Equality up to the known digits of both operands.
bool same_to_precision(const AffineElement& g, const AffineElement& h);
bool is_identity(const AffineElement& g);

Vertex act_vertex(const AffineElement& g, const Vertex& x);
End act_end(const AffineElement& g, const End& e);
// d(g o, o).
int norm(const AffineElement& g);

// g x == y, decided without building g x in full.
bool maps_to(const AffineElement& g, const Vertex& x, const Vertex& y);
// The ancestor at height h <= phi(g) of g o.
Vertex origin_image_ancestor(const AffineElement& g, int h);

struct ReferenceHomothety {
  AffineElement element;
  End fixed_center;
};
// p-adic (0, p) fixing 0; lamplighter (0, shift 1) fixing the empty
// configuration.
ReferenceHomothety default_homothety(Realization kind, int q, PrecisionBudget budget = {});

struct Decomposition {
  AffineElement b;  // horocyclic part, phi(b) = 0
  int n = 0;        // phi(g)
};
// g = b s^n.
Decomposition decompose(const AffineElement& g, const ReferenceHomothety& s);

// The rotation u -> r u (p-adic, r a unit); identity for the lamplighter,
// whose rotation group at the reference end is trivial.
AffineElement rotation(const AffineElement& like, const PAdic& r);
// Translation by the end xi: (xi, 1), or (xi's lamps, shift 0).
AffineElement translation(const End& xi);

struct FixedEnds {
  enum class Kind { All, None, Unique };
  Kind kind = Kind::None;
  End end;  // Kind::Unique
};
// Fixed ends of g in the boundary minus omega.  For the lamplighter with
// nonzero shift the fixed configuration is reported on positions up to
// `window` above the top of sigma's support.
FixedEnds fixed_end(const AffineElement& g, int window = 48);

struct NonExceptionalReport {
  bool passed = false;
  bool has_nonzero_phi = false;
  bool no_common_fixed_end = false;
  int phi_gcd = 0;
  bool gcd_overridden = false;
  std::vector<std::string> messages;
};
// Throws EmptySupport for an empty list.  A gcd of phi values other than 1
// fails unless `allow_gcd` is set.
NonExceptionalReport validate_non_exceptional(const std::vector<AffineElement>& atoms,
                                              bool allow_gcd = false);

// "affine(t = ..., a = ...)" / "lamp(shift = k, lamps = [pos:val,...])".
std::string to_string(const AffineElement& g);
AffineElement parse_element(std::string_view text, Realization kind, int q,
                            PrecisionBudget budget = {});

}  // namespace treewalk
