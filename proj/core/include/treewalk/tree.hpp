#pragma once

// Vertices and ends of the (q+1)-regular tree oriented toward a fixed end
// omega, in two concrete models:
//
//  * p-adic: the vertex at height h is a disc D(c, p^-h) of Q_p, stored as
//    its center reduced modulo p^h.  Ends of the tree other than omega are
//    points of Q_p.
//  * lamplighter: the vertex at height h is a finitely supported lamp
//    configuration on positions <= h.  Ends are configurations with support
//    bounded below, known on positions <= known_upto.
//
// Digit index i of a p-adic center corresponds to lamp position i + 1, so
// both models share the same height convention (origin at height 0, sons one
// level up).

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treewalk/padic.hpp"

namespace treewalk {

enum class Realization { PAdic, Lamplighter };

std::string_view to_string(Realization r) noexcept;

// Finite map position -> nonzero value in Z/qZ, sorted by position.
class LampConfig {
 public:
  using Lamp = std::pair<int, int>;

  LampConfig() = default;
  // Normalizes: values reduced mod q, zeros dropped, duplicates summed.
  LampConfig(std::vector<Lamp> lamps, int q);

  [[nodiscard]] const std::vector<Lamp>& lamps() const noexcept { return lamps_; }
  [[nodiscard]] bool empty() const noexcept { return lamps_.empty(); }
  [[nodiscard]] int at(int position) const;

  // Lamps with position <= h.
  [[nodiscard]] LampConfig up_to(int h) const;
  // Every position moved by +k.
  [[nodiscard]] LampConfig shifted(int k) const;
  [[nodiscard]] LampConfig negated(int q) const;
  [[nodiscard]] LampConfig plus(const LampConfig& other, int q) const;
  // Smallest position where the two differ, if any.
  [[nodiscard]] std::optional<int> first_difference(const LampConfig& other) const;

  friend bool operator==(const LampConfig&, const LampConfig&) = default;

 private:
  std::vector<Lamp> lamps_;
};

struct Vertex {
  Realization kind = Realization::PAdic;
  int q = 2;
  int height = 0;
  PAdic center;      // p-adic only: canonical modulo p^height
  LampConfig lamps;  // lamplighter only: positions <= height

  friend bool operator==(const Vertex& a, const Vertex& b) {
    return a.kind == b.kind && a.q == b.q && a.height == b.height && a.center == b.center &&
           a.lamps == b.lamps;
  }
};

struct End {
  enum class Kind { Omega, PAdic, Lamp };
  Kind kind = Kind::Omega;
  int q = 2;
  PAdic point;         // Kind::PAdic
  LampConfig lamps;    // Kind::Lamp
  int known_upto = 0;  // Kind::Lamp: positions <= known_upto are known

  [[nodiscard]] bool is_omega() const noexcept { return kind == Kind::Omega; }
  [[nodiscard]] Realization realization() const;

  friend bool operator==(const End& a, const End& b) {
    return a.kind == b.kind && a.q == b.q && a.point == b.point && a.lamps == b.lamps &&
           a.known_upto == b.known_upto;
  }
};

Vertex padic_vertex(const PAdic& center, int height);
Vertex lamp_vertex(int q, int height, LampConfig lamps);
Vertex origin(Realization kind, int q, PrecisionBudget budget = {});

End omega_end();
End padic_end(const PAdic& point);
End lamp_end(int q, LampConfig lamps, int known_upto);

inline int busemann(const Vertex& x) noexcept { return x.height; }

Vertex father(const Vertex& x);
// Sons are numbered by the new digit (p-adic) or the new lamp value.
Vertex son(const Vertex& x, int branch);
// The ancestor of x at height h <= x.height.
Vertex ancestor(const Vertex& x, int h);
// The vertex at height h on the ray from e toward omega.  Throws
// IndistinguishableAtPrecision when e is not known that deep.
Vertex end_ancestor(const End& e, int h);
// Largest height at which the ancestor of e is determined.
int known_depth(const End& e);

// True when e lies in the subtree (boundary cone) below x.
bool cone_contains(const Vertex& x, const End& e);

Vertex meet(const Vertex& x, const Vertex& y);
Vertex meet(const Vertex& x, const End& e);
Vertex meet(const End& a, const End& b);

int graph_distance(const Vertex& x, const Vertex& y);

// q^-busemann(a ^ b); zero for equal ends.  For p-adic ends this is the norm
// of the difference.
PowerValue theta(const End& a, const End& b);
PowerValue theta(const Vertex& x, const Vertex& y);

// p-adic: "p:<h>:<start>;<d_start>.<...>.<d_{h-1}>" (empty digit part for a
// zero center).  Lamplighter: "lamp:<h>:[pos=val,...]".
std::string to_string(const Vertex& x);
std::string to_string(const End& e);
// `q` is the prime or lamp modulus the string is read against.
Vertex parse_vertex(std::string_view text, int q, PrecisionBudget budget = {});
End parse_end(std::string_view text, Realization kind, int q, PrecisionBudget budget = {});

}  // namespace treewalk
