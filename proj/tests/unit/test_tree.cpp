#include <random>

#include "doctest.h"
#include "treewalk/error.hpp"
#include "treewalk/tree.hpp"

using namespace treewalk;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

Vertex random_vertex(std::mt19937_64& rng, Realization kind, int q) {
  Vertex x = origin(kind, q);
  const int up = static_cast<int>(rng() % 6);
  const int down = static_cast<int>(rng() % 6);
  for (int i = 0; i < down; ++i) x = father(x);
  for (int i = 0; i < up + down; ++i) x = son(x, static_cast<int>(rng() % q));
  return x;
}

}  // namespace

TEST_CASE("busemann heights") {
  const auto o = origin(Realization::PAdic, 2);
  CHECK(busemann(o) == 0);
  CHECK(to_string(o) == "p:0:");
  // D(u, p^k) sits at height -k.
  const auto d = padic_vertex(from_int(5, 3), -2);
  CHECK(busemann(d) == -2);
  CHECK(busemann(son(origin(Realization::Lamplighter, 2), 1)) == 1);
}

TEST_CASE("meets of ends") {
  const auto e0 = padic_end(from_int(0, 2));
  const auto e1 = padic_end(from_int(1, 2));
  const auto e4 = padic_end(from_int(4, 2));
  CHECK(meet(e0, e1) == origin(Realization::PAdic, 2));
  CHECK(meet(e0, e4).height == 2);
  CHECK(theta(e0, e1).to_rational() == Rational(1));
  CHECK(theta(e0, e4).to_rational() == Rational(1, 4));
  CHECK(theta(e0, e0).is_zero);
  CHECK(code_of([&] { (void)meet(e0, e0); }) == ErrorCode::IndistinguishableAtPrecision);
  CHECK(code_of([&] { (void)meet(e0, omega_end()); }) == ErrorCode::OmegaOperand);
}

TEST_CASE("fathers and sons") {
  const auto o = origin(Realization::PAdic, 2);
  CHECK(father(son(o, 0)) == o);
  const auto d = padic_vertex(from_int(1, 2), 1);  // D(1, 1/2)
  CHECK(son(o, 1) == d);
  CHECK(father(d) == o);
  CHECK(graph_distance(o, d) == 1);
  CHECK(graph_distance(d, d) == 0);
  CHECK(code_of([&] { (void)son(o, 2); }) == ErrorCode::BranchOutOfRange);

  const auto lo = origin(Realization::Lamplighter, 2);
  const auto ls = son(lo, 1);
  CHECK(ls.height == 1);
  CHECK(ls.lamps == LampConfig({{1, 1}}, 2));
  CHECK(to_string(ls) == "lamp:1:[1=1]");
  CHECK(father(ls) == lo);
}

TEST_CASE("vertex strings round trip") {
  std::mt19937_64 rng(3);
  for (auto [kind, q] : {std::pair{Realization::PAdic, 2}, {Realization::PAdic, 3}, {Realization::Lamplighter, 2},
                         {Realization::Lamplighter, 3}}) {
    for (int i = 0; i < 200; ++i) {
      const auto x = random_vertex(rng, kind, q);
      CHECK(parse_vertex(to_string(x), q) == x);
    }
  }
  CHECK(parse_vertex("p:2:0;1.1", 2) == padic_vertex(from_int(3, 2), 2));
  CHECK(code_of([] { (void)parse_vertex("p:2:0;1", 2); }) == ErrorCode::MalformedSyntax);
  CHECK(parse_end("lamp-end:5:[1=1]", Realization::Lamplighter, 2).known_upto == 5);
}

TEST_CASE("metric properties on random vertices") {
  std::mt19937_64 rng(11);
  for (auto [kind, q] : {std::pair{Realization::PAdic, 2}, {Realization::PAdic, 3}, {Realization::Lamplighter, 2}}) {
    for (int i = 0; i < 500; ++i) {
      const auto x = random_vertex(rng, kind, q);
      const auto y = random_vertex(rng, kind, q);
      const auto z = random_vertex(rng, kind, q);
      CHECK(graph_distance(x, y) == graph_distance(y, x));
      CHECK(graph_distance(x, z) <= graph_distance(x, y) + graph_distance(y, z));
      // Edge count along father chains to the meet.
      const auto m = meet(x, y);
      int steps = 0;
      for (auto w = x; w.height > m.height; w = father(w)) ++steps;
      for (auto w = y; w.height > m.height; w = father(w)) ++steps;
      CHECK(steps == graph_distance(x, y));
      // busemann from d(x, x^o) - d(o, x^o).
      const auto o = origin(kind, q);
      const auto mo = meet(x, o);
      CHECK(graph_distance(x, mo) - graph_distance(o, mo) == busemann(x));
    }
  }
}

TEST_CASE("theta is the p-adic norm of the difference") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(-500, 500);
  std::uniform_int_distribution<int> den(1, 64);
  for (int i = 0; i < 2000; ++i) {
    const auto a = from_rational(num(rng), den(rng), 2);
    const auto b = from_rational(num(rng), den(rng), 2);
    const auto c = from_rational(num(rng), den(rng), 2);
    const auto diff = a - b;
    if (diff.is_zero()) continue;
    CHECK(theta(padic_end(a), padic_end(b)) == pnorm(diff));
    if ((a - c).is_zero() || (b - c).is_zero()) continue;
    const auto ac = theta(padic_end(a), padic_end(c));
    const auto ab = theta(padic_end(a), padic_end(b));
    const auto bc = theta(padic_end(b), padic_end(c));
    CHECK(ac <= std::max(ab, bc, [](auto u, auto v) { return u < v; }));
  }
}

TEST_CASE("cones") {
  const auto d = padic_vertex(from_int(1, 2), 2);  // D(1, 1/4)
  CHECK(cone_contains(d, padic_end(from_int(5, 2))));
  CHECK_FALSE(cone_contains(d, padic_end(from_int(3, 2))));
  CHECK_FALSE(cone_contains(d, omega_end()));
}
