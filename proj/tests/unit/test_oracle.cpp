#include <cmath>
#include <map>

#include "doctest.h"
#include "oracle.hpp"
#include "treewalk/affine.hpp"

using namespace treewalk;
using namespace treewalk::oracle;

TEST_CASE("oracle: pure height walk has the gambler's-ruin Green function") {
  // p_up = 1/4: G(0, 0) = 1 / |p - q| = 2, G(0, -k) = 2, G(0, k) = 2 (1/3)^k.
  const std::vector<OracleAtom> atoms{{0, 1, 0.25}, {0, -1, 0.75}};
  const auto r = exact_kernel(atoms, {{0, 0, 0}, {-3, 0, 0}, {2, 0, 0}, {2, 1, 0}}, -40, 8);
  // Killing above height 8 loses at most the reported truncation.
  CHECK(r.truncation < 1e-3);
  CHECK(std::abs(r.green[0] - 2.0) <= r.truncation);
  CHECK(std::abs(r.green[1] - 2.0) <= r.truncation);
  CHECK(std::abs(r.green[2] - 2.0 / 9) <= r.truncation);
  CHECK(r.green[3] == 0.0);
  CHECK(std::abs(r.green[0] - 2.0) > 1e-6);  // the truncation is real, not rounding
}

TEST_CASE("oracle agrees with forward propagation through the tree action") {
  const PrecisionBudget b{96, 16};
  const std::vector<OracleAtom> atoms{{0, 1, 0.125}, {3, 1, 0.125}, {1, -1, 0.5}, {5, -1, 0.25}};
  const std::vector<OracleTarget> targets{{0, 0, 0}, {-1, 0, 0}, {0, 1, 1}, {1, 1, 0}, {2, 3, 0}};
  const auto exact = exact_kernel(atoms, targets, -12, 8);

  std::vector<AffineElement> steps;
  for (const auto& a : atoms) {
    steps.push_back(padic_affine(from_int(a.t, 2, b), a.k > 0 ? from_int(2, 2, b) : from_rational(1, 2, 2, b)));
  }
  std::map<std::string, double> visits;
  std::map<std::string, std::pair<Vertex, double>> dist;
  const Vertex o = origin(Realization::PAdic, 2, b);
  dist[to_string(o)] = {o, 1.0};
  for (int n = 0; n < 400 && !dist.empty(); ++n) {
    std::map<std::string, std::pair<Vertex, double>> next;
    for (const auto& [key, vp] : dist) {
      visits[key] += vp.second;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        const Vertex y = act_vertex(steps[i], vp.first);
        if (y.height < -12 || y.height > 8) continue;
        auto& slot = next.try_emplace(to_string(y), y, 0.0).first->second;
        slot.second += vp.second * atoms[i].weight;
      }
    }
    dist.clear();
    for (auto& [key, vp] : next) {
      if (vp.second > 1e-15) dist.emplace(key, vp);
    }
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    CHECK(visits[to_string(target_vertex(targets[i], b))] == doctest::Approx(exact.green[i]).epsilon(1e-6));
  }
}
