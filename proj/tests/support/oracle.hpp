#pragma once

// Exact potential kernel of a small Aff(Q_2) instance by linear algebra.
//
// For g = identity, sum_n P[R_n o = y] = sum_n P[Z_n = y] with the vertex
// chain Z_n = X_n Z_{n-1}, Z_0 = o (R_n and X_n ... X_1 have the same law).
// A vertex D(c, h) is coded by (h, w) with w = 2^-h c mod Z_2.  A step
// (t, 2^k) with integer t sends (h, w) to (h + k, w + t 2^-(h+k)), so as long
// as heights stay at most H the coordinate w lives in 2^-H Z / Z and the chain
// is finite.  Leaving [low, high] kills the chain; the induced error is
// bounded by the up- and down-crossing probabilities.

#include <cstdint>
#include <vector>

#include "treewalk/tree.hpp"

namespace treewalk::oracle {

struct OracleAtom {
  std::int64_t t = 0;  // integer translation
  int k = 0;           // multiplier 2^k, |k| = 1
  double weight = 0;
};

struct OracleTarget {
  int height = 0;
  std::int64_t num = 0;  // center num / 2^den_log2
  int den_log2 = 0;
};

struct OracleResult {
  std::vector<double> green;  // expected visits to each target, from o
  double truncation = 0;      // bound on the error of every entry
  std::int64_t states = 0;
};

OracleResult exact_kernel(const std::vector<OracleAtom>& atoms, const std::vector<OracleTarget>& targets,
                          int low, int high);

// The matching tree vertex for the Monte Carlo side.
Vertex target_vertex(const OracleTarget& y, PrecisionBudget budget);

}  // namespace treewalk::oracle
