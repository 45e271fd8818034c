#pragma once

// Randomized exact checks of the group structure and the tree geometry.

#include <cstdint>
#include <vector>

#include "treewalk/affine.hpp"
#include "treewalk/claims.hpp"
#include "treewalk/random_stream.hpp"

namespace treewalk {

// Random test data.  Valuations and heights stay within [-span, span].
PAdic random_padic(int p, PrecisionBudget budget, RandomStream& stream, int span = 6);
AffineElement random_element(Realization kind, int q, PrecisionBudget budget, RandomStream& stream, int span = 6);
Vertex random_vertex(Realization kind, int q, PrecisionBudget budget, RandomStream& stream, int span = 6);
// Ends of the boundary minus omega.  The lamplighter ends are known up to
// position span + 40.
End random_end(Realization kind, int q, PrecisionBudget budget, RandomStream& stream, int span = 6);
// A second end sharing a random-length prefix with `e`.
End nearby_end(const End& e, PrecisionBudget budget, RandomStream& stream, int span = 6);

struct SuiteCounts {
  std::int64_t cases = 0;
  std::int64_t failures = 0;
};

// Group axioms, phi homomorphism, g = b s^n round trip, action
// homomorphism, meet equivariance, theta scaling, norm symmetry and
// subadditivity.  One claim per property.
std::vector<Claim> run_algebra_suite(Realization kind, int q, std::int64_t cases, std::uint64_t seed,
                                     PrecisionBudget budget = {});

// theta(a, b) == |a - b|_p for random p-adic end pairs.
Claim run_isometry_suite(int p, std::int64_t cases, std::uint64_t seed, PrecisionBudget budget = {});

}  // namespace treewalk
