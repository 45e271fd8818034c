#pragma once

// Right and left random walks R_n = X_1 ... X_n and L_n = X_n ... X_1, their
// ladder epochs, and the boundary limit of R_n o.

#include <cstdint>
#include <vector>

#include "treewalk/error.hpp"
#include "treewalk/step_law.hpp"

namespace treewalk {

// visit(n, element, height) is called for n = 0..horizon and returns false
// to stop early.  `start` replaces the identity as R_0.
template <class Visitor>
void run_right(const StepLaw& law, std::int64_t horizon, RandomStream& stream, Visitor&& visit,
               const AffineElement* start = nullptr) {
  AffineElement r = start ? *start : identity_element(law.realization(), law.q(), law.budget());
  int height = phi(r);
  if (!visit(std::int64_t{0}, static_cast<const AffineElement&>(r), height)) return;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const std::size_t i = law.sample_index(stream);
    r = compose(r, law.atoms()[i].element);
    height += law.phis()[i];
    if (!visit(n, static_cast<const AffineElement&>(r), height)) return;
  }
}

template <class Visitor>
void run_left(const StepLaw& law, std::int64_t horizon, RandomStream& stream, Visitor&& visit) {
  AffineElement l = identity_element(law.realization(), law.q(), law.budget());
  int height = 0;
  if (!visit(std::int64_t{0}, static_cast<const AffineElement&>(l), height)) return;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const std::size_t i = law.sample_index(stream);
    l = compose(law.atoms()[i].element, l);
    height += law.phis()[i];
    if (!visit(n, static_cast<const AffineElement&>(l), height)) return;
  }
}

enum class LadderDirection { Up, Down };

struct LadderRecord {
  LadderDirection direction = LadderDirection::Up;
  std::vector<std::int64_t> times;
  std::vector<int> heights;
  // L at ascending epochs, R at descending epochs (empty unless requested).
  std::vector<AffineElement> elements;
  std::int64_t steps = 0;
};

class StepBudgetExceeded : public Error {
 public:
  StepBudgetExceeded(const std::string& what, LadderRecord partial)
      : Error(ErrorCode::StepBudgetExceeded, what), partial_(std::move(partial)) {}
  [[nodiscard]] const LadderRecord& partial() const noexcept { return partial_; }

 private:
  LadderRecord partial_;
};

inline constexpr std::int64_t kDefaultStepBudget = 10'000'000;

LadderRecord ladder_times(const StepLaw& law, int count, LadderDirection direction, RandomStream& stream,
                          std::int64_t budget = kDefaultStepBudget, bool keep_elements = true);

// One excursion of the left walk up to its first ascending ladder time l:
// L_0..L_{l-1} with heights S_0..S_{l-1}, and the block L_l.
struct Excursion {
  std::vector<AffineElement> prefix;
  std::vector<int> heights;
  AffineElement block;
  int block_height = 0;
  std::int64_t length = 0;
  int min_height = 0;
};

Excursion run_excursion(const StepLaw& law, RandomStream& stream, std::int64_t budget = kDefaultStepBudget,
                        bool keep_prefix = true);

struct BoundaryOptions {
  int window = 3;   // consecutive ascending ladder epochs with a stable prefix
  int guard = 12;   // required height above the prefix depth
  std::int64_t budget = kDefaultStepBudget;
  bool audit = false;  // keep walking another `guard` levels and recheck
};

struct BoundarySample {
  End end;  // known to absolute depth `depth`
  std::int64_t steps = 0;
  int epochs = 0;
  bool audit_changed = false;
};

// Throws NonPositiveDrift unless the law drifts upward.
BoundarySample sample_boundary_limit(const StepLaw& law, int depth, RandomStream& stream,
                                     const BoundaryOptions& options = {});
// Boundary limit of the walk whose steps are ladder blocks L_l of `law`; its
// law is the measure m_l.
BoundarySample sample_ladder_boundary_limit(const StepLaw& law, int depth, RandomStream& stream,
                                            const BoundaryOptions& options = {});

// `count` independent boundary limits, each known to `depth`; sample k uses
// the boundary stream stream_offset + k.
std::vector<End> sample_boundary_limits(const StepLaw& law, int depth, std::int64_t count, std::uint64_t seed,
                                        std::uint64_t stream_offset = 0);

// Fraction of trajectories whose depth-`depth` boundary prefix survives the
// audit (another `guard` levels of walking).
double prefix_stability(const StepLaw& law, int depth, std::int64_t trajectories, std::uint64_t seed);

// For each depth, the largest empirical mass of a single disc at that depth.
std::vector<double> max_disc_masses(const std::vector<End>& ends, const std::vector<int>& depths);

struct RegimeReport {
  std::int64_t trajectories = 0;
  std::int64_t horizon = 0;
  int threshold = 20;
  int extreme = 10;
  std::vector<int> terminal;
  std::vector<int> minimum;
  std::vector<int> maximum;
  double frac_below = 0;          // terminal height < -threshold
  double frac_above = 0;          // terminal height > threshold
  double frac_both_extremes = 0;  // max > extreme and min < -extreme
  std::string classification;
};

RegimeReport height_regime_report(const StepLaw& law, std::int64_t trajectories, std::int64_t horizon,
                                  std::uint64_t seed, int threshold = 20, int extreme = 10);

// For each N, the median over trajectories of
//   M_N = max { q^-phi(L_n) : N/2 <= n <= N, L_n u in the ball at `ball_height` about u's center }.
struct ContractionReport {
  std::vector<std::int64_t> horizons;
  std::vector<double> medians;
  std::int64_t trajectories = 0;
  std::int64_t undecided = 0;  // trajectories that ran out of precision
  bool non_increasing = false;
};

ContractionReport local_contraction(const StepLaw& law, const End& u, int ball_height, std::int64_t trajectories,
                                    const std::vector<std::int64_t>& horizons, std::uint64_t seed);

}  // namespace treewalk
