#pragma once

// Monte Carlo estimators: the potential kernel g*U, the invariant measure m
// built from ladder excursions, the limit measures of g*U, and the checks
// that tie them together.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "treewalk/claims.hpp"
#include "treewalk/cylinder.hpp"
#include "treewalk/walk.hpp"

namespace treewalk {

// ---------------------------------------------------------------------------
// Potential kernel

struct KernelOptions {
  std::int64_t trajectories = 10000;
  std::int64_t horizon = 100000;
  int delta = 15;
  std::int64_t min_steps = 50;
  // Above this tail bound the estimate is flagged as truncated.
  double tail_tolerance = 0.01;
  std::uint64_t seed = 20261016;
  std::uint64_t stream_offset = 0;
  bool audit = true;
};

struct KernelEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::int64_t trajectories = 0;
  std::int64_t horizon = 0;
  // Mean number of visits after the stopping point, measured on an audit
  // segment (drifting laws) or on the second half of the horizon (centered).
  double tail_bound = 0.0;
  bool truncated = false;
  std::int64_t unfinished = 0;  // hit the horizon before the stopping rule
  std::int64_t aborted = 0;     // ran out of p-adic precision
  double mean_steps = 0.0;
};

// E[sum_n 1{g R_n in f}] for every f, from shared trajectories.
std::vector<KernelEstimate> potential_kernel(const AffineElement& g, const std::vector<CylinderEvent>& fs,
                                             const StepLaw& law, const KernelOptions& options);
KernelEstimate potential_kernel(const AffineElement& g, const CylinderEvent& f, const StepLaw& law,
                                const KernelOptions& options);

// ---------------------------------------------------------------------------
// Ladder excursions and the invariant measure m

struct WaldReport {
  std::int64_t excursions = 0;
  double mean_l = 0, mean_Sl = 0;
  double stderr_l = 0, stderr_Sl = 0;
  double ratio = 0, ratio_stderr = 0;  // E[l] / E[S_l]
  double exact = 0;                    // 1 / drift
  double z = 0;
  double residual = 0, residual_stderr = 0;  // E[S_l - l * drift]
  double residual_z = 0;
};

// Throws NonPositiveDrift.
WaldReport wald_mass_check(const StepLaw& law, std::int64_t excursions, std::uint64_t seed,
                           std::int64_t budget = kDefaultStepBudget);

// A bounded function on the boundary, evaluated at ends known to `depth`.
struct BoundaryTest {
  std::string name;
  int depth = 0;
  std::function<double(const End&)> f;
};

BoundaryTest disc_indicator(const Vertex& disc);
// (Pf)(u) = E[f(X u)].
BoundaryTest averaged_by_law(const BoundaryTest& test, const StepLaw& law);

struct MeasureEstimates {
  std::vector<std::string> names;
  std::vector<double> value;
  std::vector<double> stderr_;
  double total_mass = 0, total_mass_stderr = 0;  // f = 1: E[l] / E[S_l]
  double mean_Sl = 0, stderr_Sl = 0;
  std::int64_t excursions = 0;
  bool heavy_tail_warning = false;
};

struct ExcursionOptions {
  std::uint64_t seed = 20261016;
  std::uint64_t stream_offset = 0;
  std::int64_t budget = kDefaultStepBudget;
  BoundaryOptions boundary;
};

// m(f) = E[sum_{k<l} f(L_k u)] / E[S_l] with u drawn from m_l, independently
// of the excursion.
MeasureEstimates estimate_m_misinv(const StepLaw& law, const std::vector<BoundaryTest>& tests,
                                   std::int64_t excursions, const ExcursionOptions& options);

// ---------------------------------------------------------------------------
// Limit measures

struct BoundaryMeasureSample {
  AffineElement element;  // (xi, r): translation by xi followed by rotation r
  Rational mass_scale;
};

// Generators of the rotations (0, r) at the reference end that lie in the
// closed group generated by the support: unit parts of the multiplier
// products of total phi zero.  Assumes that group contains every translation,
// which holds whenever the support generates a non-exceptional walk with dense
// translation parts.  Empty for the lamplighter and for laws whose
// multipliers are pure powers of p.
std::vector<PAdic> rotation_generators(const StepLaw& law);

// Up to `count` rotations (0, r) from the group above, cycling through the
// generators and their powers; empty when that group is trivial.
std::vector<AffineElement> rotation_periods(const StepLaw& law, int count);

// Haar-uniform element of the closure of <gens> in Z_p^*, to working
// precision.  Returns one for an empty list.
PAdic sample_rotation(const std::vector<PAdic>& gens, int p, PrecisionBudget budget, RandomStream& stream);

// (xi, r) with xi from the boundary limit of law_hat and r Haar on the
// rotations of the group generated by its support.  Throws NonPositiveDrift
// unless law_hat drifts upward.
BoundaryMeasureSample sample_mbar(const StepLaw& law_hat, int depth, RandomStream& stream);

struct LimitMeasureEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  Rational mass;
  std::int64_t samples = 0;
};

// lim_{g -> b alpha} g*U(f) for a downward-drifting law: the mass -1/drift
// times P[s^level x^-1 in b^-1 f] with x ~ mbar of the reversed law.
LimitMeasureEstimate limit_measure_value(const CylinderEvent& f, const StepLaw& law, std::int64_t samples,
                                         std::uint64_t seed, const std::optional<AffineElement>& b = {});

// ---------------------------------------------------------------------------
// Suites

struct KernelRow {
  std::string series;
  int n = 0;
  KernelEstimate estimate;
};

struct SuiteResult {
  std::vector<Claim> claims;
  std::vector<KernelRow> kernel_rows;
};

struct LimitOptions {
  KernelOptions kernel;
  std::int64_t limit_samples = 100000;
  double sigmas = 3.0;
  double null_threshold = 0.05;
  // Horocyclic elements fixing the reference end; each gives a b s^n series.
  std::vector<AffineElement> periods;
  // Limits toward b alpha: the b s^n series is compared with the limit
  // measure of the b^-1-translated cylinder (downward drift only).
  std::optional<AffineElement> direction;
};

// Kernel estimates along s^n for n in n_list, compared with the limit
// measure (downward drift), a decay to 0 (upward drift), or reported as a
// trend (centered).
SuiteResult verify_boundary_limit(const StepLaw& law, const CylinderEvent& f, const std::vector<int>& n_list,
                                  const LimitOptions& options);

enum class OmegaRegime { Descend, AscendEscape };

// g_n = s^-n (descend) or (p^-n, p^n) (ascend-escape, p-adic only).
SuiteResult verify_omega_limit(const StepLaw& law, const CylinderEvent& f, OmegaRegime regime, int n,
                               const LimitOptions& options);

struct RenewalReport {
  double lhs = 0, lhs_stderr = 0;
  double rhs = 0, rhs_stderr = 0;
  double truncation = 0;  // mass of the dropped z terms, per unit of E[S_l]
  double mean_Sl_lhs = 0, mean_Sl_lhs_stderr = 0;
  double mean_Sl_rhs = 0, mean_Sl_rhs_stderr = 0;
  int z_max = 0;
  bool agree = false;
  bool normalizer_agrees = false;
  // The dropped z terms outweigh the statistical tolerance.
  bool truncation_too_coarse = false;
};

// The product cylinder f = disc x levels on (boundary x Z).  The left side
// runs the z-sum of F(u, z) = E[sum_{k<l} f(L_k u, S_k + z)] up to
// max(levels) + margin; the right side is |levels| m(disc).  Both sides use
// independent streams.
RenewalReport verify_renewal_identity(const StepLaw& law, const Vertex& disc, const std::vector<int>& levels,
                                      std::int64_t excursions, const ExcursionOptions& options, int margin = 30,
                                      double sigmas = 3.0);

}  // namespace treewalk
