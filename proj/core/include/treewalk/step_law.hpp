#pragma once

// Finitely supported step laws mu on the affine group.

#include <cstdint>
#include <vector>

#include "treewalk/affine.hpp"
#include "treewalk/random_stream.hpp"

namespace treewalk {

struct Atom {
  AffineElement element;
  Rational weight;
};

struct LawOptions {
  // Accept phi values generating a proper subgroup of Z.
  bool allow_gcd = false;
  // Skip the non-exceptionality check altogether (degenerate test laws).
  bool skip_validation = false;
};

class StepLaw {
 public:
  // Throws EmptySupport, RealizationMismatch, WeightsNotNormalized,
  // NonExceptionalityFailed.  Atoms are kept sorted by their canonical
  // string so sampling does not depend on input order.
  explicit StepLaw(std::vector<Atom> atoms, LawOptions options = {});

  [[nodiscard]] const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  [[nodiscard]] Realization realization() const noexcept { return atoms_.front().element.kind; }
  [[nodiscard]] int q() const noexcept { return atoms_.front().element.q; }
  [[nodiscard]] PrecisionBudget budget() const noexcept { return budget_; }
  [[nodiscard]] const Rational& drift() const noexcept { return drift_; }
  [[nodiscard]] int drift_sign() const noexcept;
  [[nodiscard]] const NonExceptionalReport& validation() const noexcept { return validation_; }
  [[nodiscard]] const std::vector<int>& phis() const noexcept { return phis_; }

  // Consumes exactly one draw.
  [[nodiscard]] std::size_t sample_index(RandomStream& stream) const noexcept;
  [[nodiscard]] const AffineElement& sample(RandomStream& stream) const noexcept {
    return atoms_[sample_index(stream)].element;
  }

  // The law of X^-1.
  [[nodiscard]] StepLaw reversed() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<int> phis_;
  std::vector<std::uint64_t> cumulative_;  // integer thresholds out of denominator_
  std::uint64_t denominator_ = 1;
  Rational drift_;
  PrecisionBudget budget_;
  NonExceptionalReport validation_;
  LawOptions options_;
};

inline Rational drift(const StepLaw& law) { return law.drift(); }

struct MomentReport {
  Rational mean_abs_phi;
  Rational mean_norm;
  Rational mean_phi_squared;
  double epsilon = 1.0;
  // E[|b(X)|^(2+epsilon)] with |b| = d(b o, o) and b the horocyclic part.
  double mean_b_norm_power = 0.0;
};

MomentReport moment_report(const StepLaw& law, double epsilon = 1.0);

}  // namespace treewalk
