#include "treewalk/step_law.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "treewalk/error.hpp"

namespace treewalk {

StepLaw::StepLaw(std::vector<Atom> atoms, LawOptions options) : atoms_(std::move(atoms)), options_(options) {
  if (atoms_.empty()) fail(ErrorCode::EmptySupport, "a step law needs at least one atom");
  const auto& first = atoms_.front().element;
  Rational total(0);
  for (const auto& atom : atoms_) {
    if (atom.element.kind != first.kind || atom.element.q != first.q) {
      fail(ErrorCode::RealizationMismatch, "atoms of a law must share a realization");
    }
    if (atom.weight <= Rational(0)) fail(ErrorCode::WeightsNotNormalized, "weights must be positive");
    total += atom.weight;
  }
  if (total != Rational(1)) fail(ErrorCode::WeightsNotNormalized, "weights sum to " + to_string(total));
  if (first.kind == Realization::PAdic) budget_ = first.a.budget();

  std::stable_sort(atoms_.begin(), atoms_.end(),
                   [](const Atom& x, const Atom& y) { return to_string(x.element) < to_string(y.element); });

  std::vector<AffineElement> elements;
  for (const auto& atom : atoms_) elements.push_back(atom.element);
  validation_ = validate_non_exceptional(elements, options.allow_gcd);
  if (!options.skip_validation && !validation_.passed) {
    std::string why;
    for (const auto& m : validation_.messages) why += (why.empty() ? "" : "; ") + m;
    fail(ErrorCode::NonExceptionalityFailed, why);
  }

  drift_ = Rational(0);
  for (const auto& atom : atoms_) {
    phis_.push_back(phi(atom.element));
    drift_ += atom.weight * Rational(phis_.back());
    denominator_ = std::lcm(denominator_, static_cast<std::uint64_t>(atom.weight.denominator()));
  }
  std::uint64_t acc = 0;
  for (const auto& atom : atoms_) {
    acc += static_cast<std::uint64_t>(atom.weight.numerator()) *
           (denominator_ / static_cast<std::uint64_t>(atom.weight.denominator()));
    cumulative_.push_back(acc);
  }
}

int StepLaw::drift_sign() const noexcept {
  return drift_.numerator() > 0 ? 1 : (drift_.numerator() < 0 ? -1 : 0);
}

std::size_t StepLaw::sample_index(RandomStream& stream) const noexcept {
  const std::uint64_t x = stream.below(denominator_);
  return static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), x) - cumulative_.begin());
}

StepLaw StepLaw::reversed() const {
  std::vector<Atom> inv;
  for (const auto& atom : atoms_) inv.push_back({invert(atom.element), atom.weight});
  return StepLaw(std::move(inv), options_);
}

MomentReport moment_report(const StepLaw& law, double epsilon) {
  MomentReport r;
  r.epsilon = epsilon;
  const auto s = default_homothety(law.realization(), law.q(), law.budget());
  for (const auto& atom : law.atoms()) {
    const int f = phi(atom.element);
    r.mean_abs_phi += atom.weight * Rational(std::abs(f));
    r.mean_phi_squared += atom.weight * Rational(f * f);
    r.mean_norm += atom.weight * Rational(norm(atom.element));
    const int b = norm(decompose(atom.element, s).b);
    r.mean_b_norm_power += to_double(atom.weight) * std::pow(static_cast<double>(b), 2.0 + epsilon);
  }
  return r;
}

}  // namespace treewalk
