#include <array>
#include <cmath>

#include "doctest.h"
#include "treewalk/estimators.hpp"

using namespace treewalk;

namespace {

AffineElement pa(const char* text, PrecisionBudget b = {96, 16}) {
  return parse_element(text, Realization::PAdic, 2, b);
}

StepLaw single_s() {
  return StepLaw({{pa("affine(t = 0, a = 2)"), Rational(1)}}, LawOptions{false, true});
}

StepLaw drift_up() {
  return StepLaw({{pa("affine(t = 0, a = 2)"), Rational(3, 4)}, {pa("affine(t = 1, a = 1/2)"), Rational(1, 4)}});
}

StepLaw drift_down() {
  return StepLaw({{pa("affine(t = 0, a = 2)"), Rational(1, 4)}, {pa("affine(t = 1, a = 1/2)"), Rational(3, 4)}});
}

}  // namespace

TEST_CASE("single-atom walks are deterministic powers") {
  const StepLaw law = single_s();
  const AffineElement s = law.atoms().front().element;
  RandomStream stream(1, 2);
  run_right(law, 10, stream, [&](std::int64_t n, const AffineElement& r, int h) {
    CHECK(h == n);
    CHECK(same_to_precision(r, power(s, static_cast<int>(n))));
    return true;
  });
  RandomStream stream2(1, 2);
  const LadderRecord rec = ladder_times(law, 5, LadderDirection::Up, stream2);
  CHECK(rec.times == std::vector<std::int64_t>{1, 2, 3, 4, 5});
  CHECK(rec.heights == std::vector<int>{1, 2, 3, 4, 5});

  RandomStream stream3(1, 3);
  const Excursion ex = run_excursion(law, stream3);
  CHECK(ex.length == 1);
  CHECK(ex.block_height == 1);
  CHECK(ex.prefix.size() == 1);
  CHECK(is_identity(ex.prefix.front()));
}

TEST_CASE("ladder budget") {
  RandomStream stream(3, 4);
  try {
    (void)ladder_times(drift_down(), 1000, LadderDirection::Up, stream, 500);
    FAIL("expected StepBudgetExceeded");
  } catch (const StepBudgetExceeded& e) {
    CHECK(e.code() == ErrorCode::StepBudgetExceeded);
    CHECK(e.partial().steps == 500);
    CHECK(e.partial().times.size() < 1000);
  }
}

TEST_CASE("walks reproduce from (seed, stream)") {
  const StepLaw law = drift_up();
  auto heights = [&](std::uint64_t seed) {
    std::vector<int> hs;
    RandomStream stream(seed, stream_id(StreamPurpose::Steps, 9));
    run_left(law, 200, stream, [&](std::int64_t, const AffineElement&, int h) {
      hs.push_back(h);
      return true;
    });
    return hs;
  };
  CHECK(heights(11) == heights(11));
  CHECK(heights(11) != heights(12));
}

TEST_CASE("boundary limits") {
  // The single atom s = (0, 2): R_n o -> 0, so the limit is the end 0.
  const StepLaw law = single_s();
  RandomStream stream(5, 6);
  const BoundarySample b = sample_boundary_limit(law, 6, stream);
  CHECK(b.end.kind == End::Kind::PAdic);
  CHECK(valuation_at_least(b.end.point, 6));
  RandomStream down(5, 6);
  CHECK_THROWS_AS(sample_boundary_limit(drift_down(), 4, down), Error);

  // The sampled end does not depend on the audit, and audits agree.
  const StepLaw up = drift_up();
  for (std::uint64_t k = 0; k < 50; ++k) {
    RandomStream a(8, k), c(8, k);
    BoundaryOptions audited;
    audited.audit = true;
    const BoundarySample x = sample_boundary_limit(up, 4, a);
    const BoundarySample y = sample_boundary_limit(up, 4, c, audited);
    CHECK(x.end == y.end);
    CHECK_FALSE(y.audit_changed);
  }
}

TEST_CASE("regime report") {
  const RegimeReport down = height_regime_report(drift_down(), 200, 2000, 20261016);
  CHECK(down.classification == "converges to omega");
  const RegimeReport up = height_regime_report(drift_up(), 200, 2000, 20261016);
  CHECK(up.classification == "converges to a boundary end");
  CHECK(up.terminal.size() == 200);
}

TEST_CASE("local contraction is non-increasing for a centered law") {
  const StepLaw law({{pa("affine(t = 0, a = 2)"), Rational(1, 2)}, {pa("affine(t = 1, a = 1/2)"), Rational(1, 2)}});
  const End u = padic_end(PAdic::zero(2, 96, {96, 16}));
  const ContractionReport r = local_contraction(law, u, 0, 200, {100, 400, 1600}, 20261016);
  CHECK(r.medians.size() == 3);
  CHECK(r.non_increasing);
}

TEST_CASE("potential kernel basics") {
  const auto o = origin(Realization::PAdic, 2, {96, 16});
  const CylinderEvent f({o}, {o});
  KernelOptions ko;
  ko.trajectories = 200;
  // The single atom s visits V(o -> o) only at n = 0 when started at e.
  const StepLaw s = single_s();
  const KernelEstimate k = potential_kernel(identity_element(Realization::PAdic, 2, {96, 16}), f, s, ko);
  CHECK(k.value == doctest::Approx(1.0));
  CHECK(k.stderr_ == doctest::Approx(0.0));
  // An empty event has kernel 0.
  const CylinderEvent empty({o, o}, {o, act_vertex(s.atoms().front().element, o)});
  CHECK(potential_kernel(identity_element(Realization::PAdic, 2, {96, 16}), empty, drift_down(), ko).value == 0.0);

  // Same seed, same numbers; other thread counts give the same numbers too.
  const KernelEstimate a = potential_kernel(identity_element(Realization::PAdic, 2, {96, 16}), f, drift_down(), ko);
  const KernelEstimate b = potential_kernel(identity_element(Realization::PAdic, 2, {96, 16}), f, drift_down(), ko);
  CHECK(a.value == b.value);
  CHECK(a.stderr_ == b.stderr_);
  CHECK(a.value >= 1.0);
}

TEST_CASE("maximum principle for the kernel") {
  // By the strong Markov property g*U(f) <= sup_{h in f} h*U(f).
  const PrecisionBudget b{96, 16};
  const auto o = origin(Realization::PAdic, 2, b);
  const CylinderEvent f({o}, {o});
  const StepLaw law = drift_down();
  KernelOptions ko;
  ko.trajectories = 400;
  RandomStream stream(17, 18);
  auto unit = [&] { return from_int(2 * static_cast<std::int64_t>(stream.below(8)) + 1, 2, b); };
  double c = 0, c_err = 0;
  for (int i = 0; i < 20; ++i) {
    const auto h = padic_affine(from_int(static_cast<std::int64_t>(stream.below(16)), 2, b), unit());
    REQUIRE(f.contains(h));
    ko.stream_offset = 1000 * static_cast<std::uint64_t>(i);
    const KernelEstimate e = potential_kernel(h, f, law, ko);
    if (e.value > c) {
      c = e.value;
      c_err = e.stderr_;
    }
  }
  for (int i = 0; i < 20; ++i) {
    const auto g = padic_affine(from_rational(static_cast<std::int64_t>(stream.below(64)), 8, 2, b),
                                pshift(unit(), static_cast<int>(stream.below(9)) - 4));
    ko.stream_offset = 50000 + 1000 * static_cast<std::uint64_t>(i);
    const KernelEstimate e = potential_kernel(g, f, law, ko);
    CHECK(e.value >= 0.0);
    CHECK(e.value <= c + 4 * std::hypot(e.stderr_, c_err));
  }
}

TEST_CASE("ladder excursions and the mass of m") {
  const WaldReport w = wald_mass_check(drift_up(), 4000, 20261016);
  CHECK(w.exact == doctest::Approx(2.0));
  CHECK(std::abs(w.z) < 4);
  CHECK(std::abs(w.residual_z) < 4);
  CHECK_THROWS_AS(wald_mass_check(drift_down(), 10, 1), Error);
}

TEST_CASE("renewal identity for the single atom is exact") {
  const PrecisionBudget b{96, 16};
  const StepLaw law = single_s();
  ExcursionOptions eo;
  const auto inside = verify_renewal_identity(law, padic_vertex(PAdic::zero(2, 2, b), 2), {0}, 50, eo);
  CHECK(inside.lhs == doctest::Approx(1.0));
  CHECK(inside.rhs == doctest::Approx(1.0));
  CHECK(inside.agree);
  const auto outside = verify_renewal_identity(law, padic_vertex(from_int(1, 2, b), 2), {0}, 50, eo);
  CHECK(outside.lhs == 0.0);
  CHECK(outside.rhs == 0.0);
}

TEST_CASE("mbar of a single atom is the point mass at the inverse element") {
  // The reversed law of the single atom s^-1 is s, whose boundary limit is 0;
  // for the lamplighter the rotation part is trivial, so mbar is exactly the
  // translation by that end.
  const auto s = lamp_affine(2, LampConfig(), 1);
  const StepLaw law({{s, Rational(1)}}, LawOptions{false, true});
  RandomStream stream(1, 1);
  const BoundaryMeasureSample x = sample_mbar(law, 8, stream);
  CHECK(is_identity(x.element));
  CHECK(x.mass_scale == Rational(1));
}

TEST_CASE("invariance of m on discs") {
  const StepLaw law = drift_up();
  const PrecisionBudget b{96, 16};
  std::vector<BoundaryTest> tests;
  for (int c = 0; c < 4; ++c) {
    const auto d = padic_vertex(from_int(c, 2, b), 2);
    tests.push_back(disc_indicator(d));
    tests.push_back(averaged_by_law(disc_indicator(d), law));
  }
  ExcursionOptions eo;
  const MeasureEstimates m = estimate_m_misinv(law, tests, 4000, eo);
  CHECK(m.total_mass == doctest::Approx(2.0).epsilon(0.1));
  for (std::size_t i = 0; i < tests.size(); i += 2) {
    CHECK(agree(m.value[i], m.stderr_[i], m.value[i + 1], m.stderr_[i + 1], 4));
  }
}

TEST_CASE("rotation group of the support at the reference end") {
  const PrecisionBudget b{96, 16};
  CHECK(rotation_generators(drift_down()).empty());
  CHECK(rotation_periods(drift_down(), 3).empty());
  const StepLaw rot({{pa("affine(t = 0, a = 2)"), Rational(1, 4)},
                     {pa("affine(t = 1, a = 1/2)"), Rational(1, 2)},
                     {pa("affine(t = 0, a = 3/2)"), Rational(1, 4)}});
  // 2 * (3/2) = 3 is the only new unit, up to orientation.
  auto is_pm = [&](const PAdic& w, int r) {
    const PAdic x = from_int(r, 2, b);
    return w.same_to_precision(x) || pmul(w, x).same_to_precision(PAdic::one(2, b));
  };
  const auto gens = rotation_generators(rot);
  REQUIRE(gens.size() == 1);
  CHECK(is_pm(gens[0], 3));
  const auto periods = rotation_periods(rot, 3);
  REQUIRE(periods.size() == 3);
  CHECK(is_pm(periods[1].a, 9));
  for (const auto& g : periods) CHECK(phi(g) == 0);

  // The closure of <3> in Z_2^* is {u = 1, 3 mod 8}; Haar puts 1/4 on each
  // of 1, 3, 9, 11 mod 16.
  std::array<int, 16> counts{};
  for (std::uint64_t j = 0; j < 4000; ++j) {
    RandomStream stream(5, j);
    const PAdic r = sample_rotation(gens, 2, b, stream);
    for (int c = 1; c < 16; c += 2) {
      if (valuation_at_least(psub(r, from_int(c, 2, b)), 4)) ++counts[c];
    }
  }
  for (int c : {1, 3, 9, 11}) CHECK(std::abs(counts[c] - 1000) < 120);
  for (int c : {5, 7, 13, 15}) CHECK(counts[c] == 0);

  // 2 generates (Z/9)^*, so its closure is all of Z_3^*.
  std::array<int, 9> c3{};
  const PrecisionBudget b3{40, 16};
  for (std::uint64_t j = 0; j < 3000; ++j) {
    RandomStream stream(6, j);
    const PAdic r = sample_rotation({from_int(2, 3, b3)}, 3, b3, stream);
    for (int c = 1; c < 9; ++c) {
      if (valuation_at_least(psub(r, from_int(c, 3, b3)), 2)) ++c3[c];
    }
  }
  for (int c : {1, 2, 4, 5, 7, 8}) CHECK(std::abs(c3[c] - 500) < 90);
  CHECK(c3[3] + c3[6] == 0);
}
