// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.  Every line carries the statistic it was decided on.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "oracle.hpp"
#include "treewalk/algebra_suite.hpp"
#include "treewalk/estimators.hpp"

using namespace treewalk;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20261016;
const PrecisionBudget kBudget{96, 16};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

AffineElement pa(const char* text) { return parse_element(text, Realization::PAdic, 2, kBudget); }

StepLaw law_of(std::vector<std::pair<const char*, Rational>> atoms) {
  std::vector<Atom> list;
  for (auto& [text, w] : atoms) list.push_back({pa(text), w});
  return StepLaw(std::move(list));
}

StepLaw drift_up() {
  return law_of({{"affine(t = 0, a = 2)", Rational(3, 4)}, {"affine(t = 1, a = 1/2)", Rational(1, 4)}});
}
StepLaw drift_down() {
  return law_of({{"affine(t = 0, a = 2)", Rational(1, 4)}, {"affine(t = 1, a = 1/2)", Rational(3, 4)}});
}
// +-1 and +-12 height steps: the +-10 window is well inside sqrt(N) at N = 10^4.
StepLaw centered() {
  return law_of({{"affine(t = 0, a = 2)", Rational(1, 4)},
                 {"affine(t = 1, a = 1/2)", Rational(1, 4)},
                 {"affine(t = 0, a = 4096)", Rational(1, 4)},
                 {"affine(t = 1, a = 1/4096)", Rational(1, 4)}});
}
StepLaw centered_unit() {
  return law_of({{"affine(t = 0, a = 2)", Rational(1, 2)}, {"affine(t = 1, a = 1/2)", Rational(1, 2)}});
}
// Drift -1/2 with the rotation 2 * (3/2) = 3 in the generated group.
StepLaw drift_down_rotations() {
  return law_of({{"affine(t = 0, a = 2)", Rational(1, 4)},
                 {"affine(t = 1, a = 1/2)", Rational(1, 2)},
                 {"affine(t = 0, a = 3/2)", Rational(1, 4)}});
}

Vertex disc(std::int64_t center, int height) { return padic_vertex(from_int(center, 2, kBudget), height); }
Vertex o() { return origin(Realization::PAdic, 2, kBudget); }

bool all_pass(const std::vector<Claim>& claims, std::string& detail, const std::string& prefix = "") {
  bool ok = true;
  int n = 0;
  for (const auto& c : claims) {
    if (!prefix.empty() && c.id.rfind(prefix, 0) != 0) continue;
    ++n;
    if (c.verdict != Verdict::Pass) {
      ok = false;
      detail += " [" + c.id + ": " + fmt(c.estimate) + " vs " + fmt(c.reference) + ", tol " + fmt(c.tolerance) + "]";
    }
  }
  return ok && n > 0;
}

// ---------------------------------------------------------------------------

Outcome c1_algebra() {
  Outcome r{true, ""};
  std::int64_t cases = 0;
  for (auto [kind, q, name] : {std::tuple{Realization::PAdic, 2, "p=2"}, std::tuple{Realization::PAdic, 3, "p=3"},
                               std::tuple{Realization::Lamplighter, 2, "q=2 lamplighter"}}) {
    const auto claims = run_algebra_suite(kind, q, 10000, kSeed, q == 2 ? kBudget : PrecisionBudget{});
    std::int64_t failures = 0;
    for (const auto& c : claims) {
      failures += c.verdict == Verdict::Pass ? 0 : 1;
      for (const auto& [k, v] : c.stats) {
        if (k == "cases") cases += static_cast<std::int64_t>(v);
      }
    }
    r.pass = r.pass && failures == 0 && claims.size() == 9;
    r.detail += std::string(name) + ": " + std::to_string(claims.size() - failures) + "/" +
                std::to_string(claims.size()) + " properties; ";
  }
  r.detail += std::to_string(cases) + " cases checked";
  return r;
}

Outcome c2_isometry() {
  const Claim c = run_isometry_suite(2, 10000, kSeed, kBudget);
  return {c.verdict == Verdict::Pass, c.note};
}

Outcome c3_wald() {
  const WaldReport w = wald_mass_check(drift_up(), 100000, kSeed);
  const bool ok = std::abs(w.z) <= 3 && std::abs(w.residual_z) <= 3;
  return {ok, "E[l]/E[S_l] = " + fmt(w.ratio) + " +- " + fmt(w.ratio_stderr) + " (exact " + fmt(w.exact) +
                  ", z " + fmt(w.z, 3) + "); residual " + fmt(w.residual) + " +- " + fmt(w.residual_stderr) +
                  " (z " + fmt(w.residual_z, 3) + "); " + std::to_string(w.excursions) + " excursions"};
}

Outcome c4_regimes() {
  const RegimeReport down = height_regime_report(drift_down(), 1000, 10000, kSeed);
  const double stable = prefix_stability(drift_up(), 4, 1000, kSeed);
  const RegimeReport mid = height_regime_report(centered(), 1000, 10000, kSeed);
  const RegimeReport unit = height_regime_report(centered_unit(), 1000, 10000, kSeed);
  const bool ok = down.frac_below >= 0.99 && stable >= 0.99 && mid.frac_both_extremes >= 0.95;
  return {ok, "drift -1/2 below -20: " + fmt(down.frac_below) + "; drift +1/2 depth-4 prefix stable: " +
                  fmt(stable) + "; centered both extremes past 10: " + fmt(mid.frac_both_extremes) +
                  " (unit-step centered law, informational: " + fmt(unit.frac_both_extremes) + ")"};
}

Outcome c5_no_atoms() {
  const auto ends = sample_boundary_limits(drift_up(), 6, 10000, kSeed, 1ULL << 40);
  const auto m = max_disc_masses(ends, {2, 4, 6});
  return {m[0] > m[1] && m[1] > m[2],
          "max disc mass at depths 2, 4, 6: " + fmt(m[0]) + ", " + fmt(m[1]) + ", " + fmt(m[2]) + " over 10^4 ends"};
}

Outcome c6_invariance() {
  // Laws of xi and X xi from independent sample sets, on the eight depth-3
  // discs of the unit ball and on its complement.
  const StepLaw law = drift_up();
  const std::int64_t n = 100000;
  const auto xs = sample_boundary_limits(law, 6, n, kSeed, 2ULL << 40);
  const auto ys = sample_boundary_limits(law, 6, n, kSeed, 3ULL << 40);
  auto cell = [](const End& e) {
    const Vertex top = end_ancestor(e, 0);
    if (!(top == o())) return std::string("outside");
    return to_string(end_ancestor(e, 3));
  };
  std::map<std::string, double> a, b;
  for (const auto& x : xs) a[cell(x)] += 1;
  for (std::int64_t k = 0; k < n; ++k) {
    RandomStream stream(kSeed, stream_id(StreamPurpose::Steps, (4ULL << 40) + static_cast<std::uint64_t>(k)));
    const AffineElement& step = law.atoms()[law.sample_index(stream)].element;
    b[cell(act_end(step, ys[static_cast<std::size_t>(k)]))] += 1;
  }
  std::vector<std::string> cells{"outside"};
  for (int c = 0; c < 8; ++c) cells.push_back(to_string(disc(c, 3)));
  double zmax = 0;
  std::string worst;
  for (const auto& name : cells) {
    const double pa_ = a[name] / n, pb = b[name] / n, pool = (pa_ + pb) / 2;
    const double se = std::sqrt(std::max(pool * (1 - pool), 1e-12) * 2.0 / n);
    const double z = std::abs(pa_ - pb) / se;
    if (z > zmax) {
      zmax = z;
      worst = name + " " + fmt(pa_) + " vs " + fmt(pb);
    }
  }
  return {zmax <= 3, std::to_string(cells.size()) + " cells, max |z| = " + fmt(zmax, 3) + " at " + worst +
                         "; 10^5 ends per side"};
}

Outcome c7_oracle() {
  using namespace oracle;
  const std::vector<OracleAtom> atoms{{0, 1, 1.0 / 8}, {3, 1, 1.0 / 8}, {1, -1, 1.0 / 2}, {5, -1, 1.0 / 4}};
  const StepLaw law = law_of({{"affine(t = 0, a = 2)", Rational(1, 8)},
                              {"affine(t = 3, a = 2)", Rational(1, 8)},
                              {"affine(t = 1, a = 1/2)", Rational(1, 2)},
                              {"affine(t = 5, a = 1/2)", Rational(1, 4)}});
  // Every vertex within distance 2 of o, as (height, center numerator, log2 denominator).
  const std::vector<OracleTarget> targets{{0, 0, 0},  {-1, 0, 0}, {-2, 0, 0}, {0, 1, 1}, {1, 0, 0},
                                          {1, 1, 0},  {2, 0, 0},  {2, 1, 0},  {2, 2, 0}, {2, 3, 0}};
  const OracleResult exact = exact_kernel(atoms, targets, -30, 10);
  std::vector<CylinderEvent> fs;
  for (const auto& y : targets) fs.emplace_back(std::vector<Vertex>{o()}, std::vector<Vertex>{target_vertex(y, kBudget)});
  KernelOptions ko;
  ko.trajectories = 100000;
  ko.seed = kSeed;
  const auto est = potential_kernel(identity_element(Realization::PAdic, 2, kBudget), fs, law, ko);
  double zmax = 0;
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto& e = est[i];
    const double slack = e.tail_bound + exact.truncation;
    const bool agree_i = !e.truncated && agree(e.value, e.stderr_, exact.green[i], 0.0, 3, slack);
    ok = ok && agree_i;
    zmax = std::max(zmax, std::abs(e.value - exact.green[i]) / std::max(e.stderr_, 1e-12));
    if (!agree_i) detail += " [" + fs[i].to_string() + ": " + fmt(e.value) + " vs " + fmt(exact.green[i]) + "]";
  }
  return {ok, std::to_string(fs.size()) + " cylinders, max |z| = " + fmt(zmax, 3) + ", oracle states " +
                  std::to_string(exact.states) + ", truncation <= " + fmt(exact.truncation, 2) +
                  ", G(o,o) = " + fmt(exact.green[0]) + " vs " + fmt(est[0].value) + " +- " + fmt(est[0].stderr_) +
                  detail};
}

Outcome c8_boundary_limit() {
  LimitOptions lo;
  lo.kernel.trajectories = 100000;
  lo.kernel.seed = kSeed;
  lo.limit_samples = 100000;
  const CylinderEvent f({o()}, {o()});
  const SuiteResult r = verify_boundary_limit(drift_down(), f, {15, 20, 25}, lo);
  std::string detail;
  const bool ok = all_pass(r.claims, detail);
  std::string values;
  for (const auto& row : r.kernel_rows) values += "n=" + std::to_string(row.n) + ": " + fmt(row.estimate.value) + "; ";
  std::string limit;
  for (const auto& c : r.claims) {
    if (c.id == "boundary-limit/s^15") limit = "limit " + fmt(c.reference);
  }
  return {ok, values + limit + " (mass 2); " + std::to_string(r.claims.size()) + " comparisons" + detail};
}

Outcome c9_null_limits() {
  LimitOptions lo;
  lo.kernel.trajectories = 20000;
  lo.kernel.seed = kSeed;
  const CylinderEvent f({o()}, {o()});
  bool ok = true;
  std::string detail;
  {
    const SuiteResult r = verify_boundary_limit(drift_up(), f, {30}, lo);
    ok = all_pass(r.claims, detail, "boundary-limit/null") && ok;
    detail += "(a) s^30, drift +1/2: " + fmt(r.kernel_rows.back().estimate.value) + "; ";
  }
  detail += "(b) s^-30:";
  for (auto [law, name] : {std::pair{drift_up(), "+1/2"}, std::pair{drift_down(), "-1/2"}, std::pair{centered(), "0"}}) {
    LimitOptions l2 = lo;
    if (law.drift_sign() == 0) l2.kernel.horizon = 10000;
    const SuiteResult r = verify_omega_limit(law, f, OmegaRegime::Descend, 30, l2);
    ok = all_pass(r.claims, detail) && ok;
    detail += std::string(" drift ") + name + " " + fmt(r.claims.front().estimate) + ";";
  }
  {
    const SuiteResult r = verify_omega_limit(drift_down(), f, OmegaRegime::AscendEscape, 30, lo);
    ok = all_pass(r.claims, detail) && ok;
    detail += " (c) (2^-30, 2^30), drift -1/2: " + fmt(r.claims.front().estimate);
  }
  return {ok, detail + " (threshold 0.05)"};
}

Outcome c10_renewal() {
  ExcursionOptions eo;
  eo.seed = kSeed;
  bool ok = true;
  std::string detail;
  for (int c : {0, 1}) {
    const Vertex d = disc(c, 1);
    const RenewalReport r = verify_renewal_identity(drift_up(), d, {0, 1}, 100000, eo, 30, 3.0);
    ok = ok && r.agree && !r.truncation_too_coarse;
    detail += to_string(d) + " x {0,1}: " + fmt(r.lhs) + " +- " + fmt(r.lhs_stderr) + " vs " + fmt(r.rhs) + " +- " +
              fmt(r.rhs_stderr) + ", truncation " + fmt(r.truncation, 2) + "; ";
  }
  return {ok, detail + "10^5 excursions"};
}

Outcome c11_periods() {
  const StepLaw law = drift_down_rotations();
  LimitOptions lo;
  lo.kernel.trajectories = 100000;
  lo.kernel.seed = kSeed;
  lo.periods = rotation_periods(law, 3);
  if (lo.periods.size() != 3) return {false, "fewer than three rotations in the generated group"};
  bool ok = true;
  std::string detail;
  for (const auto& f : {CylinderEvent({o()}, {o()}), CylinderEvent({o()}, {disc(1, 2)})}) {
    lo.limit_samples = 0;
    const SuiteResult r = verify_boundary_limit(law, f, {20}, lo);
    std::string sub;
    ok = all_pass(r.claims, sub, "boundary-limit/b") && ok;
    detail += f.to_string() + ":";
    for (const auto& row : r.kernel_rows) detail += " " + row.series + " " + fmt(row.estimate.value);
    detail += sub + "; ";
  }
  std::string bs;
  for (const auto& b : lo.periods) bs += " " + to_string(b);
  return {ok, detail + "b =" + bs};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome c12_determinism() {
  const fs::path root = fs::temp_directory_path() / ("treewalk-acceptance-" + std::to_string(::getpid()));
  struct Run {
    const char* config;
    const char* suite;
    std::int64_t trajectories;
  };
  const std::vector<Run> runs{{"padic_drift_up.conf", "all", 300},
                              {"padic_drift_down.conf", "all", 300},
                              {"padic_centered.conf", "all", 200},
                              {"lamplighter_drift_up.conf", "all", 300}};
  bool ok = true;
  int files = 0;
  std::string detail;
  std::ostringstream sink;
  for (const auto& run : runs) {
    std::string first[3];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / (std::string(run.config) + "." + std::to_string(rep));
      app::Options opt;
      opt.config = std::string(TREEWALK_CONFIG_DIR) + "/" + run.config;
      opt.suite = run.suite;
      opt.trajectories = run.trajectories;
      opt.out = dir.string();
      (void)app::cmd_verify(opt, sink, sink);
      app::Options sim = opt;
      sim.dump = true;
      sim.out = (dir / "simulate").string();
      (void)app::cmd_simulate(sim, sink, sink);
      const std::string got[3] = {slurp(dir / "report.json"), slurp(dir / "kernel_values.csv"),
                                  slurp(dir / "simulate" / "trajectories.csv")};
      for (int i = 0; i < 3; ++i) {
        if (rep == 0) {
          first[i] = got[i];
        } else if (got[i] != first[i] || got[i].empty()) {
          ok = false;
          detail += std::string(" [") + run.config + " file " + std::to_string(i) + " differs]";
        } else {
          ++files;
        }
      }
    }
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  return {ok, std::to_string(files) + " output files byte-identical across reruns (report.json, kernel_values.csv, "
                                      "trajectories.csv over " +
                  std::to_string(runs.size()) + " configs)" + detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: no runtime budget
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "algebra", 30, c1_algebra},
      {2, "isometry", 10, c2_isometry},
      {3, "wald-mass", 120, c3_wald},
      {4, "regimes", 120, c4_regimes},
      {5, "no-point-mass", 120, c5_no_atoms},
      {6, "invariance", 120, c6_invariance},
      {7, "oracle-equivalence", 60, c7_oracle},
      {8, "boundary-limit", 300, c8_boundary_limit},
      {9, "null-limits", 300, c9_null_limits},
      {10, "renewal-identity", 300, c10_renewal},
      {11, "periods", 180, c11_periods},
      {12, "determinism", 0, c12_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.budget_s == 0 || secs < c.budget_s;
    const bool pass = out.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("criterion %2d %-20s %s  %s  [%.1f s%s%s]\n", c.id, c.name, pass ? "PASS" : "FAIL", out.detail.c_str(),
                secs, c.budget_s > 0 ? (" / " + fmt(c.budget_s) + " s").c_str() : "", in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
