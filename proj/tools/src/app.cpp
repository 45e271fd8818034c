#include "app.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "treewalk/algebra_suite.hpp"
#include "treewalk/config.hpp"
#include "treewalk/estimators.hpp"
#include "treewalk/parallel.hpp"

namespace treewalk::app {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr std::int64_t kAlgebraCases = 10000;

bool is_validation_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::WeightsNotNormalized:
    case ErrorCode::NonExceptionalityFailed:
    case ErrorCode::EmptySupport:
    case ErrorCode::RealizationMismatch:
      return true;
    default:
      return false;
  }
}

ExperimentConfig load(const Options& o) {
  ExperimentConfig cfg = load_config(o.config, false);
  if (o.seed) cfg.experiment.seed = *o.seed;
  if (o.trajectories) cfg.experiment.trajectories = *o.trajectories;
  if (o.horizon) cfg.experiment.horizon = *o.horizon;
  if (o.tol) cfg.experiment.tolerance_sigmas = *o.tol;
  if (o.out) cfg.experiment.out = *o.out;
  return cfg;
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json claim_json(const Claim& c) {
  json stats = json::object();
  for (const auto& [k, v] : c.stats) stats[k] = number(v);
  return json{{"id", c.id},
              {"anchor", c.anchor},
              {"estimate", number(c.estimate)},
              {"stderr", number(c.stderr_)},
              {"reference", number(c.reference)},
              {"tolerance", number(c.tolerance)},
              {"verdict", to_string(c.verdict)},
              {"truncation_too_coarse", c.truncation_too_coarse},
              {"note", c.note},
              {"stats", stats}};
}

json law_json(const StepLaw& law) {
  json atoms = json::array();
  for (std::size_t i = 0; i < law.atoms().size(); ++i) {
    atoms.push_back({{"element", to_string(law.atoms()[i].element)},
                     {"weight", to_string(law.atoms()[i].weight)},
                     {"phi", law.phis()[i]}});
  }
  return json{{"realization", std::string(to_string(law.realization()))},
              {"q", law.q()},
              {"drift", to_string(law.drift())},
              {"atoms", atoms}};
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
  f << text;
}

std::string fmt(double x) {
  if (!std::isfinite(x)) return "-";
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

Claim skipped(const std::string& suite, const std::string& why) {
  Claim c;
  c.id = suite + "/skipped";
  c.anchor = "suite not applicable to this law";
  c.verdict = Verdict::Skipped;
  c.note = why;
  return c;
}

Claim threshold_claim(std::string id, std::string anchor, double value, double threshold, std::string note) {
  Claim c;
  c.id = std::move(id);
  c.anchor = std::move(anchor);
  c.estimate = value;
  c.reference = threshold;
  c.verdict = verdict_of(value >= threshold);
  c.note = std::move(note);
  return c;
}

// Every vertex of height `depth` below the origin.
std::vector<Vertex> discs_below_origin(const StepLaw& law, int depth) {
  std::vector<Vertex> level{origin(law.realization(), law.q(), law.budget())};
  for (int d = 0; d < depth; ++d) {
    std::vector<Vertex> next;
    for (const auto& v : level) {
      for (int b = 0; b < law.q(); ++b) next.push_back(son(v, b));
    }
    level = std::move(next);
  }
  return level;
}

struct SuiteOutput {
  std::vector<Claim> claims;
  std::vector<std::pair<std::string, KernelRow>> rows;  // (cylinder, row)
};

// --- suites -----------------------------------------------------------------

SuiteOutput suite_algebra(const ExperimentConfig& cfg, const StepLaw&) {
  SuiteOutput out;
  const auto& r = cfg.realization;
  out.claims = run_algebra_suite(r.kind, r.q, kAlgebraCases, cfg.experiment.seed, r.budget);
  if (r.kind == Realization::PAdic) out.claims.push_back(run_isometry_suite(r.q, kAlgebraCases, cfg.experiment.seed, r.budget));
  return out;
}

SuiteOutput suite_regimes(const ExperimentConfig& cfg, const StepLaw& law) {
  SuiteOutput out;
  const auto& ex = cfg.experiment;
  const RegimeReport rep = height_regime_report(law, ex.trajectories, ex.horizon, ex.seed);
  const std::string stats = "classification: " + rep.classification + "; below " + fmt(rep.frac_below) + ", above " +
                            fmt(rep.frac_above) + ", both extremes " + fmt(rep.frac_both_extremes);
  const int sign = law.drift_sign();
  if (sign < 0) {
    out.claims.push_back(threshold_claim("regimes/descends-to-omega",
                                         "with negative drift the walk converges to omega",
                                         rep.frac_below, 0.99, stats));
  } else if (sign > 0) {
    const double stable = prefix_stability(law, ex.depth, ex.trajectories, ex.seed);
    out.claims.push_back(threshold_claim("regimes/boundary-prefix-stabilizes",
                                         "with positive drift R_n o converges to an end of the boundary",
                                         stable, 0.99,
                                         "depth-" + std::to_string(ex.depth) + " prefix stable under audit; " + stats));
    // No atoms: the largest disc mass shrinks with the depth.
    const auto ends = sample_boundary_limits(law, 6, ex.trajectories, ex.seed, 1ULL << 40);
    const std::vector<double> maxima = max_disc_masses(ends, {2, 4, 6});
    Claim c;
    c.id = "regimes/no-point-mass";
    c.anchor = "the limit law on the boundary carries no point mass";
    c.estimate = maxima.back();
    c.verdict = verdict_of(maxima[0] > maxima[1] && maxima[1] > maxima[2]);
    c.note = "max disc mass at depths 2, 4, 6: " + fmt(maxima[0]) + ", " + fmt(maxima[1]) + ", " + fmt(maxima[2]);
    out.claims.push_back(std::move(c));
  } else {
    out.claims.push_back(threshold_claim("regimes/oscillates",
                                         "centered walks visit arbitrarily high and low levels",
                                         rep.frac_both_extremes, 0.95, stats));
    const End u = law.realization() == Realization::PAdic
                      ? padic_end(PAdic::zero(law.q(), law.budget().working_precision, law.budget()))
                      : lamp_end(law.q(), LampConfig(), cfg.realization.window_above);
    const std::int64_t n = ex.horizon;
    const ContractionReport cr = local_contraction(law, u, 0, std::min<std::int64_t>(ex.trajectories, 500),
                                                   {std::max<std::int64_t>(n / 16, 1), std::max<std::int64_t>(n / 4, 1), n},
                                                   ex.seed);
    Claim c;
    c.id = "regimes/local-contraction";
    c.anchor = "centered walks contract locally: q^-phi(L_n) along returns to a ball tends to 0";
    c.estimate = cr.medians.empty() ? 0.0 : cr.medians.back();
    c.verdict = Verdict::Trend;
    c.note = "medians";
    for (std::size_t i = 0; i < cr.medians.size(); ++i) {
      c.note += (i ? ", " : " ") + std::string("N=") + std::to_string(cr.horizons[i]) + ": " + fmt(cr.medians[i]);
    }
    c.note += cr.non_increasing ? "; non-increasing" : "; not monotone";
    if (cr.undecided) c.note += "; " + std::to_string(cr.undecided) + " trajectories undecided at precision";
    out.claims.push_back(std::move(c));
  }
  return out;
}

SuiteOutput suite_wald(const ExperimentConfig& cfg, const StepLaw& law) {
  SuiteOutput out;
  if (law.drift_sign() <= 0) {
    out.claims.push_back(skipped("wald", "ladder excursions are integrable only for positive drift"));
    return out;
  }
  const auto& ex = cfg.experiment;
  const WaldReport w = wald_mass_check(law, ex.excursions, ex.seed);
  const double k = ex.tolerance_sigmas;
  Claim mass;
  mass.id = "wald/mass";
  mass.anchor = "the invariant measure m has total mass E[l] / E[S_l] = 1 / drift";
  mass.estimate = w.ratio;
  mass.stderr_ = w.ratio_stderr;
  mass.reference = w.exact;
  mass.tolerance = k * w.ratio_stderr;
  mass.verdict = verdict_of(std::abs(w.ratio - w.exact) <= mass.tolerance);
  mass.note = std::to_string(w.excursions) + " excursions, E[l] = " + fmt(w.mean_l) + ", E[S_l] = " + fmt(w.mean_Sl);
  mass.stats = {{"z", w.z}, {"mean_l", w.mean_l}, {"mean_Sl", w.mean_Sl}};
  out.claims.push_back(mass);
  Claim res;
  res.id = "wald/residual";
  res.anchor = "Wald's identity E[S_l] = E[l] drift";
  res.estimate = w.residual;
  res.stderr_ = w.residual_stderr;
  res.reference = 0;
  res.tolerance = k * w.residual_stderr;
  res.verdict = verdict_of(std::abs(w.residual) <= res.tolerance);
  res.stats = {{"z", w.residual_z}};
  out.claims.push_back(res);
  return out;
}

SuiteOutput suite_renewal(const ExperimentConfig& cfg, const StepLaw& law) {
  SuiteOutput out;
  if (law.drift_sign() <= 0) {
    out.claims.push_back(skipped("renewal", "the renewal identity is checked for positive drift"));
    return out;
  }
  const auto& ex = cfg.experiment;
  const double k = ex.tolerance_sigmas;
  ExcursionOptions eo;
  eo.seed = ex.seed;

  // m(Pf) = m(f) on the depth-3 discs of the unit ball, from independent runs.
  std::vector<BoundaryTest> plain, averaged;
  for (const auto& d : discs_below_origin(law, 3)) {
    plain.push_back(disc_indicator(d));
    averaged.push_back(averaged_by_law(disc_indicator(d), law));
  }
  const MeasureEstimates mf = estimate_m_misinv(law, plain, ex.excursions, eo);
  ExcursionOptions other = eo;
  other.stream_offset = static_cast<std::uint64_t>(ex.excursions);
  const MeasureEstimates mpf = estimate_m_misinv(law, averaged, ex.excursions, other);
  for (std::size_t i = 0; i < plain.size(); ++i) {
    Claim c;
    c.id = "renewal/invariance/" + plain[i].name;
    c.anchor = "m is invariant: m(Pf) = m(f)";
    c.estimate = mpf.value[i];
    c.stderr_ = mpf.stderr_[i];
    c.reference = mf.value[i];
    c.tolerance = k * std::hypot(mf.stderr_[i], mpf.stderr_[i]);
    c.verdict = verdict_of(std::abs(c.estimate - c.reference) <= c.tolerance);
    c.note = "m(f) = " + fmt(mf.value[i]) + " +- " + fmt(mf.stderr_[i]);
    out.claims.push_back(std::move(c));
  }

  for (const auto& disc : discs_below_origin(law, 1)) {
    const RenewalReport r = verify_renewal_identity(law, disc, ex.renewal_levels, ex.excursions, eo, 30, k);
    Claim c;
    c.id = "renewal/identity/" + to_string(disc);
    c.anchor = "U * p(f) = (m x counting)(f) on a product cylinder";
    c.estimate = r.lhs;
    c.stderr_ = r.lhs_stderr;
    c.reference = r.rhs;
    c.tolerance = k * std::hypot(r.lhs_stderr, r.rhs_stderr) + r.truncation;
    c.truncation_too_coarse = r.truncation_too_coarse;
    c.verdict = verdict_of(r.agree && !r.truncation_too_coarse);
    c.note = "rhs stderr " + fmt(r.rhs_stderr) + ", truncation " + fmt(r.truncation) + " at z <= " +
             std::to_string(r.z_max);
    out.claims.push_back(std::move(c));
    Claim n;
    n.id = "renewal/normalizer/" + to_string(disc);
    n.anchor = "the reduction's normalizing mass is E[S_l]";
    n.estimate = r.mean_Sl_lhs;
    n.stderr_ = r.mean_Sl_lhs_stderr;
    n.reference = r.mean_Sl_rhs;
    n.tolerance = k * std::hypot(r.mean_Sl_lhs_stderr, r.mean_Sl_rhs_stderr);
    n.verdict = verdict_of(r.normalizer_agrees);
    out.claims.push_back(std::move(n));
  }
  return out;
}

std::vector<CylinderEvent> cylinders_of(const ExperimentConfig& cfg, const StepLaw& law) {
  if (!cfg.cylinders.empty()) return cfg.cylinders;
  const Vertex o = origin(law.realization(), law.q(), law.budget());
  return {CylinderEvent({o}, {o})};
}

LimitOptions limit_options(const ExperimentConfig& cfg, const StepLaw& law) {
  const auto& ex = cfg.experiment;
  LimitOptions lo;
  lo.kernel.trajectories = ex.trajectories;
  lo.kernel.horizon = ex.horizon;
  lo.kernel.delta = ex.delta;
  lo.kernel.seed = ex.seed;
  lo.limit_samples = ex.trajectories;
  lo.sigmas = ex.tolerance_sigmas;
  lo.periods = rotation_periods(law, 3);
  lo.direction = cfg.b;
  return lo;
}

SuiteOutput suite_boundary_limit(const ExperimentConfig& cfg, const StepLaw& law) {
  SuiteOutput out;
  const LimitOptions lo = limit_options(cfg, law);
  for (const auto& f : cylinders_of(cfg, law)) {
    SuiteResult r = verify_boundary_limit(law, f, cfg.experiment.n_list, lo);
    for (auto& c : r.claims) {
      c.note = "f = " + f.to_string() + (c.note.empty() ? "" : "; " + c.note);
      out.claims.push_back(std::move(c));
    }
    for (auto& row : r.kernel_rows) out.rows.emplace_back(f.to_string(), std::move(row));
  }
  if (lo.periods.empty() && law.drift_sign() != 0) {
    Claim c;
    c.id = "boundary-limit/periods";
    c.anchor = "every horocyclic element fixing the reference end is a period";
    c.verdict = Verdict::Skipped;
    c.note = "the group generated by the support contains no non-trivial rotation at the reference end";
    out.claims.push_back(std::move(c));
  }
  return out;
}

SuiteOutput suite_omega_limit(const ExperimentConfig& cfg, const StepLaw& law) {
  SuiteOutput out;
  const LimitOptions lo = limit_options(cfg, law);
  const auto& ns = cfg.experiment.n_list;
  const int n = ns.empty() ? 30 : *std::max_element(ns.begin(), ns.end());
  for (const auto& f : cylinders_of(cfg, law)) {
    for (OmegaRegime regime : {OmegaRegime::Descend, OmegaRegime::AscendEscape}) {
      SuiteResult r = verify_omega_limit(law, f, regime, n, lo);
      for (auto& c : r.claims) {
        c.note = "f = " + f.to_string() + "; " + c.note;
        out.claims.push_back(std::move(c));
      }
      for (auto& row : r.kernel_rows) out.rows.emplace_back(f.to_string(), std::move(row));
    }
  }
  return out;
}

using SuiteFn = SuiteOutput (*)(const ExperimentConfig&, const StepLaw&);

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> all{
      {"algebra", suite_algebra},          {"regimes", suite_regimes},
      {"wald", suite_wald},                {"renewal", suite_renewal},
      {"boundary-limit", suite_boundary_limit}, {"omega-limit", suite_omega_limit},
  };
  return all;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::TruncationTooCoarse) return kTruncation;
    return is_validation_failure(e.code()) ? kFailed : kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace

std::string sha256_hex(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return s.str();
}

int cmd_validate(const Options& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load(options);
    const StepLaw law = cfg.law_unchecked();
    const auto& r = cfg.realization;
    out << "config: " << options.config << "\n";
    out << "realization: " << to_string(r.kind) << (r.kind == Realization::PAdic ? " p = " : " q = ") << r.q
        << ", precision " << r.budget.working_precision << " (min " << r.budget.min_acceptable << ")\n";
    out << "atoms:\n";
    for (std::size_t i = 0; i < law.atoms().size(); ++i) {
      out << "  " << to_string(law.atoms()[i].element) << " : " << to_string(law.atoms()[i].weight)
          << "  (phi = " << law.phis()[i] << ")\n";
    }
    out << "drift: " << to_string(law.drift()) << "\n";
    const auto& v = law.validation();
    out << "non-exceptional: " << (v.passed ? "PASS" : "FAIL (NonExceptionalityFailed)") << "\n";
    out << "  nonzero phi: " << (v.has_nonzero_phi ? "yes" : "no") << ", no common fixed end: "
        << (v.no_common_fixed_end ? "yes" : "no") << ", gcd of phi: " << v.phi_gcd
        << (v.gcd_overridden ? " (allowed)" : "") << "\n";
    for (const auto& m : v.messages) out << "  - " << m << "\n";
    const MomentReport mr = moment_report(law, cfg.experiment.epsilon);
    out << "moments: E|phi| = " << to_string(mr.mean_abs_phi) << ", E|X| = " << to_string(mr.mean_norm)
        << ", E[phi^2] = " << to_string(mr.mean_phi_squared) << ", E|b(X)|^(2+" << fmt(mr.epsilon)
        << ") = " << fmt(mr.mean_b_norm_power) << "\n";
    out << "cylinders: " << cfg.cylinders.size() << "\n";
    out << "result: " << (v.passed ? "PASS" : "FAIL") << "\n";
    return v.passed ? kOk : kFailed;
  });
}

int cmd_simulate(const Options& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = load(options);
    const StepLaw law = cfg.law_unchecked();
    if (!law.validation().passed) {
      err << "warning: the law is exceptional; simulating anyway\n";
      for (const auto& m : law.validation().messages) err << "  - " << m << "\n";
    }
    const auto& ex = cfg.experiment;
    const RegimeReport rep = height_regime_report(law, ex.trajectories, ex.horizon, ex.seed);
    const fs::path dir(ex.out);
    fs::create_directories(dir);

    json report;
    report["tool"] = "treewalk";
    report["version"] = kVersion;
    report["command"] = "simulate";
    report["seed"] = ex.seed;
    report["config_hash"] = sha256_hex(to_config_text(cfg));
    report["law"] = law_json(law);
    report["trajectories"] = rep.trajectories;
    report["horizon"] = rep.horizon;
    double mean = 0;
    for (int h : rep.terminal) mean += h;
    mean /= static_cast<double>(std::max<std::size_t>(rep.terminal.size(), 1));
    report["regime"] = {{"classification", rep.classification},
                        {"threshold", rep.threshold},
                        {"extreme", rep.extreme},
                        {"frac_below", rep.frac_below},
                        {"frac_above", rep.frac_above},
                        {"frac_both_extremes", rep.frac_both_extremes},
                        {"mean_terminal_height", mean},
                        {"min_height", rep.minimum.empty() ? 0 : *std::min_element(rep.minimum.begin(), rep.minimum.end())},
                        {"max_height", rep.maximum.empty() ? 0 : *std::max_element(rep.maximum.begin(), rep.maximum.end())}};
    write_file(dir / "report.json", report.dump(2) + "\n");

    std::vector<std::string> outputs{"report.json"};
    if (options.dump) {
      // Trajectories share their streams with the regime report.
      constexpr std::int64_t kDumped = 10;
      // Norm and vertex fields stay empty once they are no longer determined
      // at the working precision; vertex strings above kVertexHeight are
      // omitted to keep the file small.
      constexpr int kVertexHeight = 64;
      std::ostringstream csv;
      csv << "trajectory,n,height,norm,vertex\n";
      const Vertex o = origin(law.realization(), law.q(), law.budget());
      for (std::int64_t k = 0; k < std::min(kDumped, ex.trajectories); ++k) {
        RandomStream stream(ex.seed, stream_id(StreamPurpose::Steps, static_cast<std::uint64_t>(k)));
        run_right(law, ex.horizon, stream, [&](std::int64_t n, const AffineElement& g, int h) {
          csv << k << ',' << n << ',' << h << ',';
          try {
            csv << norm(g);
          } catch (const Error&) {
          }
          csv << ',';
          if (h <= kVertexHeight) {
            try {
              csv << to_string(act_vertex(g, o));
            } catch (const Error&) {
            }
          }
          csv << '\n';
          return true;
        });
      }
      write_file(dir / "trajectories.csv", csv.str());
      outputs.push_back("trajectories.csv");
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest{{"tool_version", kVersion},
                  {"command", "simulate"},
                  {"config_hash", report["config_hash"]},
                  {"seed", ex.seed},
                  {"outputs", outputs},
                  {"threads", worker_count()},
                  {"timings_seconds", {{"simulate", seconds}}}};
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    out << "classification: " << rep.classification << "\n";
    out << "below -" << rep.threshold << ": " << fmt(rep.frac_below) << ", above " << rep.threshold << ": "
        << fmt(rep.frac_above) << ", both extremes past " << rep.extreme << ": " << fmt(rep.frac_both_extremes) << "\n";
    out << "wrote " << (dir / "report.json").string() << "\n";
    return kOk;
  });
}

int cmd_verify(const Options& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load(options);
    const StepLaw law = cfg.law();
    const auto& ex = cfg.experiment;

    std::vector<std::pair<std::string, SuiteFn>> chosen;
    for (const auto& s : suites()) {
      if (options.suite == "all" || options.suite == s.first) chosen.push_back(s);
    }
    if (chosen.empty()) fail(ErrorCode::InvalidArgument, "unknown suite '" + options.suite + "'");

    std::vector<Claim> claims;
    std::vector<std::pair<std::string, KernelRow>> rows;
    json timings = json::object();
    for (const auto& [name, fn] : chosen) {
      const auto start = std::chrono::steady_clock::now();
      SuiteOutput r = fn(cfg, law);
      timings[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      for (auto& c : r.claims) claims.push_back(std::move(c));
      for (auto& row : r.rows) rows.push_back(std::move(row));
    }

    std::map<std::string, int> summary{{"pass", 0}, {"fail", 0}, {"skipped", 0}, {"trend", 0}};
    bool failed = false, coarse = false;
    json jclaims = json::array();
    for (const auto& c : claims) {
      ++summary[to_string(c.verdict)];
      if (c.verdict == Verdict::Fail) {
        failed = true;
        coarse = coarse || c.truncation_too_coarse;
      }
      jclaims.push_back(claim_json(c));
      out << std::left << std::setw(8) << to_string(c.verdict) << c.id;
      if (std::isfinite(c.estimate)) out << "  " << fmt(c.estimate) << " +- " << fmt(c.stderr_);
      if (std::isfinite(c.reference)) out << "  (ref " << fmt(c.reference) << ", tol " << fmt(c.tolerance) << ")";
      out << "\n";
    }

    const fs::path dir(ex.out);
    fs::create_directories(dir);
    const std::string hash = sha256_hex(to_config_text(cfg));
    json report;
    report["tool"] = "treewalk";
    report["version"] = kVersion;
    report["command"] = "verify";
    report["suite"] = options.suite;
    report["seed"] = ex.seed;
    report["config_hash"] = hash;
    report["tolerance_sigmas"] = ex.tolerance_sigmas;
    report["law"] = law_json(law);
    report["claims"] = jclaims;
    report["summary"] = summary;
    write_file(dir / "report.json", report.dump(2) + "\n");

    std::vector<std::string> outputs{"report.json"};
    if (!rows.empty()) {
      std::ostringstream csv;
      csv << std::setprecision(17);
      csv << "cylinder,series,n,estimate,stderr,tail_bound\n";
      for (const auto& [cyl, row] : rows) {
        csv << '"' << cyl << "\"," << row.series << ',' << row.n << ',' << row.estimate.value << ','
            << row.estimate.stderr_ << ',' << row.estimate.tail_bound << '\n';
      }
      write_file(dir / "kernel_values.csv", csv.str());
      outputs.push_back("kernel_values.csv");
    }
    json verdicts = json::object();
    for (const auto& c : claims) verdicts[c.id] = to_string(c.verdict);
    json manifest{{"tool_version", kVersion}, {"command", "verify"},  {"suite", options.suite},
                  {"config_hash", hash},      {"seed", ex.seed},       {"outputs", outputs},
                  {"threads", worker_count()}, {"verdicts", verdicts}, {"timings_seconds", timings}};
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    out << "summary: " << summary["pass"] << " pass, " << summary["fail"] << " fail, " << summary["skipped"]
        << " skipped, " << summary["trend"] << " trend\n";
    if (coarse) return kTruncation;
    return failed ? kFailed : kOk;
  });
}

}  // namespace treewalk::app
