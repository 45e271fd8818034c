#include "treewalk/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "treewalk/parallel.hpp"

namespace treewalk {
namespace {

struct Moments {
  double mean = 0, var = 0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) m.mean += x;
  m.mean /= n;
  if (xs.size() > 1) {
    for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
    m.var /= n - 1;
  }
  return m;
}

double covariance(const std::vector<double>& xs, double mx, const std::vector<double>& ys, double my) {
  if (xs.size() < 2) return 0;
  double c = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) c += (xs[i] - mx) * (ys[i] - my);
  return c / static_cast<double>(xs.size() - 1);
}

struct RatioEstimate {
  double value = 0, stderr_ = 0;
};

// mean(num) / mean(den) with the delta-method standard error.
RatioEstimate ratio(const std::vector<double>& num, const std::vector<double>& den) {
  const Moments a = moments(num), b = moments(den);
  RatioEstimate r;
  if (b.mean == 0) return r;
  r.value = a.mean / b.mean;
  const double c = covariance(num, a.mean, den, b.mean);
  const double v = (a.var - 2 * r.value * c + r.value * r.value * b.var) / (b.mean * b.mean);
  r.stderr_ = std::sqrt(std::max(v, 0.0) / static_cast<double>(std::max<std::size_t>(num.size(), 1)));
  return r;
}

double stderr_of(const Moments& m, std::size_t n) {
  return n == 0 ? 0.0 : std::sqrt(m.var / static_cast<double>(n));
}

struct ExcursionRow {
  double S = 0, l = 0;
  std::vector<double> sums;
};

// For each excursion: draw the excursion from the Excursion stream and an
// independent u ~ m_l from the Boundary stream (known deep enough that
// L_k u is known to `depth` for every k < l), then call
// eval(L_k u, S_k, sums) for k < l.
template <class Eval>
std::vector<ExcursionRow> excursion_rows(const StepLaw& law, std::int64_t excursions, const ExcursionOptions& opt,
                                         int depth, std::size_t width, Eval&& eval) {
  if (law.drift_sign() < 0) fail(ErrorCode::NonPositiveDrift, "ladder excursions need a non-negative drift");
  return parallel_map<ExcursionRow>(excursions, [&](std::int64_t j) {
    const auto index = opt.stream_offset + static_cast<std::uint64_t>(j);
    RandomStream steps(opt.seed, stream_id(StreamPurpose::Excursion, index));
    const Excursion ex = run_excursion(law, steps, opt.budget, true);
    RandomStream boundary(opt.seed, stream_id(StreamPurpose::Boundary, index));
    const End u = sample_ladder_boundary_limit(law, depth - ex.min_height, boundary, opt.boundary).end;
    ExcursionRow row;
    row.S = ex.block_height;
    row.l = static_cast<double>(ex.length);
    row.sums.assign(width, 0.0);
    for (std::size_t k = 0; k < ex.prefix.size(); ++k) eval(act_end(ex.prefix[k], u), ex.heights[k], row.sums);
    return row;
  });
}

AffineElement reference_s(const StepLaw& law) {
  return default_homothety(law.realization(), law.q(), law.budget()).element;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void add_row_stats(Claim& c, const KernelEstimate& e) {
  c.stats.emplace_back("tail_bound", e.tail_bound);
  c.stats.emplace_back("trajectories", static_cast<double>(e.trajectories));
  c.stats.emplace_back("unfinished", static_cast<double>(e.unfinished));
  c.stats.emplace_back("aborted", static_cast<double>(e.aborted));
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<KernelEstimate> potential_kernel(const AffineElement& g, const std::vector<CylinderEvent>& fs,
                                             const StepLaw& law, const KernelOptions& opt) {
  int lo = 0, hi = 0;
  bool any = false;
  for (const auto& f : fs) {
    if (f.empty()) continue;
    lo = any ? std::min(lo, f.level()) : f.level();
    hi = any ? std::max(hi, f.level()) : f.level();
    any = true;
  }
  const int sign = law.drift_sign();
  struct Traj {
    std::vector<double> main, tail;
    std::int64_t steps = 0;
    bool unfinished = false, aborted = false;
  };
  const auto trajs = parallel_map<Traj>(opt.trajectories, [&](std::int64_t k) {
    Traj tr;
    tr.main.assign(fs.size(), 0.0);
    tr.tail.assign(fs.size(), 0.0);
    if (!any) return tr;
    RandomStream stream(opt.seed, stream_id(StreamPurpose::Steps, opt.stream_offset + static_cast<std::uint64_t>(k)));
    bool main_phase = true;
    bool finished = false;
    try {
      run_right(
          law, opt.horizon, stream,
          [&](std::int64_t n, const AffineElement& r, int h) {
            tr.steps = n;
            const bool late = sign == 0 && 2 * n >= opt.horizon;
            if (h >= lo && h <= hi) {
              for (std::size_t j = 0; j < fs.size(); ++j) {
                if (fs[j].empty() || fs[j].level() != h || !fs[j].contains(r)) continue;
                (main_phase ? tr.main : tr.tail)[j] += 1;
                if (late) tr.tail[j] += 1;
              }
            }
            if (sign == 0) return true;
            const int past = sign > 0 ? h - hi : lo - h;
            if (main_phase && past > opt.delta && n >= opt.min_steps) {
              main_phase = false;
              if (!opt.audit) {
                finished = true;
                return false;
              }
            }
            if (!main_phase && past > 2 * opt.delta) {
              finished = true;
              return false;
            }
            return true;
          },
          &g);
      tr.unfinished = sign != 0 && !finished && main_phase;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PrecisionExhausted && e.code() != ErrorCode::IndistinguishableAtPrecision) throw;
      tr.aborted = true;
    }
    return tr;
  });

  std::vector<KernelEstimate> out(fs.size());
  double steps = 0;
  std::int64_t unfinished = 0, aborted = 0;
  for (const auto& t : trajs) {
    steps += static_cast<double>(t.steps);
    unfinished += t.unfinished;
    aborted += t.aborted;
  }
  for (std::size_t j = 0; j < fs.size(); ++j) {
    std::vector<double> main, tail;
    main.reserve(trajs.size());
    tail.reserve(trajs.size());
    for (const auto& t : trajs) {
      main.push_back(t.main[j]);
      tail.push_back(t.tail[j]);
    }
    const Moments m = moments(main);
    KernelEstimate& e = out[j];
    e.value = m.mean;
    e.stderr_ = stderr_of(m, main.size());
    e.trajectories = opt.trajectories;
    e.horizon = opt.horizon;
    e.tail_bound = moments(tail).mean;
    e.unfinished = unfinished;
    e.aborted = aborted;
    e.mean_steps = trajs.empty() ? 0.0 : steps / static_cast<double>(trajs.size());
    e.truncated = e.tail_bound > opt.tail_tolerance || unfinished > 0;
  }
  return out;
}

KernelEstimate potential_kernel(const AffineElement& g, const CylinderEvent& f, const StepLaw& law,
                                const KernelOptions& options) {
  return potential_kernel(g, std::vector<CylinderEvent>{f}, law, options).front();
}

// ---------------------------------------------------------------------------

WaldReport wald_mass_check(const StepLaw& law, std::int64_t excursions, std::uint64_t seed, std::int64_t budget) {
  if (law.drift_sign() <= 0) fail(ErrorCode::NonPositiveDrift, "the ladder mass check needs an upward drift");
  struct Row {
    double l, S;
  };
  const auto rows = parallel_map<Row>(excursions, [&](std::int64_t j) {
    RandomStream stream(seed, stream_id(StreamPurpose::Excursion, static_cast<std::uint64_t>(j)));
    const Excursion ex = run_excursion(law, stream, budget, false);
    return Row{static_cast<double>(ex.length), static_cast<double>(ex.block_height)};
  });
  std::vector<double> ls, Ss, resid;
  const double mu = to_double(law.drift());
  for (const auto& r : rows) {
    ls.push_back(r.l);
    Ss.push_back(r.S);
    resid.push_back(r.S - r.l * mu);
  }
  WaldReport rep;
  rep.excursions = excursions;
  const Moments ml = moments(ls), mS = moments(Ss), mr = moments(resid);
  rep.mean_l = ml.mean;
  rep.mean_Sl = mS.mean;
  rep.stderr_l = stderr_of(ml, ls.size());
  rep.stderr_Sl = stderr_of(mS, Ss.size());
  const RatioEstimate r = ratio(ls, Ss);
  rep.ratio = r.value;
  rep.ratio_stderr = r.stderr_;
  rep.exact = 1.0 / mu;
  rep.z = r.stderr_ > 0 ? (r.value - rep.exact) / r.stderr_ : 0.0;
  rep.residual = mr.mean;
  rep.residual_stderr = stderr_of(mr, resid.size());
  rep.residual_z = rep.residual_stderr > 0 ? rep.residual / rep.residual_stderr : 0.0;
  return rep;
}

BoundaryTest disc_indicator(const Vertex& disc) {
  return BoundaryTest{"1[" + to_string(disc) + "]", disc.height,
                      [disc](const End& e) { return cone_contains(disc, e) ? 1.0 : 0.0; }};
}

BoundaryTest averaged_by_law(const BoundaryTest& test, const StepLaw& law) {
  const int lowest = *std::min_element(law.phis().begin(), law.phis().end());
  std::vector<std::pair<AffineElement, double>> atoms;
  for (const auto& a : law.atoms()) atoms.emplace_back(a.element, to_double(a.weight));
  return BoundaryTest{"P" + test.name, test.depth - std::min(lowest, 0), [atoms, f = test.f](const End& e) {
                        double s = 0;
                        for (const auto& [x, w] : atoms) s += w * f(act_end(x, e));
                        return s;
                      }};
}

MeasureEstimates estimate_m_misinv(const StepLaw& law, const std::vector<BoundaryTest>& tests,
                                   std::int64_t excursions, const ExcursionOptions& options) {
  int depth = 0;
  for (const auto& t : tests) depth = std::max(depth, t.depth);
  const auto rows = excursion_rows(law, excursions, options, depth, tests.size(),
                                   [&](const End& e, int, std::vector<double>& sums) {
                                     for (std::size_t i = 0; i < tests.size(); ++i) sums[i] += tests[i].f(e);
                                   });
  MeasureEstimates out;
  out.excursions = excursions;
  out.heavy_tail_warning = law.drift_sign() == 0;
  std::vector<double> Ss, ls;
  for (const auto& r : rows) {
    Ss.push_back(r.S);
    ls.push_back(r.l);
  }
  const Moments mS = moments(Ss);
  out.mean_Sl = mS.mean;
  out.stderr_Sl = stderr_of(mS, Ss.size());
  const RatioEstimate total = ratio(ls, Ss);
  out.total_mass = total.value;
  out.total_mass_stderr = total.stderr_;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    std::vector<double> num;
    num.reserve(rows.size());
    for (const auto& r : rows) num.push_back(r.sums[i]);
    const RatioEstimate v = ratio(num, Ss);
    out.names.push_back(tests[i].name);
    out.value.push_back(v.value);
    out.stderr_.push_back(v.stderr_);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

PAdic ppow(PAdic x, u128 e) {
  PAdic r = PAdic::one(x.prime(), x.budget());
  while (e) {
    if (e & 1) r = pmul(r, x);
    e >>= 1;
    if (e) x = pmul(x, x);
  }
  return r;
}

PAdic ppow_signed(const PAdic& x, std::int64_t e) {
  return e >= 0 ? ppow(x, static_cast<u128>(e)) : pinv(ppow(x, static_cast<u128>(-e)));
}

bool is_one(const PAdic& x) { return padd_unchecked(x, pneg(PAdic::one(x.prime(), x.budget()))).is_zero(); }

}  // namespace

std::vector<PAdic> rotation_generators(const StepLaw& law) {
  std::vector<PAdic> out;
  if (law.realization() != Realization::PAdic) return out;
  std::vector<int> k;
  std::vector<PAdic> u;
  for (const auto& atom : law.atoms()) {
    const PAdic& a = atom.element.a;
    k.push_back(a.valuation());
    u.push_back(pshift(a, -a.valuation()));
  }
  auto add = [&](const PAdic& w) {
    if (is_one(w)) return;
    for (const auto& x : out) {
      if (x == w) return;
    }
    out.push_back(w);
  };
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] == 0) {
      add(u[i]);
      continue;
    }
    for (std::size_t j = i + 1; j < k.size(); ++j) {
      if (k[j] == 0) continue;
      const int g = std::gcd(k[i], k[j]);
      add(pmul(ppow_signed(u[i], k[j] / g), ppow_signed(u[j], -k[i] / g)));
    }
  }
  return out;
}

std::vector<AffineElement> rotation_periods(const StepLaw& law, int count) {
  std::vector<AffineElement> out;
  const auto gens = rotation_generators(law);
  if (gens.empty()) return out;
  const auto like = identity_element(Realization::PAdic, law.q(), law.budget());
  for (int i = 0; static_cast<int>(out.size()) < count && i < 64 * count; ++i) {
    const PAdic r = ppow(gens[i % gens.size()], static_cast<u128>(i / gens.size() + 1));
    if (is_one(r)) continue;
    bool seen = false;
    for (const auto& b : out) seen = seen || b.a == r;
    if (!seen) out.push_back(rotation(like, r));
  }
  return out;
}

PAdic sample_rotation(const std::vector<PAdic>& gens, int p, PrecisionBudget budget, RandomStream& stream) {
  // x uniform on [0, p^N (p - 1)), a multiple of the order of (Z/p^N)^*,
  // makes w^x Haar on the closure of <w> modulo p^N.
  const int n = budget.working_precision;
  PAdic r = PAdic::one(p, budget);
  for (const auto& w : gens) {
    u128 y = 0, scale = 1;
    for (int i = 0; i < n; ++i) {
      y += scale * stream.below(static_cast<std::uint64_t>(p));
      scale *= static_cast<u128>(p);
    }
    PAdic term = ppow(w, y);
    if (p > 2) {
      const auto z = stream.below(static_cast<std::uint64_t>(p - 1));
      if (z) term = pmul(term, ppow(ppow(w, scale), z));
    }
    r = pmul(r, term);
  }
  return r;
}

BoundaryMeasureSample sample_mbar(const StepLaw& law_hat, int depth, RandomStream& stream) {
  if (law_hat.drift_sign() <= 0) fail(ErrorCode::NonPositiveDrift, "mbar needs an upward-drifting reversed law");
  const End xi = sample_boundary_limit(law_hat, depth, stream).end;
  AffineElement x = translation(xi);
  const auto gens = rotation_generators(law_hat);
  if (!gens.empty()) x = compose(x, rotation(x, sample_rotation(gens, law_hat.q(), law_hat.budget(), stream)));
  return {std::move(x), Rational(1) / law_hat.drift()};
}

LimitMeasureEstimate limit_measure_value(const CylinderEvent& f, const StepLaw& law, std::int64_t samples,
                                         std::uint64_t seed, const std::optional<AffineElement>& b) {
  if (law.drift_sign() >= 0) fail(ErrorCode::NonNegativeDrift, "limit measures at the reference end need a downward drift");
  const CylinderEvent target = b ? f.left_translate(invert(*b)) : f;
  const StepLaw law_hat = law.reversed();
  LimitMeasureEstimate out;
  out.mass = Rational(1) / law_hat.drift();
  out.samples = samples;
  if (target.empty() || samples <= 0) return out;
  const int h0 = target.level();
  const int depth = std::max(target.max_source_height(), 0);
  const AffineElement sh = power(reference_s(law), h0);
  const auto hits = parallel_map<double>(samples, [&](std::int64_t j) {
    RandomStream stream(seed, stream_id(StreamPurpose::Boundary, static_cast<std::uint64_t>(j)));
    const BoundaryMeasureSample x = sample_mbar(law_hat, depth, stream);
    return target.contains(compose(sh, invert(x.element))) ? 1.0 : 0.0;
  });
  const Moments m = moments(hits);
  const double mass = to_double(out.mass);
  out.value = mass * m.mean;
  out.stderr_ = mass * stderr_of(m, hits.size());
  return out;
}

// ---------------------------------------------------------------------------

SuiteResult verify_boundary_limit(const StepLaw& law, const CylinderEvent& f, const std::vector<int>& n_list,
                                  const LimitOptions& opt) {
  SuiteResult res;
  const AffineElement s = reference_s(law);
  const int sign = law.drift_sign();

  // Series 0 is s^n, series i >= 1 is b_i s^n; each (series, n) gets its own streams.
  auto series = [&](std::size_t index, const std::string& name, const AffineElement* b, bool last_only) {
    std::vector<KernelEstimate> ests;
    for (std::size_t i = last_only && !n_list.empty() ? n_list.size() - 1 : 0; i < n_list.size(); ++i) {
      KernelOptions ko = opt.kernel;
      ko.stream_offset = opt.kernel.stream_offset + (static_cast<std::uint64_t>(index) << 40) +
                         (static_cast<std::uint64_t>(i) << 32);
      AffineElement g = power(s, n_list[i]);
      if (b) g = compose(*b, g);
      ests.push_back(potential_kernel(g, f, law, ko));
      res.kernel_rows.push_back({name, n_list[i], ests.back()});
    }
    return ests;
  };

  const auto base = series(0, "s^n", nullptr, false);
  if (base.empty()) return res;

  if (sign < 0) {
    const LimitMeasureEstimate lim = limit_measure_value(f, law, opt.limit_samples, opt.kernel.seed);
    for (std::size_t i = 0; i < base.size(); ++i) {
      const auto& e = base[i];
      Claim c;
      c.id = "boundary-limit/s^" + std::to_string(n_list[i]);
      c.anchor = "g*U(f) converges to the limit measure as g = s^n tends to the reference end";
      c.estimate = e.value;
      c.stderr_ = e.stderr_;
      c.reference = lim.value;
      c.tolerance = opt.sigmas * std::hypot(e.stderr_, lim.stderr_) + e.tail_bound;
      c.verdict = verdict_of(!e.truncated && agree(e.value, e.stderr_, lim.value, lim.stderr_, opt.sigmas, e.tail_bound));
      c.note = "limit " + fmt(lim.value) + " +- " + fmt(lim.stderr_) + " from " + std::to_string(lim.samples) +
               " boundary samples, mass " + to_string(lim.mass);
      c.truncation_too_coarse = e.truncated;
      add_row_stats(c, e);
      res.claims.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < base.size(); ++i) {
      for (std::size_t j = i + 1; j < base.size(); ++j) {
        const auto& a = base[i];
        const auto& z = base[j];
        Claim c;
        c.id = "boundary-limit/stabilization/" + std::to_string(n_list[i]) + "-" + std::to_string(n_list[j]);
        c.anchor = "kernel values along s^n agree with each other once n is large";
        c.estimate = z.value - a.value;
        c.stderr_ = std::hypot(a.stderr_, z.stderr_);
        c.reference = 0;
        c.tolerance = opt.sigmas * c.stderr_ + a.tail_bound + z.tail_bound;
        c.truncation_too_coarse = a.truncated || z.truncated;
        c.verdict = verdict_of(!c.truncation_too_coarse && std::abs(c.estimate) <= c.tolerance);
        res.claims.push_back(std::move(c));
      }
    }
  }
  // Periods: b fixing the reference end leaves the limit unchanged, so b s^n
  // is compared with s^n at the largest n.
  for (std::size_t p = 0; p < opt.periods.size(); ++p) {
    const AffineElement& b = opt.periods[p];
    const std::string name = "b" + std::to_string(p + 1) + " s^n";
    const auto ests = series(p + 1, name, &b, true);
    {
      const std::size_t i = n_list.size() - 1;
      const auto& e = ests.front();
      const auto& a = base[i];
      Claim c;
      c.id = "boundary-limit/" + name + "/" + std::to_string(n_list[i]);
      c.anchor = "every horocyclic element fixing the reference end is a period: b s^n and s^n give the same kernel";
      c.estimate = e.value;
      c.stderr_ = e.stderr_;
      c.reference = a.value;
      c.tolerance = opt.sigmas * std::hypot(e.stderr_, a.stderr_) + e.tail_bound + a.tail_bound;
      c.truncation_too_coarse = e.truncated || a.truncated;
      c.verdict = verdict_of(!c.truncation_too_coarse && std::abs(e.value - a.value) <= c.tolerance);
      c.note = "b = " + to_string(b);
      add_row_stats(c, e);
      res.claims.push_back(std::move(c));
    }
  }
  if (sign < 0 && opt.direction) {
    const AffineElement& b = *opt.direction;
    const auto ests = series(opt.periods.size() + 1, "b s^n", &b, false);
    const LimitMeasureEstimate lim = limit_measure_value(f, law, opt.limit_samples, opt.kernel.seed, b);
    for (std::size_t i = 0; i < ests.size(); ++i) {
      const auto& e = ests[i];
      Claim c;
      c.id = "boundary-limit/direction/" + std::to_string(n_list[i]);
      c.anchor = "along b s^n the kernel converges to the limit measure translated by b";
      c.estimate = e.value;
      c.stderr_ = e.stderr_;
      c.reference = lim.value;
      c.tolerance = opt.sigmas * std::hypot(e.stderr_, lim.stderr_) + e.tail_bound;
      c.truncation_too_coarse = e.truncated;
      c.verdict = verdict_of(!e.truncated && agree(e.value, e.stderr_, lim.value, lim.stderr_, opt.sigmas, e.tail_bound));
      c.note = "b = " + to_string(b) + ", limit " + fmt(lim.value) + " +- " + fmt(lim.stderr_);
      add_row_stats(c, e);
      res.claims.push_back(std::move(c));
    }
  }
  if (sign > 0) {
    const auto& e = base.back();
    Claim c;
    c.id = "boundary-limit/null";
    c.anchor = "with upward drift g*U(f) tends to 0 as g = s^n tends to the reference end";
    c.estimate = e.value;
    c.stderr_ = e.stderr_;
    c.reference = 0;
    c.tolerance = opt.null_threshold;
    c.verdict = verdict_of(e.value + opt.sigmas * e.stderr_ + e.tail_bound <= opt.null_threshold);
    add_row_stats(c, e);
    res.claims.push_back(std::move(c));
  } else if (sign == 0) {
    Claim c;
    c.id = "boundary-limit/centered-trend";
    c.anchor = "centered laws: kernel values along s^n are reported as a trend only";
    c.estimate = base.back().value;
    c.stderr_ = base.back().stderr_;
    c.verdict = Verdict::Trend;
    for (std::size_t i = 0; i < base.size(); ++i) {
      c.note += (i ? ", " : "") + std::string("n=") + std::to_string(n_list[i]) + ": " + fmt(base[i].value);
    }
    c.note += "; horizon-truncated, convergence not asserted";
    res.claims.push_back(std::move(c));
  }
  return res;
}

SuiteResult verify_omega_limit(const StepLaw& law, const CylinderEvent& f, OmegaRegime regime, int n,
                               const LimitOptions& opt) {
  SuiteResult res;
  AffineElement g;
  std::string name;
  if (regime == OmegaRegime::Descend) {
    g = power(reference_s(law), -n);
    name = "s^-n";
  } else if (law.realization() == Realization::PAdic) {
    const int p = law.q();
    g = padic_affine(PAdic::from_parts(p, -n, 1, law.budget().working_precision, law.budget()),
                     PAdic::from_parts(p, n, 1, law.budget().working_precision, law.budget()));
    name = "(p^-n, p^n)";
  } else {
    g = lamp_affine(law.q(), LampConfig({{-n + 1, 1}}, law.q()), n);
    name = "(lamp at -n+1, shift n)";
  }
  const KernelEstimate e = potential_kernel(g, f, law, opt.kernel);
  res.kernel_rows.push_back({name, n, e});
  Claim c;
  c.id = std::string("omega-limit/") + (regime == OmegaRegime::Descend ? "descend" : "ascend-escape");
  c.anchor = "g*U(f) tends to 0 as g tends to omega";
  c.estimate = e.value;
  c.stderr_ = e.stderr_;
  c.reference = 0;
  c.tolerance = opt.null_threshold;
  c.verdict = verdict_of(e.value + opt.sigmas * e.stderr_ + e.tail_bound <= opt.null_threshold);
  c.note = "g_n = " + name + ", n = " + std::to_string(n);
  if (law.drift_sign() == 0) c.note += "; centered law, visits counted up to the horizon";
  add_row_stats(c, e);
  res.claims.push_back(std::move(c));
  return res;
}

// ---------------------------------------------------------------------------

RenewalReport verify_renewal_identity(const StepLaw& law, const Vertex& disc, const std::vector<int>& levels,
                                      std::int64_t excursions, const ExcursionOptions& options, int margin,
                                      double sigmas) {
  if (levels.empty()) fail(ErrorCode::InvalidArgument, "renewal identity needs at least one level");
  if (law.drift_sign() <= 0) fail(ErrorCode::NonPositiveDrift, "the renewal identity is checked for upward drift");
  RenewalReport rep;
  rep.z_max = *std::max_element(levels.begin(), levels.end()) + margin;
  const BoundaryTest test = disc_indicator(disc);
  const auto lhs_rows = excursion_rows(law, excursions, options, test.depth, 2,
                                       [&](const End& e, int Sk, std::vector<double>& sums) {
                                         if (test.f(e) == 0.0) return;
                                         for (int x : levels) {
                                           const int z = x - Sk;
                                           if (z < 0) continue;
                                           sums[z <= rep.z_max ? 0 : 1] += 1;
                                         }
                                       });
  std::vector<double> num, trunc, Ss;
  for (const auto& r : lhs_rows) {
    num.push_back(r.sums[0]);
    trunc.push_back(r.sums[1]);
    Ss.push_back(r.S);
  }
  const RatioEstimate lhs = ratio(num, Ss);
  rep.lhs = lhs.value;
  rep.lhs_stderr = lhs.stderr_;
  rep.truncation = ratio(trunc, Ss).value;
  const Moments mS = moments(Ss);
  rep.mean_Sl_lhs = mS.mean;
  rep.mean_Sl_lhs_stderr = stderr_of(mS, Ss.size());

  ExcursionOptions other = options;
  other.stream_offset = options.stream_offset + static_cast<std::uint64_t>(excursions);
  const MeasureEstimates m = estimate_m_misinv(law, {test}, excursions, other);
  const double count = static_cast<double>(levels.size());
  rep.rhs = count * m.value[0];
  rep.rhs_stderr = count * m.stderr_[0];
  rep.mean_Sl_rhs = m.mean_Sl;
  rep.mean_Sl_rhs_stderr = m.stderr_Sl;
  rep.agree = agree(rep.lhs, rep.lhs_stderr, rep.rhs, rep.rhs_stderr, sigmas, rep.truncation);
  rep.truncation_too_coarse = rep.truncation > sigmas * std::hypot(rep.lhs_stderr, rep.rhs_stderr);
  rep.normalizer_agrees = agree(rep.mean_Sl_lhs, rep.mean_Sl_lhs_stderr, rep.mean_Sl_rhs, rep.mean_Sl_rhs_stderr, sigmas);
  return rep;
}

}  // namespace treewalk
