#include "treewalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "treewalk/parallel.hpp"

namespace treewalk {
namespace {

End truncated_limit(const AffineElement& r, int depth) {
  if (r.kind == Realization::Lamplighter) return lamp_end(r.q, r.sigma.up_to(depth), depth);
  const PAdic t = truncate_absolute(r.t, depth);
  if (t.absolute_precision() < depth) {
    fail(ErrorCode::IndistinguishableAtPrecision, "boundary limit not known to depth " + std::to_string(depth));
  }
  return padic_end(t);
}

// Right products of the steps produced by `next` (element, phi) until the
// depth-`depth` ancestor of R o has been the same at `window` consecutive
// ascending ladder epochs and the height is `guard` levels above it.
template <class Next>
BoundarySample boundary_limit(const StepLaw& law, int depth, const BoundaryOptions& opt, Next&& next) {
  AffineElement r = identity_element(law.realization(), law.q(), law.budget());
  int height = 0;
  int top = 0;
  int stable = 0;
  std::optional<Vertex> prefix;
  BoundarySample out;
  auto advance = [&] {
    if (out.steps >= opt.budget) {
      throw StepBudgetExceeded("boundary limit not reached within " + std::to_string(opt.budget) + " steps", {});
    }
    const auto [x, dphi, cost] = next();
    r = compose(r, *x);
    height += dphi;
    out.steps += cost;
  };
  for (;;) {
    advance();
    if (height <= top) continue;
    top = height;
    ++out.epochs;
    if (height < depth) continue;
    Vertex v = origin_image_ancestor(r, depth);
    if (prefix && v == *prefix) {
      ++stable;
    } else {
      prefix = std::move(v);
      stable = 1;
    }
    if (stable >= opt.window && height >= depth + opt.guard) break;
  }
  out.end = truncated_limit(r, depth);
  if (opt.audit) {
    const int goal = top + opt.guard;
    while (height < goal) advance();
    out.audit_changed = !(origin_image_ancestor(r, depth) == *prefix);
  }
  return out;
}

struct StepRef {
  const AffineElement* element;
  int dphi;
  std::int64_t cost;
};

}  // namespace

LadderRecord ladder_times(const StepLaw& law, int count, LadderDirection direction, RandomStream& stream,
                          std::int64_t budget, bool keep_elements) {
  LadderRecord rec;
  rec.direction = direction;
  AffineElement g = identity_element(law.realization(), law.q(), law.budget());
  int height = 0;
  int record = 0;
  const bool up = direction == LadderDirection::Up;
  while (static_cast<int>(rec.times.size()) < count) {
    if (rec.steps >= budget) {
      throw StepBudgetExceeded("ladder epoch " + std::to_string(rec.times.size() + 1) + " not reached within " +
                                   std::to_string(budget) + " steps",
                               rec);
    }
    const std::size_t i = law.sample_index(stream);
    ++rec.steps;
    height += law.phis()[i];
    if (keep_elements) g = up ? compose(law.atoms()[i].element, g) : compose(g, law.atoms()[i].element);
    if (up ? height > record : height < record) {
      record = height;
      rec.times.push_back(rec.steps);
      rec.heights.push_back(height);
      if (keep_elements) rec.elements.push_back(g);
    }
  }
  return rec;
}

Excursion run_excursion(const StepLaw& law, RandomStream& stream, std::int64_t budget, bool keep_prefix) {
  Excursion ex;
  AffineElement l = identity_element(law.realization(), law.q(), law.budget());
  int height = 0;
  for (;;) {
    if (keep_prefix) {
      ex.prefix.push_back(l);
      ex.heights.push_back(height);
    }
    ex.min_height = std::min(ex.min_height, height);
    if (ex.length >= budget) {
      LadderRecord partial;
      partial.steps = ex.length;
      throw StepBudgetExceeded("excursion longer than " + std::to_string(budget) + " steps", partial);
    }
    const std::size_t i = law.sample_index(stream);
    ++ex.length;
    l = compose(law.atoms()[i].element, l);
    height += law.phis()[i];
    if (height > 0) break;
  }
  ex.block = std::move(l);
  ex.block_height = height;
  return ex;
}

BoundarySample sample_boundary_limit(const StepLaw& law, int depth, RandomStream& stream,
                                     const BoundaryOptions& options) {
  if (law.drift_sign() <= 0) fail(ErrorCode::NonPositiveDrift, "boundary limits need an upward drift");
  return boundary_limit(law, depth, options, [&] {
    const std::size_t i = law.sample_index(stream);
    return StepRef{&law.atoms()[i].element, law.phis()[i], 1};
  });
}

BoundarySample sample_ladder_boundary_limit(const StepLaw& law, int depth, RandomStream& stream,
                                            const BoundaryOptions& options) {
  if (law.drift_sign() < 0) fail(ErrorCode::NonPositiveDrift, "ladder blocks need a non-negative drift");
  Excursion block;
  return boundary_limit(law, depth, options, [&] {
    block = run_excursion(law, stream, options.budget, false);
    return StepRef{&block.block, block.block_height, block.length};
  });
}

RegimeReport height_regime_report(const StepLaw& law, std::int64_t trajectories, std::int64_t horizon,
                                  std::uint64_t seed, int threshold, int extreme) {
  struct Path {
    int terminal, lo, hi;
  };
  const auto paths = parallel_map<Path>(trajectories, [&](std::int64_t k) {
    RandomStream stream(seed, stream_id(StreamPurpose::Steps, static_cast<std::uint64_t>(k)));
    int h = 0, lo = 0, hi = 0;
    for (std::int64_t n = 0; n < horizon; ++n) {
      h += law.phis()[law.sample_index(stream)];
      lo = std::min(lo, h);
      hi = std::max(hi, h);
    }
    return Path{h, lo, hi};
  });
  RegimeReport rep;
  rep.trajectories = trajectories;
  rep.horizon = horizon;
  rep.threshold = threshold;
  rep.extreme = extreme;
  std::int64_t below = 0, above = 0, both = 0;
  for (const auto& p : paths) {
    rep.terminal.push_back(p.terminal);
    rep.minimum.push_back(p.lo);
    rep.maximum.push_back(p.hi);
    below += p.terminal < -threshold;
    above += p.terminal > threshold;
    both += p.hi > extreme && p.lo < -extreme;
  }
  const double n = static_cast<double>(std::max<std::int64_t>(trajectories, 1));
  rep.frac_below = static_cast<double>(below) / n;
  rep.frac_above = static_cast<double>(above) / n;
  rep.frac_both_extremes = static_cast<double>(both) / n;
  if (rep.frac_below >= 0.99) {
    rep.classification = "converges to omega";
  } else if (rep.frac_above >= 0.99) {
    rep.classification = "converges to a boundary end";
  } else {
    rep.classification = "oscillating heights";
  }
  return rep;
}

ContractionReport local_contraction(const StepLaw& law, const End& u, int ball_height, std::int64_t trajectories,
                                    const std::vector<std::int64_t>& horizons, std::uint64_t seed) {
  const std::int64_t horizon = horizons.empty() ? 0 : *std::max_element(horizons.begin(), horizons.end());
  struct Row {
    std::vector<double> m;
    bool undecided = false;
  };
  const double q = law.q();
  const auto rows = parallel_map<Row>(trajectories, [&](std::int64_t k) {
    RandomStream stream(seed, stream_id(StreamPurpose::Steps, static_cast<std::uint64_t>(k)));
    Row row;
    row.m.assign(horizons.size(), 0.0);
    End cur = u;
    int height = 0;
    for (std::int64_t n = 1; n <= horizon && !row.undecided; ++n) {
      const std::size_t i = law.sample_index(stream);
      cur = act_end(law.atoms()[i].element, cur);
      height += law.phis()[i];
      bool in_ball = false;
      try {
        if (cur.kind == End::Kind::PAdic) {
          in_ball = valuation_at_least(cur.point, ball_height);
        } else {
          if (cur.known_upto < ball_height) fail(ErrorCode::IndistinguishableAtPrecision, "lamp window");
          in_ball = cur.lamps.up_to(ball_height).empty();
        }
      } catch (const Error&) {
        row.undecided = true;
        break;
      }
      if (!in_ball) continue;
      const double value = std::pow(q, -height);
      for (std::size_t j = 0; j < horizons.size(); ++j) {
        if (2 * n >= horizons[j] && n <= horizons[j]) row.m[j] = std::max(row.m[j], value);
      }
    }
    return row;
  });
  ContractionReport rep;
  rep.horizons = horizons;
  rep.trajectories = trajectories;
  for (std::size_t j = 0; j < horizons.size(); ++j) {
    std::vector<double> values;
    for (const auto& row : rows) {
      if (!row.undecided) values.push_back(row.m[j]);
    }
    double median = 0.0;
    if (!values.empty()) {
      std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2), values.end());
      median = values[values.size() / 2];
    }
    rep.medians.push_back(median);
  }
  for (const auto& row : rows) rep.undecided += row.undecided;
  rep.non_increasing = true;
  for (std::size_t j = 1; j < rep.medians.size(); ++j) {
    if (rep.medians[j] > rep.medians[j - 1]) rep.non_increasing = false;
  }
  return rep;
}

std::vector<End> sample_boundary_limits(const StepLaw& law, int depth, std::int64_t count, std::uint64_t seed,
                                        std::uint64_t stream_offset) {
  return parallel_map<End>(count, [&](std::int64_t k) {
    RandomStream stream(seed, stream_id(StreamPurpose::Boundary, stream_offset + static_cast<std::uint64_t>(k)));
    return sample_boundary_limit(law, depth, stream).end;
  });
}

double prefix_stability(const StepLaw& law, int depth, std::int64_t trajectories, std::uint64_t seed) {
  const auto stable = parallel_map<int>(trajectories, [&](std::int64_t k) {
    RandomStream stream(seed, stream_id(StreamPurpose::Boundary, static_cast<std::uint64_t>(k)));
    BoundaryOptions bo;
    bo.audit = true;
    try {
      return sample_boundary_limit(law, depth, stream, bo).audit_changed ? 0 : 1;
    } catch (const StepBudgetExceeded&) {
      return 0;
    }
  });
  double n = 0;
  for (int v : stable) n += v;
  return stable.empty() ? 0.0 : n / static_cast<double>(stable.size());
}

std::vector<double> max_disc_masses(const std::vector<End>& ends, const std::vector<int>& depths) {
  std::vector<double> out;
  for (int depth : depths) {
    std::map<std::string, int> counts;
    int best = 0;
    for (const auto& e : ends) best = std::max(best, ++counts[to_string(end_ancestor(e, depth))]);
    out.push_back(ends.empty() ? 0.0 : static_cast<double>(best) / static_cast<double>(ends.size()));
  }
  return out;
}

}  // namespace treewalk
