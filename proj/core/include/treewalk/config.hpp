#pragma once

// Experiment configuration: a line-oriented "key = value" file with the
// sections [realization], [law], [experiment] and [cylinders].  The grammar
// is documented in docs/config.md.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treewalk/cylinder.hpp"
#include "treewalk/step_law.hpp"

namespace treewalk {

struct RealizationConfig {
  Realization kind = Realization::PAdic;
  int q = 2;
  PrecisionBudget budget;
  // Lamplighter boundary window [-window_below, window_above].
  int window_below = 64;
  int window_above = 48;
};

struct ExperimentParams {
  std::uint64_t seed = 20261016;
  std::int64_t trajectories = 1000;
  std::int64_t horizon = 10000;
  double epsilon = 1.0;
  std::vector<int> n_list{15, 20, 25};
  std::int64_t excursions = 100000;
  int depth = 4;
  int delta = 15;
  std::vector<int> renewal_levels{0, 1};
  double tolerance_sigmas = 3.0;
  std::string out = "out";
};

struct ExperimentConfig {
  RealizationConfig realization;
  std::vector<Atom> atoms;
  LawOptions law_options;
  ExperimentParams experiment;
  std::vector<CylinderEvent> cylinders;
  std::optional<AffineElement> b;

  // Builds the validated law (throws NonExceptionalityFailed).
  [[nodiscard]] StepLaw law() const;
  // The law without the non-exceptionality gate, for reporting.
  [[nodiscard]] StepLaw law_unchecked() const;
};

// Syntax and value errors are collected and reported together, each with its
// line number; the thrown Error carries the code of the first one.  With
// `require_valid_law` the non-exceptionality check is enforced as well.
ExperimentConfig parse_config(std::string_view text, bool require_valid_law = true);
ExperimentConfig load_config(const std::string& path, bool require_valid_law = true);

// Canonical text for a config: parse_config(to_config_text(c)) reproduces
// every semantic field.  Output paths are excluded so that the text can be
// hashed.
std::string to_config_text(const ExperimentConfig& config);

}  // namespace treewalk
