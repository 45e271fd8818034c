#include "treewalk/config.hpp"

#include <fstream>
#include <sstream>

#include "treewalk/error.hpp"
#include "text_util.hpp"

namespace treewalk {
namespace {

struct Line {
  int number;
  std::string key;
  std::string value;
};

std::int64_t to_int(const std::string& v) {
  const Rational r = parse_rational(v);
  if (r.denominator() != 1) fail(ErrorCode::MalformedSyntax, "expected an integer, got '" + v + "'");
  return r.numerator();
}

std::uint64_t to_u64(const std::string& v) {
  std::size_t used = 0;
  std::uint64_t out = 0;
  try {
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || v[0] == '-') fail(ErrorCode::MalformedSyntax, "expected an unsigned integer, got '" + v + "'");
  return out;
}

double to_real(const std::string& v) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) {
    // Also accept rationals such as 1/2.
    return to_double(parse_rational(v));
  }
  return out;
}

std::vector<int> to_int_list(const std::string& v) {
  std::vector<int> out;
  for (auto item : detail::split_top(v, ',')) out.push_back(static_cast<int>(to_int(std::string(detail::trim(item)))));
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  fail(ErrorCode::MalformedSyntax, "expected true/false, got '" + v + "'");
}

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + std::to_string(xs[i]);
  return out;
}

}  // namespace

StepLaw ExperimentConfig::law() const { return StepLaw(atoms, law_options); }

StepLaw ExperimentConfig::law_unchecked() const {
  LawOptions opts = law_options;
  opts.skip_validation = true;
  return StepLaw(atoms, opts);
}

ExperimentConfig parse_config(std::string_view text, bool require_valid_law) {
  std::vector<std::pair<ErrorCode, std::string>> errors;
  auto record = [&](int line, const Error& e) {
    errors.emplace_back(e.code(), "line " + std::to_string(line) + ": " + e.what());
  };

  // Pass 1: split into sections.
  std::vector<Line> realization, law, experiment, cylinders;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto line = detail::trim(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = detail::trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (section != "realization" && section != "law" && section != "experiment" && section != "cylinders") {
        record(number, Error(ErrorCode::MalformedSyntax, "unknown section [" + section + "]"));
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      record(number, Error(ErrorCode::MalformedSyntax, "expected 'key = value'"));
      continue;
    }
    Line l{number, std::string(detail::trim(line.substr(0, eq))), std::string(detail::trim(line.substr(eq + 1)))};
    if (section == "realization") realization.push_back(l);
    else if (section == "law") law.push_back(l);
    else if (section == "experiment") experiment.push_back(l);
    else if (section == "cylinders") cylinders.push_back(l);
    else record(number, Error(ErrorCode::MalformedSyntax, "key outside of a section"));
  }

  ExperimentConfig cfg;
  auto& rc = cfg.realization;
  bool have_kind = false;
  bool have_q = false;
  for (const auto& l : realization) {
    try {
      if (l.key == "kind") {
        if (l.value == "padic") rc.kind = Realization::PAdic;
        else if (l.value == "lamplighter") rc.kind = Realization::Lamplighter;
        else fail(ErrorCode::MalformedSyntax, "kind must be padic or lamplighter");
        have_kind = true;
      } else if (l.key == "prime" || l.key == "q") {
        rc.q = static_cast<int>(to_int(l.value));
        have_q = true;
      } else if (l.key == "precision") {
        rc.budget.working_precision = static_cast<int>(to_int(l.value));
      } else if (l.key == "min_precision") {
        rc.budget.min_acceptable = static_cast<int>(to_int(l.value));
      } else if (l.key == "window_below") {
        rc.window_below = static_cast<int>(to_int(l.value));
      } else if (l.key == "window_above") {
        rc.window_above = static_cast<int>(to_int(l.value));
      } else {
        fail(ErrorCode::MalformedSyntax, "unknown key '" + l.key + "' in [realization]");
      }
    } catch (const Error& e) {
      record(l.number, e);
    }
  }
  if (!have_kind) errors.emplace_back(ErrorCode::MalformedSyntax, "[realization] kind is required");
  if (!have_q) errors.emplace_back(ErrorCode::MalformedSyntax, "[realization] prime (or q) is required");

  bool realization_ok = errors.empty();
  if (realization_ok) {
    try {
      if (rc.kind == Realization::PAdic) {
        rc.budget.validate(rc.q);
      } else if (rc.q < 2) {
        fail(ErrorCode::InvalidArgument, "lamp modulus q must be >= 2");
      }
    } catch (const Error& e) {
      errors.emplace_back(e.code(), std::string("[realization]: ") + e.what());
      realization_ok = false;
    }
  }

  for (const auto& l : law) {
    try {
      if (l.key == "atom") {
        if (!realization_ok) continue;
        const auto parts = detail::split_top(l.value, ':');
        if (parts.size() < 2) fail(ErrorCode::MalformedSyntax, "atom needs '<element> : <weight>'");
        const auto weight_text = parts.back();
        const auto element_text = std::string_view(l.value).substr(0, l.value.size() - weight_text.size() - 1);
        cfg.atoms.push_back({parse_element(element_text, rc.kind, rc.q, rc.budget), parse_rational(weight_text)});
      } else if (l.key == "allow_gcd") {
        cfg.law_options.allow_gcd = to_bool(l.value);
      } else {
        fail(ErrorCode::MalformedSyntax, "unknown key '" + l.key + "' in [law]");
      }
    } catch (const Error& e) {
      record(l.number, e);
    }
  }

  auto& ex = cfg.experiment;
  std::optional<Line> b_line;
  for (const auto& l : experiment) {
    try {
      if (l.key == "seed") ex.seed = to_u64(l.value);
      else if (l.key == "trajectories") ex.trajectories = to_int(l.value);
      else if (l.key == "horizon") ex.horizon = to_int(l.value);
      else if (l.key == "epsilon") ex.epsilon = to_real(l.value);
      else if (l.key == "n_list") ex.n_list = to_int_list(l.value);
      else if (l.key == "excursions") ex.excursions = to_int(l.value);
      else if (l.key == "depth") ex.depth = static_cast<int>(to_int(l.value));
      else if (l.key == "delta") ex.delta = static_cast<int>(to_int(l.value));
      else if (l.key == "renewal_levels") ex.renewal_levels = to_int_list(l.value);
      else if (l.key == "tolerance") ex.tolerance_sigmas = to_real(l.value);
      else if (l.key == "out") ex.out = l.value;
      else if (l.key == "b") b_line = l;
      else fail(ErrorCode::MalformedSyntax, "unknown key '" + l.key + "' in [experiment]");
    } catch (const Error& e) {
      record(l.number, e);
    }
  }
  if (ex.trajectories < 1) errors.emplace_back(ErrorCode::InvalidArgument, "trajectories must be >= 1");
  if (ex.horizon < 1) errors.emplace_back(ErrorCode::InvalidArgument, "horizon must be >= 1");
  if (ex.excursions < 1) errors.emplace_back(ErrorCode::InvalidArgument, "excursions must be >= 1");
  if (ex.delta < 1) errors.emplace_back(ErrorCode::InvalidArgument, "delta must be >= 1");

  if (realization_ok) {
    if (b_line) {
      try {
        cfg.b = parse_element(b_line->value, rc.kind, rc.q, rc.budget);
      } catch (const Error& e) {
        record(b_line->number, e);
      }
    }
    for (const auto& l : cylinders) {
      try {
        if (l.key != "cylinder") fail(ErrorCode::MalformedSyntax, "unknown key '" + l.key + "' in [cylinders]");
        cfg.cylinders.push_back(parse_cylinder(l.value, rc.q, rc.budget));
        if (cfg.cylinders.back().sources().front().kind != rc.kind) {
          fail(ErrorCode::RealizationMismatch, "cylinder vertices do not match the realization");
        }
      } catch (const Error& e) {
        record(l.number, e);
      }
    }
  }

  if (errors.empty()) {
    try {
      if (cfg.atoms.empty()) fail(ErrorCode::EmptySupport, "[law] needs at least one atom");
      (void)(require_valid_law ? cfg.law() : cfg.law_unchecked());
    } catch (const Error& e) {
      errors.emplace_back(e.code(), std::string("[law]: ") + e.what());
    }
  }

  if (!errors.empty()) {
    std::string msg;
    for (const auto& [code, text_] : errors) msg += (msg.empty() ? "" : "\n") + text_;
    throw Error(errors.front().first, msg);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path, bool require_valid_law) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), require_valid_law);
}

std::string to_config_text(const ExperimentConfig& c) {
  std::ostringstream out;
  const auto& r = c.realization;
  out << "[realization]\n";
  out << "kind = " << to_string(r.kind) << "\n";
  out << (r.kind == Realization::PAdic ? "prime = " : "q = ") << r.q << "\n";
  out << "precision = " << r.budget.working_precision << "\n";
  out << "min_precision = " << r.budget.min_acceptable << "\n";
  out << "window_below = " << r.window_below << "\n";
  out << "window_above = " << r.window_above << "\n";
  out << "\n[law]\n";
  const StepLaw law = c.law_unchecked();
  for (const auto& atom : law.atoms()) {
    out << "atom = " << to_string(atom.element) << " : " << to_string(atom.weight) << "\n";
  }
  out << "allow_gcd = " << (c.law_options.allow_gcd ? "true" : "false") << "\n";
  const auto& e = c.experiment;
  out << "\n[experiment]\n";
  out << "seed = " << e.seed << "\n";
  out << "trajectories = " << e.trajectories << "\n";
  out << "horizon = " << e.horizon << "\n";
  std::ostringstream eps;
  eps.precision(17);
  eps << e.epsilon;
  out << "epsilon = " << eps.str() << "\n";
  out << "n_list = " << join_ints(e.n_list) << "\n";
  out << "excursions = " << e.excursions << "\n";
  out << "depth = " << e.depth << "\n";
  out << "delta = " << e.delta << "\n";
  out << "renewal_levels = " << join_ints(e.renewal_levels) << "\n";
  std::ostringstream tol;
  tol.precision(17);
  tol << e.tolerance_sigmas;
  out << "tolerance = " << tol.str() << "\n";
  if (c.b) out << "b = " << to_string(*c.b) << "\n";
  out << "\n[cylinders]\n";
  for (const auto& f : c.cylinders) out << "cylinder = " << f.to_string() << "\n";
  return out.str();
}

}  // namespace treewalk
