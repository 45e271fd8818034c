#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace treewalk {

enum class Verdict { Pass, Fail, Skipped, Trend };

inline const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Skipped: return "skipped";
    case Verdict::Trend: return "trend";
  }
  return "?";
}

// One checked statement.  `anchor` says in words which property is checked.
struct Claim {
  std::string id;
  std::string anchor;
  double estimate = std::numeric_limits<double>::quiet_NaN();
  double stderr_ = 0.0;
  double reference = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  Verdict verdict = Verdict::Skipped;
  // The estimate's own truncation diagnostics exceed their tolerance.
  bool truncation_too_coarse = false;
  std::string note;
  std::vector<std::pair<std::string, double>> stats;
};

inline Verdict verdict_of(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

// |a - b| <= k * sqrt(sa^2 + sb^2) + slack
inline bool agree(double a, double sa, double b, double sb, double k, double slack = 0.0) {
  return std::abs(a - b) <= k * std::sqrt(sa * sa + sb * sb) + slack;
}

}  // namespace treewalk
