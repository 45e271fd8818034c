#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace treewalk::app {

// Exit codes are a stable contract.
enum Exit : int {
  kOk = 0,
  kFailed = 1,         // validation failure / failed claim
  kUsage = 2,          // unreadable or malformed config
  kTruncation = 3,     // a failed claim whose truncation diagnostics were too coarse
};

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trajectories;
  std::optional<std::int64_t> horizon;
  std::optional<double> tol;
  std::optional<std::string> out;
  std::string suite = "all";
  bool dump = false;
};

inline constexpr const char* kVersion = "0.1.0";

int cmd_validate(const Options& options, std::ostream& out, std::ostream& err);
int cmd_simulate(const Options& options, std::ostream& out, std::ostream& err);
int cmd_verify(const Options& options, std::ostream& out, std::ostream& err);

// SHA-256 of `text`, lowercase hex.
std::string sha256_hex(const std::string& text);

}  // namespace treewalk::app
