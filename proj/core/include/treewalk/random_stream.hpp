#pragma once

// Counter-based randomness (Philox-4x32-10).  A stream is addressed by
// (seed, stream id) and the n-th draw is a pure function of (seed, stream id,
// n), so trajectories can be generated in any order or on any thread and
// still reproduce bit for bit.

#include <array>
#include <cstdint>

namespace treewalk {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

// Distinct purposes (step draws, unit draws, ...) get disjoint stream ids.
enum class StreamPurpose : std::uint64_t {
  Steps = 1,
  Boundary = 2,
  Units = 3,
  Audit = 4,
  Excursion = 5,
};

constexpr std::uint64_t stream_id(StreamPurpose purpose, std::uint64_t index) noexcept {
  return (static_cast<std::uint64_t>(purpose) << 56) ^ index;
}

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next_u64() noexcept;
  // Uniform on [0, n) via the high half of a 64x64 product (n >= 1).
  std::uint64_t below(std::uint64_t n) noexcept;
  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  [[nodiscard]] std::uint64_t draws() const noexcept { return draws_; }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t draws_ = 0;
  std::array<std::uint32_t, 4> block_{};
};

}  // namespace treewalk
