#pragma once

// Cylinder sets V(x -> y) = { g : g x_i = y_i for all i }.  All elements of a
// nonempty cylinder share the same phi value, its level.

#include <string>
#include <string_view>
#include <vector>

#include "treewalk/affine.hpp"

namespace treewalk {

class CylinderEvent {
 public:
  // Throws InvalidArgument when the lists are empty or differ in length.
  CylinderEvent(std::vector<Vertex> sources, std::vector<Vertex> targets);

  [[nodiscard]] const std::vector<Vertex>& sources() const noexcept { return sources_; }
  [[nodiscard]] const std::vector<Vertex>& targets() const noexcept { return targets_; }
  // True when the pairs demand different height shifts.
  [[nodiscard]] bool empty() const noexcept { return empty_; }
  [[nodiscard]] int level() const noexcept { return level_; }
  [[nodiscard]] int max_source_height() const noexcept;
  [[nodiscard]] int max_target_height() const noexcept;

  [[nodiscard]] bool contains(const AffineElement& g) const;
  // b V(x -> y) = V(x -> b y).
  [[nodiscard]] CylinderEvent left_translate(const AffineElement& b) const;

  // "x1 -> y1 | x2 -> y2"
  [[nodiscard]] std::string to_string() const;

 private:
  std::vector<Vertex> sources_;
  std::vector<Vertex> targets_;
  int level_ = 0;
  bool empty_ = false;
};

CylinderEvent parse_cylinder(std::string_view text, int q, PrecisionBudget budget = {});

}  // namespace treewalk
