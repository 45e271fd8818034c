#include "treewalk/cylinder.hpp"

#include <algorithm>

#include "treewalk/error.hpp"
#include "text_util.hpp"

namespace treewalk {

CylinderEvent::CylinderEvent(std::vector<Vertex> sources, std::vector<Vertex> targets)
    : sources_(std::move(sources)), targets_(std::move(targets)) {
  if (sources_.empty() || sources_.size() != targets_.size()) {
    fail(ErrorCode::InvalidArgument, "a cylinder needs matching, nonempty source and target lists");
  }
  level_ = targets_[0].height - sources_[0].height;
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (sources_[i].kind != targets_[i].kind || sources_[i].q != targets_[i].q ||
        sources_[i].kind != sources_[0].kind || sources_[i].q != sources_[0].q) {
      fail(ErrorCode::RealizationMismatch, "cylinder vertices from different trees");
    }
    if (targets_[i].height - sources_[i].height != level_) empty_ = true;
  }
}

int CylinderEvent::max_source_height() const noexcept {
  int h = sources_[0].height;
  for (const auto& x : sources_) h = std::max(h, x.height);
  return h;
}

int CylinderEvent::max_target_height() const noexcept {
  int h = targets_[0].height;
  for (const auto& y : targets_) h = std::max(h, y.height);
  return h;
}

bool CylinderEvent::contains(const AffineElement& g) const {
  if (empty_ || phi(g) != level_) return false;
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (!maps_to(g, sources_[i], targets_[i])) return false;
  }
  return true;
}

CylinderEvent CylinderEvent::left_translate(const AffineElement& b) const {
  std::vector<Vertex> images;
  for (const auto& y : targets_) images.push_back(act_vertex(b, y));
  return CylinderEvent(sources_, std::move(images));
}

std::string CylinderEvent::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (i != 0) out += " | ";
    out += treewalk::to_string(sources_[i]) + " -> " + treewalk::to_string(targets_[i]);
  }
  return out;
}

CylinderEvent parse_cylinder(std::string_view text, int q, PrecisionBudget budget) {
  std::vector<Vertex> sources;
  std::vector<Vertex> targets;
  for (auto pair : detail::split_top(text, '|')) {
    const auto arrow = pair.find("->");
    if (arrow == std::string_view::npos) {
      fail(ErrorCode::MalformedSyntax, "cylinder pair without '->': '" + std::string(detail::trim(pair)) + "'");
    }
    sources.push_back(parse_vertex(pair.substr(0, arrow), q, budget));
    targets.push_back(parse_vertex(pair.substr(arrow + 2), q, budget));
  }
  return CylinderEvent(std::move(sources), std::move(targets));
}

}  // namespace treewalk
