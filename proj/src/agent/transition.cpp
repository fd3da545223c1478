#include <stdexcept>

#include "zonenav/agent.hpp"

namespace zonenav {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::LocalExploration: return "LocalExploration";
    case Mode::InterZoneNavigation: return "InterZoneNavigation";
    case Mode::ObjectVerification: return "ObjectVerification";
  }
  return "?";
}

void EpisodeConfig::validate() const {
  if (max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
  if (!(delta_p >= 0.0 && delta_p <= 1.0)) throw std::invalid_argument("delta_p must lie in [0, 1]");
  if (!embeddings) throw std::invalid_argument("episode needs an embedding table");
  if (strategy == Strategy::Proposed && !backend) throw std::invalid_argument("proposed strategy needs a backend");
  weights.validate();
  perception.validate();
}

namespace {

// Higher p first, then the nearer frontier, then known zones by id, the
// unknown zone last.
bool ranks_before(const ZoneFrontierSummary& a, const ZoneFrontierSummary& b) {
  if (a.p_target != b.p_target) return a.p_target > b.p_target;
  if (a.nearest_distance != b.nearest_distance) return a.nearest_distance < b.nearest_distance;
  if (a.zone.has_value() != b.zone.has_value()) return a.zone.has_value();
  return a.zone.value_or(0) < b.zone.value_or(0);
}

}  // namespace

Transition transition(Mode mode, const WorldView& view) {
  (void)mode;
  if (view.verification_trigger) return {Mode::ObjectVerification, std::nullopt, false};
  if (view.frontier_zones.empty()) return {Mode::LocalExploration, std::nullopt, true};

  bool focus_has_frontier = false;
  const ZoneFrontierSummary* best_other = nullptr;
  for (const auto& z : view.frontier_zones) {
    if (z.zone == view.focus_zone) {
      focus_has_frontier = true;
      continue;
    }
    if (!best_other || ranks_before(z, *best_other)) best_other = &z;
  }

  if (!focus_has_frontier || (best_other && best_other->p_target > view.focus_p + view.delta_p)) {
    return {Mode::InterZoneNavigation, best_other->zone, false};
  }
  return {Mode::LocalExploration, std::nullopt, false};
}

Action action_toward(const AgentPose& pose, Cell next) {
  const Heading want = heading_between(pose.cell, next);
  if (want == pose.heading) return Action::MoveAhead;
  if (want == rotate_right(pose.heading)) return Action::RotateRight;
  return Action::RotateLeft;
}

}  // namespace zonenav
