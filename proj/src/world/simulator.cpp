#include <algorithm>
#include <cmath>
#include <queue>

#include "zonenav/world.hpp"

namespace zonenav {

std::string to_string(Action action) {
  switch (action) {
    case Action::MoveAhead: return "MoveAhead";
    case Action::RotateLeft: return "RotateLeft";
    case Action::RotateRight: return "RotateRight";
    case Action::Stop: return "Stop";
  }
  return "?";
}

StepOutcome step_agent(const Scene& scene, const AgentPose& pose, Action action) {
  StepOutcome out{pose, false};
  switch (action) {
    case Action::MoveAhead: {
      const Cell next = step_toward(pose.cell, pose.heading);
      if (scene.is_floor(next)) {
        out.pose.cell = next;
      } else {
        out.collided = true;
      }
      break;
    }
    case Action::RotateLeft: out.pose.heading = rotate_left(pose.heading); break;
    case Action::RotateRight: out.pose.heading = rotate_right(pose.heading); break;
    case Action::Stop: break;
  }
  return out;
}

int apparent_pixels(double size, double distance) {
  return static_cast<int>(std::llround(kPixelGain * size / (distance * distance)));
}

std::vector<Detection> panoramic_scan(const Scene& scene, const AgentPose& pose, double range) {
  std::vector<Detection> out;
  const Vec2 here = pose.position(scene.cell_size);
  // An object sharing the agent's cell is treated as half a cell away.
  const double min_distance = 0.5 * scene.cell_size;
  for (const auto& obj : scene.objects) {
    const double d = distance(here, obj.position);
    if (d > range) continue;
    if (!line_of_sight(scene, pose.cell, scene.object_cell(obj))) continue;
    const double dist = std::max(d, min_distance);
    out.push_back({obj.label, dist, apparent_pixels(obj.size, dist), obj.position});
  }
  std::sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.label != b.label) return a.label < b.label;
    if (a.world_position.y != b.world_position.y) return a.world_position.y < b.world_position.y;
    return a.world_position.x < b.world_position.x;
  });
  return out;
}

namespace {

bool success_cell(const Scene& scene, Cell cell, const std::string& target, double radius) {
  const Vec2 here = cell_center(cell, scene.cell_size);
  for (const auto& obj : scene.objects) {
    if (obj.label != target) continue;
    if (distance(here, obj.position) > radius + 1e-9) continue;
    if (line_of_sight(scene, cell, scene.object_cell(obj))) return true;
  }
  return false;
}

}  // namespace

bool check_success(const Scene& scene, const AgentPose& pose, const std::string& target_label, double success_radius) {
  return success_cell(scene, pose.cell, target_label, success_radius);
}

bool check_success(const Scene& scene, const AgentPose& pose, double success_radius) {
  return check_success(scene, pose, scene.target_label, success_radius);
}

std::optional<double> oracle_shortest_path(const Scene& scene, Cell from, const std::string& target_label,
                                           double success_radius) {
  if (!scene.is_floor(from)) return std::nullopt;
  std::vector<int> dist(static_cast<std::size_t>(scene.width) * scene.height, -1);
  std::queue<Cell> open;
  open.push(from);
  dist[scene.index(from)] = 0;
  while (!open.empty()) {
    const Cell cur = open.front();
    open.pop();
    if (success_cell(scene, cur, target_label, success_radius)) {
      return dist[scene.index(cur)] * scene.cell_size;
    }
    for (const Cell d : kFourNeighbors) {
      const Cell next{cur.r + d.r, cur.c + d.c};
      if (!scene.is_floor(next) || dist[scene.index(next)] >= 0) continue;
      dist[scene.index(next)] = dist[scene.index(cur)] + 1;
      open.push(next);
    }
  }
  return std::nullopt;
}

}  // namespace zonenav
