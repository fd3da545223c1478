#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

#include "zonenav/agent.hpp"

namespace zonenav {

namespace {

enum class PlanKind { None, Frontier, ScanRoute, Inspect, Verify };

struct Plan {
  PlanKind kind = PlanKind::None;
  std::optional<Cell> frontier;       // frontier id for the trace
  Cell goal;                          // current waypoint
  std::optional<int> target_zone;     // inter-zone leg
  std::deque<Cell> scan_points;       // remaining, in TSP order
  std::vector<Cell> path;
  std::size_t path_pos = 0;
  // verification
  Vec2 object;
  std::string object_label;
};

class Navigator {
 public:
  Navigator(const Scene& scene, const EpisodeConfig& cfg)
      : scene_(scene),
        cfg_(cfg),
        pose_(cfg.start.value_or(scene.agent_start)),
        grid_(scene.width, scene.height, scene.cell_size),
        registry_(cfg.perception.merge_radius),
        graph_(cfg.zones),
        viewed_(static_cast<std::size_t>(scene.width) * scene.height, 0) {}

  EpisodeOutcome run(const StepObserver& observer);

 private:
  bool proposed() const { return cfg_.strategy == Strategy::Proposed; }

  void sense(int step, StepRecord& rec);
  std::optional<Action> decide();
  std::optional<Action> follow();
  bool set_path_to(Cell goal);

  std::optional<Detection> verification_candidate() const;
  void begin_verification(const Detection& det);
  std::optional<Cell> verification_goal() const;
  bool grid_sight(Cell from, Cell object_cell) const;
  void blacklist_current();

  bool decide_exploration();
  bool decide_standard(const std::vector<Frontier>& frontiers);
  bool decide_proposed(const std::vector<Frontier>& frontiers);
  bool decide_inspection();
  void mark_viewed();
  bool informative(Cell point) const;
  void retire_scan_points();

  const Scene& scene_;
  const EpisodeConfig& cfg_;
  AgentPose pose_;
  OccupancyGrid grid_;
  ObjectRegistry registry_;
  ZoneGraph graph_;
  Mode mode_ = Mode::LocalExploration;
  std::optional<int> focus_;
  Plan plan_;
  bool replan_ = true;
  std::vector<Detection> detections_;
  std::set<std::pair<std::string, Cell>> rejected_;
  std::optional<Cell> last_scan_cell_;
  // Free cells that have been in clear sight within sensing range: an object
  // standing there would have been detected.
  std::vector<std::uint8_t> viewed_;
  double travelled_ = 0.0;
  int inferences_ = 0;
  int fallbacks_ = 0;
};

void Navigator::sense(int step, StepRecord& rec) {
  if (!last_scan_cell_ || *last_scan_cell_ != pose_.cell) {
    integrate_scan(grid_, pose_, scene_, cfg_.sense_range);
    mark_viewed();
    last_scan_cell_ = pose_.cell;
  }
  detections_ = panoramic_scan(scene_, pose_, cfg_.sense_range);

  std::set<std::string> labels;
  std::vector<std::size_t> fresh;
  for (const auto& det : detections_) {
    if (filter_detection(det, cfg_.perception) != FilterVerdict::Accept) continue;
    labels.insert(det.label);
    const Registration reg = registry_.register_object(det, step);
    if (reg.is_new) fresh.push_back(reg.index);
  }
  if (labels.empty()) return;

  const ZoneAssignment za = graph_.assign_zone({pose_.position(scene_.cell_size), labels});
  for (const std::size_t idx : fresh) registry_.set_zone(idx, za.zone_id);
  if (!za.context_reset) return;

  if (proposed()) {
    focus_ = za.zone_id;
    const auto& node = graph_.node(za.zone_id);
    const InferenceOutcome out = cfg_.backend->infer(node.object_labels, scene_.target_label);
    graph_.update_node_semantics(za.zone_id, {out.value.category, out.value.p_target});
    rec.inferences.push_back({za.zone_id, out.prompt, out.value.category, out.value.p_target, out.backend});
    ++inferences_;
    if (out.fallback) {
      rec.fallbacks.push_back(out.fallback_reason);
      ++fallbacks_;
    }
    // New semantics can change which zone deserves attention.
    if (mode_ != Mode::ObjectVerification) replan_ = true;
  }
  rec.zones = graph_;
}

std::optional<Detection> Navigator::verification_candidate() const {
  for (const auto& det : detections_) {
    if (!is_verification_trigger(det, scene_.target_label, *cfg_.embeddings, cfg_.perception)) continue;
    if (rejected_.count({det.label, world_to_cell(det.world_position, scene_.cell_size)})) continue;
    return det;  // detections are sorted nearest first
  }
  return std::nullopt;
}

bool Navigator::grid_sight(Cell from, Cell object_cell) const {
  for (const Cell c : sight_line(from, object_cell)) {
    if (c == object_cell) continue;
    if (!grid_.is_free(c)) return false;
  }
  return true;
}

std::optional<Cell> Navigator::verification_goal() const {
  const Cell obj_cell = world_to_cell(plan_.object, scene_.cell_size);
  const double radius = cfg_.success_radius + 1e-9;
  auto exact = nearest_free_matching(grid_, pose_.cell, [&](Cell c) {
    return distance(cell_center(c, scene_.cell_size), plan_.object) <= radius && grid_sight(c, obj_cell);
  });
  if (exact) return exact;

  // Nothing certified yet: head for the closest known cell and look again.
  std::optional<Cell> best;
  double best_d = std::numeric_limits<double>::infinity();
  nearest_free_matching(grid_, pose_.cell, [&](Cell c) {
    const double d = distance(cell_center(c, scene_.cell_size), plan_.object);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
    return false;
  });
  return best;
}

void Navigator::begin_verification(const Detection& det) {
  plan_ = Plan{};
  plan_.kind = PlanKind::Verify;
  plan_.object = det.world_position;
  plan_.object_label = det.label;
  mode_ = Mode::ObjectVerification;
}

void Navigator::blacklist_current() {
  rejected_.insert({plan_.object_label, world_to_cell(plan_.object, scene_.cell_size)});
  plan_ = Plan{};
  mode_ = Mode::LocalExploration;
  replan_ = true;
}

bool Navigator::set_path_to(Cell goal) {
  const auto path = astar(grid_, pose_.cell, goal);
  if (!path) return false;
  plan_.goal = goal;
  plan_.path = path->cells;
  plan_.path_pos = 0;
  return true;
}

std::optional<Action> Navigator::follow() {
  if (plan_.path_pos + 1 >= plan_.path.size() || plan_.path[plan_.path_pos] != pose_.cell) return std::nullopt;
  return action_toward(pose_, plan_.path[plan_.path_pos + 1]);
}

// Unknown cells walled in by obstacles never clear, so only frontier cells
// keep a scan point alive.
bool Navigator::informative(Cell point) const {
  const int k = static_cast<int>(std::floor(cfg_.scan_points.r_scan / scene_.cell_size + 1e-9));
  for (int dr = -k; dr <= k; ++dr) {
    for (int dc = -k; dc <= k; ++dc) {
      if ((dr * dr + dc * dc) > k * k) continue;
      if (grid_.is_frontier_cell({point.r + dr, point.c + dc})) return true;
    }
  }
  return false;
}

void Navigator::retire_scan_points() {
  while (!plan_.scan_points.empty() &&
         (plan_.scan_points.front() == pose_.cell || !informative(plan_.scan_points.front()))) {
    plan_.scan_points.pop_front();
  }
}

bool Navigator::decide_standard(const std::vector<Frontier>& frontiers) {
  WeightParams nearest = cfg_.weights;
  nearest.beta = 0.0;
  const ZoneGraph no_zones(cfg_.zones);
  const auto best = select_frontier(frontiers, pose_.cell, no_zones, grid_, nearest);
  if (!best) return false;
  const Frontier& f = frontiers[best->index];
  plan_ = Plan{};
  plan_.kind = PlanKind::Frontier;
  plan_.frontier = f.id;
  mode_ = Mode::LocalExploration;
  return set_path_to(f.centroid);
}

bool Navigator::decide_proposed(const std::vector<Frontier>& frontiers) {
  const auto scores = score_frontiers(frontiers, pose_.cell, graph_, grid_, cfg_.weights);

  for (const auto& node : graph_.nodes()) {
    const bool owns = std::any_of(scores.begin(), scores.end(),
                                  [&](const FrontierScore& s) { return s.distance && s.zone == node.id; });
    graph_.set_fully_explored(node.id, !owns);
  }

  WorldView view;
  view.focus_zone = focus_;
  view.focus_p = zone_p_target(graph_, focus_);
  view.delta_p = cfg_.delta_p;
  for (const auto& s : scores) {
    if (!s.distance) continue;
    auto it = std::find_if(view.frontier_zones.begin(), view.frontier_zones.end(),
                           [&](const ZoneFrontierSummary& z) { return z.zone == s.zone; });
    if (it == view.frontier_zones.end()) {
      view.frontier_zones.push_back({s.zone, s.p_target, *s.distance});
    } else {
      it->nearest_distance = std::min(it->nearest_distance, *s.distance);
    }
  }

  const Transition t = transition(mode_, view);
  if (t.exhausted) return false;
  plan_ = Plan{};
  mode_ = t.mode;

  if (t.mode == Mode::InterZoneNavigation) {
    const FrontierScore* pick = nullptr;
    for (const auto& s : scores) {
      if (!s.distance || s.zone != t.target_zone) continue;
      if (!pick || *s.distance < *pick->distance) pick = &s;
    }
    const Frontier& f = frontiers[pick->index];
    plan_.kind = PlanKind::Frontier;
    plan_.frontier = f.id;
    plan_.target_zone = t.target_zone;
    return set_path_to(f.centroid);
  }

  std::vector<FrontierScore> local;
  for (const auto& s : scores) {
    if (s.zone == focus_) local.push_back(s);
  }
  const auto best = best_frontier(frontiers, local);
  const Frontier& f = frontiers[best->index];
  const ScanRoute route = tsp_order(generate_scan_points(f, grid_, cfg_.scan_points), pose_.cell, grid_);
  plan_.kind = PlanKind::ScanRoute;
  plan_.frontier = f.id;
  plan_.scan_points.assign(route.points.begin(), route.points.end());
  retire_scan_points();
  if (plan_.scan_points.empty()) {
    // The centroid borders Unknown space, so it always stays worth a visit.
    plan_.kind = PlanKind::Frontier;
    return set_path_to(f.centroid);
  }
  return set_path_to(plan_.scan_points.front());
}

void Navigator::mark_viewed() {
  const int k = static_cast<int>(std::floor(cfg_.sense_range / scene_.cell_size));
  const Vec2 origin = pose_.position(scene_.cell_size);
  for (int r = pose_.cell.r - k; r <= pose_.cell.r + k; ++r) {
    for (int c = pose_.cell.c - k; c <= pose_.cell.c + k; ++c) {
      const Cell cell{r, c};
      if (!grid_.is_free(cell) || viewed_[scene_.index(cell)]) continue;
      if (distance(origin, cell_center(cell, scene_.cell_size)) > cfg_.sense_range + 1e-9) continue;
      const auto line = sight_line(pose_.cell, cell);
      if (std::all_of(line.begin(), line.end(), [&](Cell x) { return grid_.is_free(x); })) {
        viewed_[scene_.index(cell)] = 1;
      }
    }
  }
}

bool Navigator::decide_inspection() {
  const auto goal = nearest_free_matching(grid_, pose_.cell, [&](Cell c) { return !viewed_[scene_.index(c)]; });
  if (!goal) return false;
  plan_ = Plan{};
  plan_.kind = PlanKind::Inspect;
  mode_ = Mode::LocalExploration;
  return set_path_to(*goal);
}

bool Navigator::decide_exploration() {
  replan_ = false;
  const auto frontiers = detect_frontiers(grid_);
  if (proposed() ? decide_proposed(frontiers) : decide_standard(frontiers)) return true;
  // Clusters below the size filter are usually glimpses through a doorway;
  // they still lead somewhere once nothing larger is left.
  const auto small = detect_frontiers(grid_, 1);
  if (proposed() ? decide_proposed(small) : decide_standard(small)) return true;
  // Map complete: sweep cells that were only ever grazed by scan rays.
  return decide_inspection();
}

// Returns the action for this step, or nullopt when exploration is exhausted.
// A Stop action marks verified success.
std::optional<Action> Navigator::decide() {
  if (plan_.kind != PlanKind::Verify) {
    if (const auto det = verification_candidate()) begin_verification(*det);
  }

  for (int attempt = 0; attempt < 4; ++attempt) {
    if (plan_.kind == PlanKind::Verify) {
      const auto goal = verification_goal();
      if (goal && *goal == pose_.cell) {
        plan_.goal = *goal;
        if (check_success(scene_, pose_, cfg_.success_radius)) return Action::Stop;
        blacklist_current();
        continue;
      }
      if (!goal || !set_path_to(*goal)) {
        blacklist_current();
        continue;
      }
      if (const auto a = follow()) return a;
      blacklist_current();
      continue;
    }

    if (plan_.kind == PlanKind::Frontier && !replan_) {
      const bool arrived = pose_.cell == plan_.goal;
      const bool vanished = !grid_.is_frontier_cell(plan_.goal);
      if (arrived || vanished) {
        if (plan_.target_zone || mode_ == Mode::InterZoneNavigation) {
          focus_ = plan_.target_zone;
          mode_ = Mode::LocalExploration;
        }
        replan_ = true;
      }
    } else if (plan_.kind == PlanKind::ScanRoute && !replan_) {
      const Cell before = plan_.scan_points.empty() ? pose_.cell : plan_.scan_points.front();
      retire_scan_points();
      if (plan_.scan_points.empty()) {
        replan_ = true;
      } else if (plan_.scan_points.front() != before && !set_path_to(plan_.scan_points.front())) {
        replan_ = true;
      }
    } else if (plan_.kind == PlanKind::Inspect && !replan_) {
      if (viewed_[scene_.index(plan_.goal)]) replan_ = true;
    } else if (plan_.kind == PlanKind::None) {
      replan_ = true;
    }

    if (replan_ && !decide_exploration()) return std::nullopt;
    if (const auto a = follow()) return a;
    replan_ = true;
  }
  return std::nullopt;
}

EpisodeOutcome Navigator::run(const StepObserver& observer) {
  EpisodeOutcome out;
  out.trace.method = proposed() ? "proposed" : "standard_frontier";
  const Cell start = pose_.cell;

  for (int step = 0; step < cfg_.max_steps; ++step) {
    StepRecord rec;
    rec.step = step;
    rec.pose = pose_;
    sense(step, rec);
    rec.unknown_cells = grid_.unknown_count();
    if (observer) observer(StepView{step, pose_, grid_, graph_, registry_});

    const std::optional<Action> action = decide();
    rec.mode = mode_;
    rec.frontier = plan_.frontier;
    if (plan_.kind != PlanKind::None) rec.goal = plan_.goal;

    if (!action) {
      rec.action = Action::Stop;
      rec.terminal = "exploration_exhausted";
      out.trace.steps.push_back(std::move(rec));
      break;
    }
    rec.action = *action;
    if (*action == Action::Stop) {
      rec.terminal = "success";
      out.trace.steps.push_back(std::move(rec));
      break;
    }

    const StepOutcome so = step_agent(scene_, pose_, *action);
    rec.collided = so.collided;
    if (so.collided) {
      grid_.observe(step_toward(pose_.cell, pose_.heading), CellState::Occupied);
      replan_ = true;
    }
    if (*action == Action::MoveAhead && !so.collided) {
      travelled_ += scene_.cell_size;
      ++plan_.path_pos;
    }
    pose_ = so.pose;
    out.trace.steps.push_back(std::move(rec));
  }

  if (!out.trace.steps.empty() && !out.trace.steps.back().terminal) {
    out.trace.steps.back().terminal = "budget_exhausted";
  }
  out.trace.outcome = out.trace.steps.empty() ? "budget_exhausted" : *out.trace.steps.back().terminal;
  out.trace.inference_count = inferences_;
  out.trace.fallback_count = fallbacks_;

  out.result.success = out.trace.outcome == "success";
  out.result.path_length = travelled_;
  out.result.steps = static_cast<int>(out.trace.steps.size());
  if (const auto shortest = oracle_shortest_path(scene_, start, scene_.target_label, cfg_.success_radius)) {
    out.result.shortest_length = *shortest;
  }
  return out;
}

}  // namespace

EpisodeOutcome run_episode(const Scene& scene, const EpisodeConfig& cfg, const StepObserver& observer) {
  cfg.validate();
  Navigator nav(scene, cfg);
  return nav.run(observer);
}

}  // namespace zonenav
