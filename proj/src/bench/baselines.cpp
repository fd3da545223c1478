#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <queue>
#include <random>
#include <stdexcept>

#include "zonenav/bench.hpp"

namespace zonenav {

std::string to_string(Method method) {
  switch (method) {
    case Method::RandomWalk: return "random_walk";
    case Method::StandardFrontier: return "standard_frontier";
    case Method::Reactive: return "reactive";
    case Method::ProposedUniformPrior: return "proposed_uniform";
    case Method::Proposed: return "proposed";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  for (const Method m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::string method_names() {
  std::string out;
  for (const Method m : kAllMethods) {
    if (!out.empty()) out += ", ";
    out += to_string(m);
  }
  return out;
}

namespace {

constexpr double kReactiveEpsilon = 0.1;
constexpr Action kMoves[3] = {Action::MoveAhead, Action::RotateLeft, Action::RotateRight};

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Memoryless controllers: the policy sees only the current scan plus the
// previous action's outcome.
using Policy = std::function<Action(const AgentPose&, bool collided, std::mt19937_64&)>;

EpisodeOutcome run_memoryless(const Scene& scene, const EpisodeConfig& cfg, const StepObserver& observer,
                              std::uint64_t salt, const Policy& policy) {
  EpisodeOutcome out;
  std::mt19937_64 rng(mix(cfg.seed, salt));
  AgentPose pose = cfg.start.value_or(scene.agent_start);
  const Cell start = pose.cell;
  const OccupancyGrid grid(scene.width, scene.height, scene.cell_size);
  const ZoneGraph graph(cfg.zones);
  const ObjectRegistry registry(cfg.perception.merge_radius);
  bool collided = false;
  double travelled = 0.0;

  for (int step = 0; step < cfg.max_steps; ++step) {
    if (observer) observer(StepView{step, pose, grid, graph, registry});
    StepRecord rec;
    rec.step = step;
    rec.pose = pose;
    if (check_success(scene, pose, cfg.success_radius)) {
      rec.action = Action::Stop;
      rec.terminal = "success";
      out.trace.steps.push_back(std::move(rec));
      break;
    }
    rec.action = policy(pose, collided, rng);
    const StepOutcome so = step_agent(scene, pose, rec.action);
    collided = so.collided;
    rec.collided = so.collided;
    if (rec.action == Action::MoveAhead && !so.collided) travelled += scene.cell_size;
    pose = so.pose;
    out.trace.steps.push_back(std::move(rec));
  }
  if (!out.trace.steps.empty() && !out.trace.steps.back().terminal) {
    out.trace.steps.back().terminal = "budget_exhausted";
  }
  out.trace.outcome = out.trace.steps.empty() ? "budget_exhausted" : *out.trace.steps.back().terminal;
  out.result.success = out.trace.outcome == "success";
  out.result.path_length = travelled;
  out.result.steps = static_cast<int>(out.trace.steps.size());
  if (const auto shortest = oracle_shortest_path(scene, start, scene.target_label, cfg.success_radius)) {
    out.result.shortest_length = *shortest;
  }
  return out;
}

Action random_rotation(std::mt19937_64& rng) { return (rng() & 1) ? Action::RotateLeft : Action::RotateRight; }

Action reactive_policy(const Scene& scene, const EpisodeConfig& cfg, const AgentPose& pose, bool collided,
                       std::mt19937_64& rng) {
  if (collided) return random_rotation(rng);
  if (unit(rng) < kReactiveEpsilon) return kMoves[rng() % 3];

  const auto detections = panoramic_scan(scene, pose, cfg.sense_range);
  const Detection* best = nullptr;
  double best_s = cfg.perception.tau_target;
  for (const auto& det : detections) {
    const double s = similarity(det.label, scene.target_label, *cfg.embeddings);
    if (s < cfg.perception.tau_target) continue;
    if (!best || s > best_s) {
      best = &det;
      best_s = s;
    }
  }
  if (!best) return Action::MoveAhead;

  const Cell goal = world_to_cell(best->world_position, scene.cell_size);
  const int dr = goal.r - pose.cell.r;
  const int dc = goal.c - pose.cell.c;
  Cell next = pose.cell;
  if (std::abs(dc) >= std::abs(dr)) {
    next.c += dc > 0 ? 1 : -1;
  } else {
    next.r += dr > 0 ? 1 : -1;
  }
  if (next == pose.cell) return Action::MoveAhead;
  return action_toward(pose, next);
}

}  // namespace

EpisodeOutcome run_baseline(Method kind, const Scene& scene, const EpisodeConfig& cfg, const StepObserver& observer) {
  EpisodeOutcome out;
  switch (kind) {
    case Method::RandomWalk:
      out = run_memoryless(scene, cfg, observer, 1,
                           [](const AgentPose&, bool, std::mt19937_64& rng) { return kMoves[rng() % 3]; });
      break;
    case Method::Reactive:
      if (!cfg.embeddings) throw std::invalid_argument("reactive baseline needs an embedding table");
      out = run_memoryless(scene, cfg, observer, 2, [&](const AgentPose& pose, bool collided, std::mt19937_64& rng) {
        return reactive_policy(scene, cfg, pose, collided, rng);
      });
      break;
    case Method::StandardFrontier: {
      EpisodeConfig c = cfg;
      c.strategy = Strategy::StandardFrontier;
      out = run_episode(scene, c, observer);
      break;
    }
    case Method::ProposedUniformPrior: {
      EpisodeConfig c = cfg;
      c.strategy = Strategy::Proposed;
      c.backend = std::make_shared<UniformBackend>(kDefaultPTarget);
      out = run_episode(scene, c, observer);
      break;
    }
    case Method::Proposed: {
      EpisodeConfig c = cfg;
      c.strategy = Strategy::Proposed;
      out = run_episode(scene, c, observer);
      break;
    }
  }
  out.trace.method = to_string(kind);
  return out;
}

AgentPose episode_start(const Scene& scene, std::uint64_t seed) {
  if (seed == 0) return scene.agent_start;

  // Geodesic distance to the nearest success cell, by multi-source BFS.
  const auto n = static_cast<std::size_t>(scene.width) * scene.height;
  std::vector<int> dist(n, -1);
  std::queue<Cell> open;
  for (int r = 0; r < scene.height; ++r) {
    for (int c = 0; c < scene.width; ++c) {
      const Cell cell{r, c};
      if (scene.is_floor(cell) && check_success(scene, AgentPose{cell, Heading::East})) {
        dist[scene.index(cell)] = 0;
        open.push(cell);
      }
    }
  }
  while (!open.empty()) {
    const Cell cur = open.front();
    open.pop();
    for (const Cell d : kFourNeighbors) {
      const Cell next{cur.r + d.r, cur.c + d.c};
      if (!scene.is_floor(next) || dist[scene.index(next)] >= 0) continue;
      dist[scene.index(next)] = dist[scene.index(cur)] + 1;
      open.push(next);
    }
  }

  std::vector<std::uint8_t> excluded(n, 0);
  for (const auto& zone : scene.zones_gt) {
    const bool holds_target = std::any_of(scene.objects.begin(), scene.objects.end(), [&](const ObjectInstance& o) {
      return o.label == scene.target_label &&
             std::find(zone.cells.begin(), zone.cells.end(), scene.object_cell(o)) != zone.cells.end();
    });
    if (!holds_target) continue;
    for (const Cell cell : zone.cells) excluded[scene.index(cell)] = 1;
  }
  for (const auto& obj : scene.objects) excluded[scene.index(scene.object_cell(obj))] = 1;

  const int min_steps = static_cast<int>(std::ceil(2.0 / scene.cell_size - 1e-9));
  std::vector<Cell> candidates;
  for (int r = 0; r < scene.height; ++r) {
    for (int c = 0; c < scene.width; ++c) {
      const Cell cell{r, c};
      if (!scene.is_floor(cell) || excluded[scene.index(cell)]) continue;
      if (dist[scene.index(cell)] >= min_steps) candidates.push_back(cell);
    }
  }
  if (candidates.empty()) return scene.agent_start;

  std::mt19937_64 rng(mix(seed, 7));
  AgentPose pose;
  pose.cell = candidates[rng() % candidates.size()];
  pose.heading = static_cast<Heading>(90 * static_cast<int>(rng() % 4));
  return pose;
}

}  // namespace zonenav
