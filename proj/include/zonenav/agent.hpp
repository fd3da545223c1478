#pragma once

// The navigator's finite state machine and episode loop.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zonenav/inference.hpp"
#include "zonenav/mapping.hpp"
#include "zonenav/metrics.hpp"
#include "zonenav/perception.hpp"
#include "zonenav/planning.hpp"
#include "zonenav/world.hpp"

namespace zonenav {

enum class Mode { LocalExploration, InterZoneNavigation, ObjectVerification };

std::string to_string(Mode mode);

/// Which exploration policy drives the mapping stack.
enum class Strategy {
  Proposed,          // zone FSM, zone-weighted frontier scores, TSP scan routes
  StandardFrontier,  // nearest reachable frontier, direct A*, no semantics
};

struct EpisodeConfig {
  int max_steps = 500;
  WeightParams weights;
  PerceptionConfig perception;
  ZoneParams zones;
  ScanPointParams scan_points;
  double delta_p = 0.2;
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::Proposed;
  std::shared_ptr<const InferenceBackend> backend;
  std::shared_ptr<const EmbeddingTable> embeddings;
  double sense_range = kSenseRange;
  double success_radius = kSuccessRadius;
  /// Overrides the scene's agent_start when set.
  std::optional<AgentPose> start;

  void validate() const;
};

// ---- Mode transitions ----------------------------------------------------

/// One zone (or the unknown zone, id nullopt) that owns at least one
/// reachable frontier.
struct ZoneFrontierSummary {
  std::optional<int> zone;
  double p_target = kDefaultPTarget;
  double nearest_distance = 0.0;
};

struct WorldView {
  bool verification_trigger = false;
  std::optional<int> focus_zone;
  double focus_p = kDefaultPTarget;
  std::vector<ZoneFrontierSummary> frontier_zones;
  double delta_p = 0.2;
};

struct Transition {
  Mode mode = Mode::LocalExploration;
  std::optional<int> target_zone;  // InterZoneNavigation only
  bool exhausted = false;          // no reachable frontier anywhere
};

/// Priority order: verification trigger, then inter-zone (focus owns no
/// frontier, or another zone's p_target exceeds focus + delta_p), else
/// local exploration.
Transition transition(Mode mode, const WorldView& view);

// ---- Trace ---------------------------------------------------------------

struct InferenceEvent {
  int zone_id = 0;
  std::string prompt;
  std::string category;
  double p_target = 0.0;
  std::string backend;
};

struct StepRecord {
  int step = 0;
  std::optional<Mode> mode;  // absent for memoryless baselines
  AgentPose pose;            // before the action
  Action action = Action::Stop;
  bool collided = false;
  std::optional<Cell> frontier;  // id of the frontier being pursued
  std::optional<Cell> goal;
  std::vector<InferenceEvent> inferences;
  std::vector<std::string> fallbacks;
  int unknown_cells = -1;
  std::optional<ZoneGraph> zones;  // snapshot, only on steps where the graph changed
  std::optional<std::string> terminal;
};

struct EpisodeTrace {
  std::string method;
  std::vector<StepRecord> steps;
  std::string outcome;  // success | exploration_exhausted | budget_exhausted
  int inference_count = 0;
  int fallback_count = 0;
};

struct EpisodeOutcome {
  EpisodeResult result;
  EpisodeTrace trace;
};

/// Read-only state exposed to an observer after each step's sensing and
/// mapping update (before the action is executed).
struct StepView {
  int step = 0;
  const AgentPose& pose;
  const OccupancyGrid& grid;
  const ZoneGraph& graph;
  const ObjectRegistry& registry;
};

using StepObserver = std::function<void(const StepView&)>;

EpisodeOutcome run_episode(const Scene& scene, const EpisodeConfig& cfg, const StepObserver& observer = {});

/// One JSON object per step; the terminal step carries "terminal".
std::string trace_to_jsonl(const EpisodeTrace& trace);

/// Action turning/moving `pose` one primitive toward the 4-adjacent `next`.
Action action_toward(const AgentPose& pose, Cell next);

}  // namespace zonenav
