#pragma once

// Baselines, the benchmark suite runner, reports and map snapshots.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zonenav/agent.hpp"
#include "zonenav/metrics.hpp"

namespace zonenav {

enum class Method { RandomWalk, StandardFrontier, Reactive, ProposedUniformPrior, Proposed };

inline constexpr Method kAllMethods[] = {Method::RandomWalk, Method::StandardFrontier, Method::Reactive,
                                         Method::ProposedUniformPrior, Method::Proposed};

/// random_walk, standard_frontier, reactive, proposed_uniform, proposed
std::string to_string(Method method);
std::optional<Method> parse_method(const std::string& name);
std::string method_names();

/// Runs one episode of `kind`. `cfg.backend` is used by Proposed; the
/// uniform-prior variant substitutes a constant 0.5 backend.
EpisodeOutcome run_baseline(Method kind, const Scene& scene, const EpisodeConfig& cfg,
                            const StepObserver& observer = {});

/// Episode start for a (scene, seed) pair: seed 0 keeps the scene's own
/// start; other seeds draw a Floor cell outside every ground-truth zone that
/// holds a target instance, at least 2 m (geodesic) from the target.
AgentPose episode_start(const Scene& scene, std::uint64_t seed);

struct NamedScene {
  std::string name;
  Scene scene;
};

/// 4 categories x generator seeds 0-4 on the 4-zone, 5-object, 40x40 spec.
std::vector<NamedScene> default_suite_scenes(const Vocabulary& vocab);

struct SuiteSpec {
  std::vector<NamedScene> scenes;
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds;
  EpisodeConfig base;  // seed and start are overwritten per episode
  int workers = 1;
};

struct EpisodeRow {
  Method method = Method::Proposed;
  std::string scene;
  std::uint64_t seed = 0;
  EpisodeResult result;
  int inferences = 0;
  int fallbacks = 0;
};

struct MethodSummary {
  double sr = 0.0;
  double spl = 0.0;
  double td = 0.0;
  int n_episodes = 0;
  int fallbacks = 0;
};

struct BenchReport {
  std::vector<EpisodeRow> rows;  // sorted by (method, scene, seed)
  std::map<Method, MethodSummary> summary;
  std::string backend;
  std::vector<std::uint64_t> seeds;
  int max_steps = 0;
};

/// Called once per finished episode with its row and trace; may run on a
/// worker thread (calls are serialized).
using EpisodeSink = std::function<void(const EpisodeRow&, const EpisodeTrace&)>;

/// Full scenes x methods x seeds cross product. Per-episode exceptions are
/// folded into failed rows.
BenchReport run_suite(const SuiteSpec& spec, const EpisodeSink& sink = {},
                      const std::function<StepObserver(const NamedScene&, Method, std::uint64_t)>& observers = {});

std::string report_csv(const BenchReport& report);
std::string report_json(const BenchReport& report);
void write_report(const BenchReport& report, const std::filesystem::path& dir);

// ---- Snapshots -----------------------------------------------------------

/// Parses a trace written by trace_to_jsonl (poses, actions and zone-graph
/// snapshots are what rendering needs).
EpisodeTrace parse_trace_jsonl(const std::string& text);

struct Snapshot {
  std::string text;
  int width_px = 0;
  int height_px = 0;
  std::vector<unsigned char> rgb;

  /// Binary P6 portable pixmap.
  std::string ppm() const;
};

/// Rebuilds the agent's map at `step` by replaying the trace poses and
/// renders it. Throws std::out_of_range when the step is not in the trace.
Snapshot render_snapshot(const Scene& scene, const EpisodeTrace& trace, int step, int cell_px = 6);

/// Writes step_<n>.txt and step_<n>.ppm under `dir`.
void write_snapshot(const Snapshot& snapshot, const std::filesystem::path& dir, int step);

}  // namespace zonenav
