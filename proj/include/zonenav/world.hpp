#pragma once

// Scene description, procedural generator and the deterministic simulator.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zonenav/geometry.hpp"

namespace zonenav {

inline constexpr double kDefaultCellSize = 0.25;
inline constexpr double kSenseRange = 5.0;      // meters
inline constexpr double kSuccessRadius = 1.0;   // meters
inline constexpr double kPixelGain = 900.0;     // px * m^2

struct ObjectInstance {
  std::string label;
  Vec2 position;  // meters, at a cell center
  double size = 1.0;  // m^2 cross-section
};

struct ZoneAnnotation {
  int id = 0;
  std::string category;
  std::vector<Cell> cells;
};

struct AgentPose {
  Cell cell;
  Heading heading = Heading::East;

  Vec2 position(double cell_size) const { return cell_center(cell, cell_size); }
  bool operator==(const AgentPose&) const = default;
};

class Scene {
 public:
  int width = 0;
  int height = 0;
  double cell_size = kDefaultCellSize;
  std::vector<std::uint8_t> walls;  // row-major, 1 = Wall
  std::vector<ObjectInstance> objects;
  std::vector<ZoneAnnotation> zones_gt;
  AgentPose agent_start;
  std::string target_label;

  bool in_bounds(Cell cell) const { return cell.r >= 0 && cell.c >= 0 && cell.r < height && cell.c < width; }
  bool is_wall(Cell cell) const { return !in_bounds(cell) || walls[index(cell)] != 0; }
  bool is_floor(Cell cell) const { return !is_wall(cell); }
  std::size_t index(Cell cell) const { return static_cast<std::size_t>(cell.r) * width + cell.c; }
  Cell object_cell(const ObjectInstance& obj) const { return world_to_cell(obj.position, cell_size); }
  int floor_count() const;
};

/// Line of sight between two cells: the canonical ray crosses no Wall.
bool line_of_sight(const Scene& scene, Cell a, Cell b);

// ---- Vocabulary ----------------------------------------------------------

struct VocabEntry {
  std::string label;
  std::string category;
  double size = 1.0;
};

/// Object vocabulary: one `label category size` triple per line, `#` comments.
class Vocabulary {
 public:
  static Vocabulary load(const std::filesystem::path& path);
  static Vocabulary parse(const std::string& text, const std::string& origin = "<vocabulary>");

  const std::vector<VocabEntry>& entries() const { return entries_; }
  /// Categories in order of first appearance.
  const std::vector<std::string>& categories() const { return categories_; }
  std::vector<const VocabEntry*> in_category(const std::string& category) const;
  const VocabEntry* find(const std::string& label) const;

 private:
  std::vector<VocabEntry> entries_;
  std::vector<std::string> categories_;
};

// ---- Scene files ---------------------------------------------------------

Scene parse_scene(const std::string& text, const std::string& origin = "<scene>");
Scene load_scene(const std::filesystem::path& path);
std::string scene_to_json(const Scene& scene);
void save_scene(const Scene& scene, const std::filesystem::path& path);

/// Throws ValidationError naming the first violated invariant.
void validate_scene(const Scene& scene);
/// Throws ValidationError if any object label is absent from the vocabulary.
void validate_labels(const Scene& scene, const Vocabulary& vocab);

// ---- Generator -----------------------------------------------------------

struct GenSpec {
  int n_zones = 4;
  int objects_per_zone = 5;
  int width = 40;
  int height = 40;
  double cell_size = kDefaultCellSize;
  /// Category the target is drawn from; chosen by the seed when empty.
  std::optional<std::string> target_category;
};

/// Probability that an object in a zone is drawn from the zone's own
/// category; the rest is spread uniformly over the other categories. The
/// bundled priors table is derived from the same constant.
inline constexpr double kInCategoryRate = 0.85;

Scene generate_scene(std::uint64_t seed, const GenSpec& spec, const Vocabulary& vocab);

// ---- Simulator -----------------------------------------------------------

enum class Action { MoveAhead, RotateLeft, RotateRight, Stop };

std::string to_string(Action action);

struct StepOutcome {
  AgentPose pose;
  bool collided = false;
};

StepOutcome step_agent(const Scene& scene, const AgentPose& pose, Action action);

struct Detection {
  std::string label;
  double distance = 0.0;  // meters, > 0
  int apparent_pixels = 0;
  Vec2 world_position;
};

/// round(K_px * size / d^2)
int apparent_pixels(double size, double distance);

/// Every object within `range` whose cell ray is unobstructed, sorted by
/// (distance, label).
std::vector<Detection> panoramic_scan(const Scene& scene, const AgentPose& pose, double range = kSenseRange);

/// Geodesic meters from `from` to the nearest cell that would satisfy
/// check_success. nullopt when no such cell is reachable.
std::optional<double> oracle_shortest_path(const Scene& scene, Cell from, const std::string& target_label,
                                           double success_radius = kSuccessRadius);

bool check_success(const Scene& scene, const AgentPose& pose, double success_radius = kSuccessRadius);
bool check_success(const Scene& scene, const AgentPose& pose, const std::string& target_label,
                   double success_radius = kSuccessRadius);

}  // namespace zonenav
