#pragma once

// Hybrid map: a metric occupancy grid plus the topological zone graph.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "zonenav/world.hpp"

namespace zonenav {

enum class CellState : std::uint8_t { Unknown, Free, Occupied };

class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double cell_size = kDefaultCellSize);

  int width() const { return width_; }
  int height() const { return height_; }
  double cell_size() const { return cell_size_; }
  bool in_bounds(Cell cell) const { return cell.r >= 0 && cell.c >= 0 && cell.r < height_ && cell.c < width_; }

  /// Out-of-bounds reads as Occupied.
  CellState at(Cell cell) const { return in_bounds(cell) ? cells_[index(cell)] : CellState::Occupied; }
  bool is_free(Cell cell) const { return at(cell) == CellState::Free; }
  bool is_unknown(Cell cell) const { return in_bounds(cell) && cells_[index(cell)] == CellState::Unknown; }

  /// Free cell with at least one in-bounds Unknown 4-neighbour.
  bool is_frontier_cell(Cell cell) const;

  /// Sets a cell only if it is still Unknown. Returns true on change.
  bool observe(Cell cell, CellState state);
  int unknown_count() const { return unknown_; }

 private:
  std::size_t index(Cell cell) const { return static_cast<std::size_t>(cell.r) * width_ + cell.c; }

  int width_ = 0;
  int height_ = 0;
  double cell_size_ = kDefaultCellSize;
  int unknown_ = 0;
  std::vector<CellState> cells_;
};

/// Casts 360 rays (1 degree apart) from the agent's cell center out to
/// `range`; cells before a Wall become Free, the Wall becomes Occupied. The
/// agent's own cell is always marked Free. Returns the number of cells that
/// changed state.
int integrate_scan(OccupancyGrid& grid, const AgentPose& pose, const Scene& scene, double range = kSenseRange);

inline constexpr int kMinFrontierSize = 3;

struct Frontier {
  Cell id;                 // lexicographically smallest member
  Cell centroid;           // member cell closest to the mean position
  std::vector<Cell> cells; // sorted
};

/// Maximal 8-connected clusters of frontier cells with at least
/// `min_size` members, sorted by id.
std::vector<Frontier> detect_frontiers(const OccupancyGrid& grid, int min_size = kMinFrontierSize);

// ---- Zone graph ----------------------------------------------------------

inline constexpr double kDefaultPTarget = 0.5;

struct ZoneNode {
  int id = 0;
  Vec2 centroid;
  int observations = 0;
  std::set<std::string> object_labels;
  std::optional<std::string> zone_category;
  double p_target = kDefaultPTarget;
  bool fully_explored = false;
};

struct ZoneParams {
  double theta_zone = 0.2;  // Jaccard merge threshold
  double r_zone = 2.0;      // meters
};

struct ZoneObservation {
  Vec2 position;
  std::set<std::string> labels;
};

struct ZoneAssignment {
  int zone_id = 0;
  bool is_new = false;
  bool context_reset = false;
};

struct SemanticUpdate {
  std::string category;
  double p_target = kDefaultPTarget;
};

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

class ZoneGraph {
 public:
  explicit ZoneGraph(ZoneParams params = {}) : params_(params) {}

  /// Merges the observation into an existing node when its Jaccard
  /// similarity reaches theta_zone or its centroid lies within r_zone;
  /// otherwise spawns a node linked to the current one.
  ZoneAssignment assign_zone(const ZoneObservation& observation);

  /// Latest-wins overwrite. Throws std::out_of_range for an unknown id and
  /// std::invalid_argument when p_target is outside [0, 1].
  void update_node_semantics(int zone_id, const SemanticUpdate& update);

  void set_fully_explored(int zone_id, bool value) { nodes_.at(static_cast<std::size_t>(zone_id)).fully_explored = value; }

  const std::vector<ZoneNode>& nodes() const { return nodes_; }
  const ZoneNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::set<std::pair<int, int>>& edges() const { return edges_; }
  std::optional<int> current() const { return current_; }
  const ZoneParams& params() const { return params_; }
  bool empty() const { return nodes_.empty(); }

  /// True when every node is reachable from node 0 over edges.
  bool is_connected() const;

  /// Rebuilds a graph from exported parts (trace replay).
  static ZoneGraph restore(std::vector<ZoneNode> nodes, std::set<std::pair<int, int>> edges,
                           std::optional<int> current, ZoneParams params = {});

 private:
  void link(int a, int b);

  ZoneParams params_;
  std::vector<ZoneNode> nodes_;
  std::set<std::pair<int, int>> edges_;
  std::optional<int> current_;
};

/// Zone owning a frontier: the node whose centroid is geodesically closest
/// to the frontier centroid (ties to the lower id). nullopt when the graph
/// is empty or every centroid is farther than r_zone ("unknown zone").
std::optional<int> frontier_zone(const ZoneGraph& graph, const Frontier& frontier, const OccupancyGrid& grid);

/// p_target of the owning zone, or the default prior for the unknown zone.
double zone_p_target(const ZoneGraph& graph, std::optional<int> zone_id);

/// Known-Free cell closest to a zone centroid (A* anchor for the zone).
std::optional<Cell> zone_anchor(const ZoneNode& node, const OccupancyGrid& grid);

// ---- Snapshot export -----------------------------------------------------

/// `?` Unknown, `.` Free, `#` Occupied, `F` frontier, `A` agent.
std::string grid_to_text(const OccupancyGrid& grid, const std::vector<Frontier>& frontiers,
                         std::optional<Cell> agent);

/// {"nodes":[{id,centroid,labels,category,p_target,observations}],"edges":[[i,j],...],"current":k}
std::string zone_graph_to_json(const ZoneGraph& graph);
/// Inverse of zone_graph_to_json; throws ParseError.
ZoneGraph zone_graph_from_json(const std::string& text);

}  // namespace zonenav
