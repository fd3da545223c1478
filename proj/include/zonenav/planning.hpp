#pragma once

// A* over the occupancy grid, semantic frontier weighting and TSP ordering
// of scan points.

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "zonenav/mapping.hpp"

namespace zonenav {

struct Path {
  std::vector<Cell> cells;
  double length = 0.0;  // (cells - 1) * cell_size
};

/// Shortest 4-connected path over Free cells with a Manhattan heuristic.
/// Open-list ties break on (f, h, cell). nullopt when unreachable or when
/// either endpoint is not Free.
std::optional<Path> astar(const OccupancyGrid& grid, Cell start, Cell goal);

/// Breadth-first search over Free cells; returns the first cell (in
/// distance, then row-major order) satisfying `accept`.
std::optional<Cell> nearest_free_matching(const OccupancyGrid& grid, Cell start,
                                          const std::function<bool(Cell)>& accept);

struct WeightParams {
  double alpha = 1.0;
  double beta = 0.5;
  double d_min = 0.25;  // meters

  void validate() const;
};

inline constexpr double kUnreachableWeight = -std::numeric_limits<double>::infinity();

/// alpha / max(D, d_min) + beta * p_target; -inf when D is absent.
double frontier_weight(std::optional<double> distance, double p_target, const WeightParams& params);

struct FrontierScore {
  std::size_t index = 0;  // into the frontier list
  std::optional<double> distance;
  std::optional<int> zone;
  double p_target = kDefaultPTarget;
  double weight = kUnreachableWeight;
};

/// Weight of a single frontier: D from A* (agent -> centroid), p_target
/// from the owning zone.
double weight_frontier(const Frontier& f, Cell agent, const ZoneGraph& graph, const OccupancyGrid& grid,
                       const WeightParams& params);

std::vector<FrontierScore> score_frontiers(const std::vector<Frontier>& frontiers, Cell agent, const ZoneGraph& graph,
                                           const OccupancyGrid& grid, const WeightParams& params);

/// Highest weight among the reachable scores; ties go to the smaller
/// distance, then the lower frontier id. nullopt when none is reachable.
std::optional<FrontierScore> best_frontier(const std::vector<Frontier>& frontiers,
                                           const std::vector<FrontierScore>& scores);

std::optional<FrontierScore> select_frontier(const std::vector<Frontier>& frontiers, Cell agent,
                                             const ZoneGraph& graph, const OccupancyGrid& grid,
                                             const WeightParams& params);

struct ScanPointParams {
  double r_scan = 1.0;    // geodesic meters from the centroid
  int k_max = 6;
  double spacing = 0.5;   // minimum pairwise meters
};

std::vector<Cell> generate_scan_points(const Frontier& f, const OccupancyGrid& grid, const ScanPointParams& params = {});

// ---- TSP -----------------------------------------------------------------

/// Square matrix; row/column 0 is the fixed start.
using DistanceMatrix = std::vector<std::vector<double>>;

inline constexpr std::size_t kHeldKarpLimit = 10;

/// Open path from node 0 through every other node; returns visiting order
/// of nodes 1..n-1.
std::vector<std::size_t> held_karp_path(const DistanceMatrix& d);
std::vector<std::size_t> nearest_neighbor_path(const DistanceMatrix& d);
/// 2-opt on an open path with fixed start, to convergence.
std::vector<std::size_t> two_opt(const DistanceMatrix& d, std::vector<std::size_t> order);
double path_cost(const DistanceMatrix& d, const std::vector<std::size_t>& order);

struct ScanRoute {
  std::vector<Cell> points;
  double total_length = 0.0;
  bool optimal = false;
  std::vector<Cell> dropped;  // unreachable from start
};

/// Open-path TSP from `start` through the points with A* leg lengths; exact
/// for up to kHeldKarpLimit points, nearest-neighbour + 2-opt above.
ScanRoute tsp_order(const std::vector<Cell>& points, Cell start, const OccupancyGrid& grid);

}  // namespace zonenav
