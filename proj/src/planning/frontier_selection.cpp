#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zonenav/planning.hpp"

namespace zonenav {

void WeightParams::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw std::invalid_argument("alpha and beta must be non-negative");
  if (!(d_min > 0.0)) throw std::invalid_argument("d_min must be positive");
}

double frontier_weight(std::optional<double> distance, double p_target, const WeightParams& params) {
  if (!distance) return kUnreachableWeight;
  return params.alpha / std::max(*distance, params.d_min) + params.beta * p_target;
}

namespace {

FrontierScore score_one(const Frontier& f, std::size_t index, Cell agent, const ZoneGraph& graph,
                        const OccupancyGrid& grid, const WeightParams& params) {
  FrontierScore s;
  s.index = index;
  if (const auto path = astar(grid, agent, f.centroid)) s.distance = path->length;
  s.zone = graph.empty() ? std::nullopt : frontier_zone(graph, f, grid);
  s.p_target = zone_p_target(graph, s.zone);
  s.weight = frontier_weight(s.distance, s.p_target, params);
  return s;
}

bool nearly_equal(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

double weight_frontier(const Frontier& f, Cell agent, const ZoneGraph& graph, const OccupancyGrid& grid,
                       const WeightParams& params) {
  return score_one(f, 0, agent, graph, grid, params).weight;
}

std::vector<FrontierScore> score_frontiers(const std::vector<Frontier>& frontiers, Cell agent, const ZoneGraph& graph,
                                           const OccupancyGrid& grid, const WeightParams& params) {
  std::vector<FrontierScore> out;
  out.reserve(frontiers.size());
  for (std::size_t i = 0; i < frontiers.size(); ++i) out.push_back(score_one(frontiers[i], i, agent, graph, grid, params));
  return out;
}

std::optional<FrontierScore> best_frontier(const std::vector<Frontier>& frontiers,
                                           const std::vector<FrontierScore>& scores) {
  std::optional<FrontierScore> best;
  for (const auto& s : scores) {
    if (!s.distance) continue;
    if (!best) {
      best = s;
      continue;
    }
    bool better;
    if (!nearly_equal(s.weight, best->weight)) {
      better = s.weight > best->weight;
    } else if (*s.distance != *best->distance) {
      better = *s.distance < *best->distance;
    } else {
      better = frontiers[s.index].id < frontiers[best->index].id;
    }
    if (better) best = s;
  }
  return best;
}

std::optional<FrontierScore> select_frontier(const std::vector<Frontier>& frontiers, Cell agent,
                                             const ZoneGraph& graph, const OccupancyGrid& grid,
                                             const WeightParams& params) {
  return best_frontier(frontiers, score_frontiers(frontiers, agent, graph, grid, params));
}

std::vector<Cell> generate_scan_points(const Frontier& f, const OccupancyGrid& grid, const ScanPointParams& params) {
  Cell origin = f.centroid;
  if (!grid.is_free(origin)) {
    double best = 1e300;
    for (int r = 0; r < grid.height(); ++r)
      for (int c = 0; c < grid.width(); ++c) {
        if (!grid.is_free({r, c})) continue;
        const double d = std::hypot(r - f.centroid.r, c - f.centroid.c);
        if (d < best) {
          best = d;
          origin = {r, c};
        }
      }
    if (!grid.is_free(origin)) return {};
  }

  const int max_steps = static_cast<int>(std::floor(params.r_scan / grid.cell_size() + 1e-9));
  // Candidates in (geodesic distance, cell) order.
  std::vector<Cell> candidates;
  std::vector<Cell> layer{origin};
  std::vector<Cell> seen{origin};
  for (int depth = 0; depth <= max_steps && !layer.empty(); ++depth) {
    std::sort(layer.begin(), layer.end());
    candidates.insert(candidates.end(), layer.begin(), layer.end());
    if (depth == max_steps) break;
    std::vector<Cell> next_layer;
    for (const Cell cell : layer) {
      for (const Cell d : kFourNeighbors) {
        const Cell next{cell.r + d.r, cell.c + d.c};
        if (!grid.is_free(next) || std::find(seen.begin(), seen.end(), next) != seen.end()) continue;
        seen.push_back(next);
        next_layer.push_back(next);
      }
    }
    layer = std::move(next_layer);
  }

  std::vector<Cell> points;
  for (const Cell cand : candidates) {
    if (static_cast<int>(points.size()) >= params.k_max) break;
    const Vec2 p = cell_center(cand, grid.cell_size());
    const bool spaced = std::all_of(points.begin(), points.end(), [&](Cell q) {
      return distance(p, cell_center(q, grid.cell_size())) >= params.spacing - 1e-9;
    });
    if (spaced) points.push_back(cand);
  }
  return points;
}

}  // namespace zonenav
