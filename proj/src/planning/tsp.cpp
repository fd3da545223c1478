#include <algorithm>
#include <limits>

#include "zonenav/planning.hpp"

namespace zonenav {

double path_cost(const DistanceMatrix& d, const std::vector<std::size_t>& order) {
  double total = 0.0;
  std::size_t prev = 0;
  for (const std::size_t node : order) {
    total += d[prev][node];
    prev = node;
  }
  return total;
}

std::vector<std::size_t> held_karp_path(const DistanceMatrix& d) {
  const std::size_t k = d.size() <= 1 ? 0 : d.size() - 1;
  if (k == 0) return {};
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t full = (std::size_t{1} << k) - 1;
  // cost[mask][j]: cheapest path from the start covering `mask`, ending at point j.
  std::vector<std::vector<double>> cost(full + 1, std::vector<double>(k, inf));
  std::vector<std::vector<int>> parent(full + 1, std::vector<int>(k, -1));
  for (std::size_t j = 0; j < k; ++j) cost[std::size_t{1} << j][j] = d[0][j + 1];

  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!(mask & (std::size_t{1} << j)) || cost[mask][j] == inf) continue;
      for (std::size_t next = 0; next < k; ++next) {
        if (mask & (std::size_t{1} << next)) continue;
        const std::size_t nmask = mask | (std::size_t{1} << next);
        const double c = cost[mask][j] + d[j + 1][next + 1];
        if (c < cost[nmask][next]) {
          cost[nmask][next] = c;
          parent[nmask][next] = static_cast<int>(j);
        }
      }
    }
  }

  std::size_t end = 0;
  for (std::size_t j = 1; j < k; ++j) {
    if (cost[full][j] < cost[full][end]) end = j;
  }
  std::vector<std::size_t> order;
  std::size_t mask = full;
  int at = static_cast<int>(end);
  while (at >= 0) {
    order.push_back(static_cast<std::size_t>(at) + 1);
    const int prev = parent[mask][static_cast<std::size_t>(at)];
    mask &= ~(std::size_t{1} << static_cast<std::size_t>(at));
    at = prev;
  }
  std::reverse(order.begin(), order.end());
  return order;
}

std::vector<std::size_t> nearest_neighbor_path(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  std::vector<bool> used(n, false);
  std::vector<std::size_t> order;
  std::size_t cur = 0;
  used[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t j = 1; j < n; ++j) {
      if (used[j]) continue;
      if (best == n || d[cur][j] < d[cur][best]) best = j;
    }
    used[best] = true;
    order.push_back(best);
    cur = best;
  }
  return order;
}

std::vector<std::size_t> two_opt(const DistanceMatrix& d, std::vector<std::size_t> order) {
  double current = path_cost(d, order);
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i), order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        const double candidate = path_cost(d, order);
        if (candidate < current - 1e-12) {
          current = candidate;
          improved = true;
        } else {
          std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i), order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        }
      }
    }
  }
  return order;
}

ScanRoute tsp_order(const std::vector<Cell>& points, Cell start, const OccupancyGrid& grid) {
  ScanRoute route;
  std::vector<Cell> nodes{start};
  std::vector<double> from_start{0.0};
  for (const Cell p : points) {
    if (std::find(nodes.begin(), nodes.end(), p) != nodes.end()) continue;
    const auto leg = astar(grid, start, p);
    if (!leg) {
      route.dropped.push_back(p);
      continue;
    }
    nodes.push_back(p);
    from_start.push_back(leg->length);
  }
  if (nodes.size() == 1) return route;

  const std::size_t n = nodes.size();
  constexpr double unreachable = 1e9;
  DistanceMatrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 1; j < n; ++j) d[0][j] = d[j][0] = from_start[j];
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto leg = astar(grid, nodes[i], nodes[j]);
      d[i][j] = d[j][i] = leg ? leg->length : unreachable;
    }
  }

  std::vector<std::size_t> order;
  if (n - 1 <= kHeldKarpLimit) {
    order = held_karp_path(d);
    route.optimal = true;
  } else {
    order = two_opt(d, nearest_neighbor_path(d));
  }
  for (const std::size_t idx : order) route.points.push_back(nodes[idx]);
  route.total_length = path_cost(d, order);
  return route;
}

}  // namespace zonenav
