#pragma once

// Brute-force references the library is checked against. Deliberately naive.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "zonenav/mapping.hpp"

namespace oracle {

using zonenav::Cell;
using zonenav::OccupancyGrid;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Plain Dijkstra with unit edge weights scaled by cell size.
inline double dijkstra(const OccupancyGrid& grid, Cell s, Cell g) {
  if (!grid.is_free(s) || !grid.is_free(g)) return kInf;
  const int w = grid.width(), h = grid.height();
  std::vector<double> dist(static_cast<std::size_t>(w * h), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[static_cast<std::size_t>(s.r * w + s.c)] = 0.0;
  pq.push({0.0, s.r * w + s.c});
  const int dr[4] = {1, -1, 0, 0}, dc[4] = {0, 0, 1, -1};
  while (!pq.empty()) {
    auto [d, i] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(i)]) continue;
    const int r = i / w, c = i % w;
    for (int k = 0; k < 4; ++k) {
      const Cell n{r + dr[k], c + dc[k]};
      if (!grid.is_free(n)) continue;
      const double nd = d + grid.cell_size();
      auto& slot = dist[static_cast<std::size_t>(n.r * w + n.c)];
      if (nd < slot) {
        slot = nd;
        pq.push({nd, n.r * w + n.c});
      }
    }
  }
  return dist[static_cast<std::size_t>(g.r * w + g.c)];
}

/// Cheapest open path from d[0] over every other node, by trying every order.
inline double brute_force_tsp(const std::vector<std::vector<double>>& d) {
  std::vector<std::size_t> perm;
  for (std::size_t i = 1; i < d.size(); ++i) perm.push_back(i);
  double best = kInf;
  do {
    double cost = 0.0;
    std::size_t at = 0;
    for (const std::size_t p : perm) {
      cost += d[at][p];
      at = p;
    }
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return perm.empty() ? 0.0 : best;
}

/// Frontier clusters recomputed from scratch: every Free cell with an
/// Unknown 4-neighbour, grouped by 8-connected flood fill.
inline std::vector<std::vector<Cell>> frontier_clusters(const OccupancyGrid& grid, int min_size) {
  auto is_frontier = [&](Cell c) {
    if (grid.at(c) != zonenav::CellState::Free) return false;
    const Cell n[4] = {{c.r + 1, c.c}, {c.r - 1, c.c}, {c.r, c.c + 1}, {c.r, c.c - 1}};
    for (const Cell x : n) {
      if (grid.in_bounds(x) && grid.at(x) == zonenav::CellState::Unknown) return true;
    }
    return false;
  };
  std::map<Cell, bool> seen;
  std::vector<std::vector<Cell>> out;
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      const Cell start{r, c};
      if (!is_frontier(start) || seen[start]) continue;
      std::vector<Cell> cluster;
      std::vector<Cell> stack{start};
      seen[start] = true;
      while (!stack.empty()) {
        const Cell cur = stack.back();
        stack.pop_back();
        cluster.push_back(cur);
        for (int a = -1; a <= 1; ++a) {
          for (int b = -1; b <= 1; ++b) {
            const Cell n{cur.r + a, cur.c + b};
            if ((a || b) && is_frontier(n) && !seen[n]) {
              seen[n] = true;
              stack.push_back(n);
            }
          }
        }
      }
      std::sort(cluster.begin(), cluster.end());
      if (static_cast<int>(cluster.size()) >= min_size) out.push_back(cluster);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Cosine similarity read straight from an embeddings file.
inline double raw_cosine(const std::string& path, const std::string& a, const std::string& b) {
  std::ifstream in(path);
  const auto doc = nlohmann::json::parse(in);
  const auto va = doc["vectors"][a].get<std::vector<double>>();
  const auto vb = doc["vectors"][b].get<std::vector<double>>();
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    dot += va[i] * vb[i];
    na += va[i] * va[i];
    nb += vb[i] * vb[i];
  }
  return dot / std::sqrt(na * nb);
}

}  // namespace oracle
