#include <algorithm>
#include <queue>
#include <tuple>

#include "zonenav/planning.hpp"

namespace zonenav {

std::optional<Path> astar(const OccupancyGrid& grid, Cell start, Cell goal) {
  if (!grid.is_free(start) || !grid.is_free(goal)) return std::nullopt;
  if (start == goal) return Path{{start}, 0.0};

  const int w = grid.width();
  const auto n = static_cast<std::size_t>(w) * grid.height();
  auto idx = [w](Cell c) { return static_cast<std::size_t>(c.r) * w + c.c; };

  std::vector<int> g(n, -1);
  std::vector<int> parent(n, -1);
  std::vector<std::uint8_t> closed(n, 0);
  // (f, h, r, c); std::greater makes it a min-heap with lexicographic ties.
  using Entry = std::tuple<int, int, int, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  g[idx(start)] = 0;
  const int h0 = manhattan(start, goal);
  open.emplace(h0, h0, start.r, start.c);

  while (!open.empty()) {
    const auto [f, h, r, c] = open.top();
    open.pop();
    const Cell cur{r, c};
    const std::size_t ci = idx(cur);
    if (closed[ci]) continue;
    closed[ci] = 1;
    if (cur == goal) break;
    for (const Cell d : kFourNeighbors) {
      const Cell next{r + d.r, c + d.c};
      if (!grid.is_free(next)) continue;
      const std::size_t ni = idx(next);
      if (closed[ni]) continue;
      const int ng = g[ci] + 1;
      if (g[ni] >= 0 && g[ni] <= ng) continue;
      g[ni] = ng;
      parent[ni] = static_cast<int>(ci);
      const int nh = manhattan(next, goal);
      open.emplace(ng + nh, nh, next.r, next.c);
    }
  }

  if (!closed[idx(goal)]) return std::nullopt;
  Path path;
  for (int at = static_cast<int>(idx(goal)); at >= 0; at = parent[static_cast<std::size_t>(at)]) {
    path.cells.push_back({at / w, at % w});
  }
  std::reverse(path.cells.begin(), path.cells.end());
  path.length = static_cast<double>(path.cells.size() - 1) * grid.cell_size();
  return path;
}

std::optional<Cell> nearest_free_matching(const OccupancyGrid& grid, Cell start,
                                          const std::function<bool(Cell)>& accept) {
  if (!grid.is_free(start)) return std::nullopt;
  const int w = grid.width();
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(w) * grid.height(), 0);
  std::vector<Cell> layer{start};
  seen[static_cast<std::size_t>(start.r) * w + start.c] = 1;
  while (!layer.empty()) {
    std::sort(layer.begin(), layer.end());
    for (const Cell cell : layer) {
      if (accept(cell)) return cell;
    }
    std::vector<Cell> next_layer;
    for (const Cell cell : layer) {
      for (const Cell d : kFourNeighbors) {
        const Cell next{cell.r + d.r, cell.c + d.c};
        if (!grid.is_free(next)) continue;
        auto& mark = seen[static_cast<std::size_t>(next.r) * w + next.c];
        if (mark) continue;
        mark = 1;
        next_layer.push_back(next);
      }
    }
    layer = std::move(next_layer);
  }
  return std::nullopt;
}

}  // namespace zonenav
