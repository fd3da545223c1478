#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "zonenav/mapping.hpp"

namespace zonenav {

OccupancyGrid::OccupancyGrid(int width, int height, double cell_size)
    : width_(width),
      height_(height),
      cell_size_(cell_size),
      unknown_(width * height),
      cells_(static_cast<std::size_t>(width) * height, CellState::Unknown) {}

bool OccupancyGrid::is_frontier_cell(Cell cell) const {
  if (!is_free(cell)) return false;
  for (const Cell d : kFourNeighbors) {
    if (is_unknown({cell.r + d.r, cell.c + d.c})) return true;
  }
  return false;
}

bool OccupancyGrid::observe(Cell cell, CellState state) {
  if (!in_bounds(cell) || state == CellState::Unknown) return false;
  auto& slot = cells_[index(cell)];
  if (slot != CellState::Unknown) return false;
  slot = state;
  --unknown_;
  return true;
}

namespace {

struct RayDir {
  double dx, dy;
};

const std::array<RayDir, 360>& ray_table() {
  static const std::array<RayDir, 360> table = [] {
    std::array<RayDir, 360> t{};
    for (int deg = 0; deg < 360; ++deg) {
      const double rad = deg * std::numbers::pi / 180.0;
      double dx = std::cos(rad);
      double dy = -std::sin(rad);  // rows grow southward
      if (std::abs(dx) < 1e-12) dx = 0.0;
      if (std::abs(dy) < 1e-12) dy = 0.0;
      t[static_cast<std::size_t>(deg)] = {dx, dy};
    }
    return t;
  }();
  return table;
}

}  // namespace

int integrate_scan(OccupancyGrid& grid, const AgentPose& pose, const Scene& scene, double range) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  int changed = grid.observe(pose.cell, CellState::Free) ? 1 : 0;
  const double max_t = range / scene.cell_size;
  const double x0 = pose.cell.c + 0.5;
  const double y0 = pose.cell.r + 0.5;

  for (const RayDir dir : ray_table()) {
    Cell cur = pose.cell;
    const int step_c = dir.dx > 0 ? 1 : -1;
    const int step_r = dir.dy > 0 ? 1 : -1;
    double next_x = dir.dx == 0.0 ? inf : (dir.dx > 0 ? (cur.c + 1 - x0) / dir.dx : (x0 - cur.c) / -dir.dx);
    double next_y = dir.dy == 0.0 ? inf : (dir.dy > 0 ? (cur.r + 1 - y0) / dir.dy : (y0 - cur.r) / -dir.dy);
    const double delta_x = dir.dx == 0.0 ? inf : 1.0 / std::abs(dir.dx);
    const double delta_y = dir.dy == 0.0 ? inf : 1.0 / std::abs(dir.dy);

    while (true) {
      double t;
      if (next_x <= next_y) {
        t = next_x;
        cur.c += step_c;
        next_x += delta_x;
      } else {
        t = next_y;
        cur.r += step_r;
        next_y += delta_y;
      }
      if (t > max_t || !scene.in_bounds(cur)) break;
      if (scene.is_wall(cur)) {
        changed += grid.observe(cur, CellState::Occupied) ? 1 : 0;
        break;
      }
      changed += grid.observe(cur, CellState::Free) ? 1 : 0;
    }
  }
  return changed;
}

std::vector<Frontier> detect_frontiers(const OccupancyGrid& grid, int min_size) {
  const int w = grid.width();
  const int h = grid.height();
  std::vector<std::uint8_t> is_frontier(static_cast<std::size_t>(w) * h, 0);
  std::vector<std::uint8_t> seen(is_frontier.size(), 0);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) is_frontier[static_cast<std::size_t>(r) * w + c] = grid.is_frontier_cell({r, c}) ? 1 : 0;

  std::vector<Frontier> out;
  std::vector<Cell> stack;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * w + c;
      if (!is_frontier[idx] || seen[idx]) continue;
      Frontier f;
      stack.assign(1, Cell{r, c});
      seen[idx] = 1;
      while (!stack.empty()) {
        const Cell cur = stack.back();
        stack.pop_back();
        f.cells.push_back(cur);
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const Cell next{cur.r + dr, cur.c + dc};
            if ((dr == 0 && dc == 0) || !grid.in_bounds(next)) continue;
            const std::size_t nidx = static_cast<std::size_t>(next.r) * w + next.c;
            if (!is_frontier[nidx] || seen[nidx]) continue;
            seen[nidx] = 1;
            stack.push_back(next);
          }
        }
      }
      if (static_cast<int>(f.cells.size()) < min_size) continue;
      std::sort(f.cells.begin(), f.cells.end());
      f.id = f.cells.front();
      double mr = 0.0, mc = 0.0;
      for (const Cell cell : f.cells) {
        mr += cell.r;
        mc += cell.c;
      }
      mr /= static_cast<double>(f.cells.size());
      mc /= static_cast<double>(f.cells.size());
      double best = std::numeric_limits<double>::infinity();
      for (const Cell cell : f.cells) {
        const double d2 = (cell.r - mr) * (cell.r - mr) + (cell.c - mc) * (cell.c - mc);
        if (d2 < best) {
          best = d2;
          f.centroid = cell;
        }
      }
      out.push_back(std::move(f));
    }
  }
  std::sort(out.begin(), out.end(), [](const Frontier& a, const Frontier& b) { return a.id < b.id; });
  return out;
}

std::string grid_to_text(const OccupancyGrid& grid, const std::vector<Frontier>& frontiers, std::optional<Cell> agent) {
  std::string out;
  out.reserve(static_cast<std::size_t>(grid.width() + 1) * grid.height());
  std::vector<std::string> rows(static_cast<std::size_t>(grid.height()), std::string(static_cast<std::size_t>(grid.width()), '?'));
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      const CellState s = grid.at({r, c});
      rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          s == CellState::Free ? '.' : s == CellState::Occupied ? '#' : '?';
    }
  }
  for (const auto& f : frontiers)
    for (const Cell cell : f.cells) rows[static_cast<std::size_t>(cell.r)][static_cast<std::size_t>(cell.c)] = 'F';
  if (agent && grid.in_bounds(*agent)) rows[static_cast<std::size_t>(agent->r)][static_cast<std::size_t>(agent->c)] = 'A';
  for (const auto& row : rows) {
    out += row;
    out += '\n';
  }
  return out;
}

}  // namespace zonenav
