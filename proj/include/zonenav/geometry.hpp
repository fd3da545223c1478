#pragma once

// Grid cells, headings and world-frame helpers shared by every module.
//
// Frame convention: row index grows downward (south), column index grows
// east. World x = (c + 0.5) * cell_size, world y = (r + 0.5) * cell_size.
// Headings are counter-clockwise degrees with 0 = east and 90 = north.

#include <compare>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

namespace zonenav {

struct Cell {
  int r = 0;
  int c = 0;

  auto operator<=>(const Cell&) const = default;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;
};

inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline int manhattan(Cell a, Cell b) { return std::abs(a.r - b.r) + std::abs(a.c - b.c); }

inline Vec2 cell_center(Cell cell, double cell_size) {
  return {(cell.c + 0.5) * cell_size, (cell.r + 0.5) * cell_size};
}

inline Cell world_to_cell(Vec2 p, double cell_size) {
  return {static_cast<int>(std::floor(p.y / cell_size)), static_cast<int>(std::floor(p.x / cell_size))};
}

enum class Heading : int { East = 0, North = 90, West = 180, South = 270 };

inline int degrees(Heading h) { return static_cast<int>(h); }

/// Parses 0/90/180/270 (any multiple of 360 offset); returns false otherwise.
bool heading_from_degrees(int deg, Heading& out);

inline Heading rotate_left(Heading h) { return static_cast<Heading>((degrees(h) + 90) % 360); }
inline Heading rotate_right(Heading h) { return static_cast<Heading>((degrees(h) + 270) % 360); }

inline Cell step_toward(Cell cell, Heading h) {
  switch (h) {
    case Heading::East: return {cell.r, cell.c + 1};
    case Heading::North: return {cell.r - 1, cell.c};
    case Heading::West: return {cell.r, cell.c - 1};
    case Heading::South: return {cell.r + 1, cell.c};
  }
  return cell;
}

/// Heading that moves `from` onto the 4-adjacent cell `to`.
Heading heading_between(Cell from, Cell to);

/// Inclusive Bresenham line from a to b.
std::vector<Cell> bresenham(Cell a, Cell b);

/// Canonical cell ray used for every line-of-sight query: traced from the
/// lexicographically smaller endpoint so that LoS is symmetric.
inline std::vector<Cell> sight_line(Cell a, Cell b) { return a <= b ? bresenham(a, b) : bresenham(b, a); }

inline constexpr Cell kFourNeighbors[4] = {{0, 1}, {-1, 0}, {0, -1}, {1, 0}};

std::string to_string(Cell cell);

}  // namespace zonenav
