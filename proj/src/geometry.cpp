#include "zonenav/geometry.hpp"

namespace zonenav {

bool heading_from_degrees(int deg, Heading& out) {
  const int norm = ((deg % 360) + 360) % 360;
  if (norm % 90 != 0) return false;
  out = static_cast<Heading>(norm);
  return true;
}

Heading heading_between(Cell from, Cell to) {
  if (to.c > from.c) return Heading::East;
  if (to.c < from.c) return Heading::West;
  if (to.r < from.r) return Heading::North;
  return Heading::South;
}

std::vector<Cell> bresenham(Cell a, Cell b) {
  std::vector<Cell> out;
  const int dc = std::abs(b.c - a.c);
  const int dr = -std::abs(b.r - a.r);
  const int sc = a.c < b.c ? 1 : -1;
  const int sr = a.r < b.r ? 1 : -1;
  int err = dc + dr;
  Cell cur = a;
  out.reserve(static_cast<std::size_t>(std::max(dc, -dr)) + 1);
  while (true) {
    out.push_back(cur);
    if (cur == b) break;
    const int e2 = 2 * err;
    if (e2 >= dr) {
      err += dr;
      cur.c += sc;
    }
    if (e2 <= dc) {
      err += dc;
      cur.r += sr;
    }
  }
  return out;
}

std::string to_string(Cell cell) { return "(" + std::to_string(cell.r) + "," + std::to_string(cell.c) + ")"; }

}  // namespace zonenav
