#include <algorithm>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include "zonenav/errors.hpp"
#include "zonenav/world.hpp"

namespace zonenav {

namespace {

constexpr int kMinRoomSide = 5;
constexpr double kExtraDoorRate = 0.3;
constexpr int kFurnitureArea = 60;  // one occluding block per this many interior cells

struct Rect {
  int r0, c0, r1, c1;  // interior, inclusive
  int rows() const { return r1 - r0 + 1; }
  int cols() const { return c1 - c0 + 1; }
  int area() const { return rows() * cols(); }
  bool contains(Cell cell) const { return cell.r >= r0 && cell.r <= r1 && cell.c >= c0 && cell.c <= c1; }
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  int between(int lo, int hi) { return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo + 1))); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<Rect> partition(const Rect& outer, int n, Rng& rng) {
  std::vector<Rect> rooms{outer};
  while (static_cast<int>(rooms.size()) < n) {
    // Largest splittable room, ties to the lower index.
    int pick = -1;
    for (int i = 0; i < static_cast<int>(rooms.size()); ++i) {
      const Rect& r = rooms[static_cast<std::size_t>(i)];
      if (std::max(r.rows(), r.cols()) < 2 * kMinRoomSide + 1) continue;
      if (pick < 0 || r.area() > rooms[static_cast<std::size_t>(pick)].area()) pick = i;
    }
    if (pick < 0) {
      throw SizingError("cannot fit " + std::to_string(n) + " rooms of side >= " + std::to_string(kMinRoomSide) +
                        " on the grid");
    }
    const Rect room = rooms[static_cast<std::size_t>(pick)];
    const bool split_cols = room.cols() >= room.rows();
    const int len = split_cols ? room.cols() : room.rows();
    // Wall offset within the room, kept near the middle.
    const int lo = std::max(kMinRoomSide, static_cast<int>(len * 0.35));
    const int hi = std::min(len - kMinRoomSide - 1, static_cast<int>(len * 0.65));
    const int off = lo <= hi ? rng.between(lo, hi) : kMinRoomSide;
    Rect a = room, b = room;
    if (split_cols) {
      a.c1 = room.c0 + off - 1;
      b.c0 = room.c0 + off + 1;
    } else {
      a.r1 = room.r0 + off - 1;
      b.r0 = room.r0 + off + 1;
    }
    rooms[static_cast<std::size_t>(pick)] = a;
    rooms.push_back(b);
  }
  return rooms;
}

struct Adjacency {
  int a, b;
  std::vector<Cell> doors;  // candidate wall cells joining the two rooms
};

std::vector<Adjacency> adjacencies(const std::vector<Rect>& rooms) {
  std::vector<Adjacency> out;
  for (int i = 0; i < static_cast<int>(rooms.size()); ++i) {
    for (int j = i + 1; j < static_cast<int>(rooms.size()); ++j) {
      const Rect& p = rooms[static_cast<std::size_t>(i)];
      const Rect& q = rooms[static_cast<std::size_t>(j)];
      Adjacency adj{i, j, {}};
      if (q.c0 == p.c1 + 2 || p.c0 == q.c1 + 2) {
        const int wall = q.c0 == p.c1 + 2 ? p.c1 + 1 : q.c1 + 1;
        for (int r = std::max(p.r0, q.r0); r <= std::min(p.r1, q.r1); ++r) adj.doors.push_back({r, wall});
      } else if (q.r0 == p.r1 + 2 || p.r0 == q.r1 + 2) {
        const int wall = q.r0 == p.r1 + 2 ? p.r1 + 1 : q.r1 + 1;
        for (int c = std::max(p.c0, q.c0); c <= std::min(p.c1, q.c1); ++c) adj.doors.push_back({wall, c});
      }
      // Keep doors off the wall junctions.
      if (adj.doors.size() > 2) {
        adj.doors.erase(adj.doors.begin());
        adj.doors.pop_back();
      }
      if (!adj.doors.empty()) out.push_back(std::move(adj));
    }
  }
  return out;
}

int find_root(const std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
  return x;
}

bool room_connected(const Scene& scene, const Rect& room) {
  Cell first{-1, -1};
  int total = 0;
  for (int r = room.r0; r <= room.r1; ++r)
    for (int c = room.c0; c <= room.c1; ++c)
      if (scene.is_floor({r, c})) {
        if (first.r < 0) first = {r, c};
        ++total;
      }
  if (total == 0) return false;
  std::set<Cell> seen{first};
  std::queue<Cell> open;
  open.push(first);
  while (!open.empty()) {
    const Cell cur = open.front();
    open.pop();
    for (const Cell d : kFourNeighbors) {
      const Cell next{cur.r + d.r, cur.c + d.c};
      if (!room.contains(next) || !scene.is_floor(next) || seen.count(next)) continue;
      seen.insert(next);
      open.push(next);
    }
  }
  return static_cast<int>(seen.size()) == total;
}

void place_furniture(Scene& scene, const Rect& room, const std::set<Cell>& keep_clear, Rng& rng) {
  const int blocks = std::max(1, room.area() / kFurnitureArea);
  int placed = 0;
  for (int attempt = 0; attempt < blocks * 12 && placed < blocks; ++attempt) {
    const int h = rng.between(1, 3);
    const int w = rng.between(1, 3);
    if (h * w < 2) continue;
    if (h > room.rows() - 2 || w > room.cols() - 2) continue;
    const int r0 = rng.between(room.r0, room.r1 - h + 1);
    const int c0 = rng.between(room.c0, room.c1 - w + 1);
    std::vector<Cell> cells;
    bool ok = true;
    for (int r = r0; r < r0 + h && ok; ++r)
      for (int c = c0; c < c0 + w && ok; ++c) {
        if (keep_clear.count({r, c}) || scene.is_wall({r, c})) ok = false;
        cells.push_back({r, c});
      }
    if (!ok) continue;
    for (const Cell cell : cells) scene.walls[scene.index(cell)] = 1;
    if (!room_connected(scene, room)) {
      for (const Cell cell : cells) scene.walls[scene.index(cell)] = 0;
      continue;
    }
    ++placed;
  }
}

}  // namespace

Scene generate_scene(std::uint64_t seed, const GenSpec& spec, const Vocabulary& vocab) {
  if (spec.n_zones < 1) throw SizingError("n_zones must be >= 1");
  if (spec.objects_per_zone < 1) throw SizingError("objects_per_zone must be >= 1");
  if (spec.width < kMinRoomSide + 2 || spec.height < kMinRoomSide + 2) {
    throw SizingError("grid smaller than a single room");
  }
  const auto& categories = vocab.categories();
  if (spec.target_category &&
      std::find(categories.begin(), categories.end(), *spec.target_category) == categories.end()) {
    throw SizingError("target category '" + *spec.target_category + "' not in vocabulary");
  }

  Rng rng(seed ^ (spec.target_category ? fnv1a(*spec.target_category) : 0));

  Scene scene;
  scene.width = spec.width;
  scene.height = spec.height;
  scene.cell_size = spec.cell_size;
  scene.walls.assign(static_cast<std::size_t>(spec.width) * spec.height, 1);

  const Rect outer{1, 1, spec.height - 2, spec.width - 2};
  const std::vector<Rect> rooms = partition(outer, spec.n_zones, rng);
  for (const Rect& room : rooms) {
    if (room.area() < spec.objects_per_zone * 3 + 1) {
      throw SizingError("rooms too small for " + std::to_string(spec.objects_per_zone) + " objects each");
    }
    for (int r = room.r0; r <= room.r1; ++r)
      for (int c = room.c0; c <= room.c1; ++c) scene.walls[scene.index({r, c})] = 0;
  }

  // Doors: a random spanning tree over room adjacency plus a few loops.
  std::vector<Adjacency> adj = adjacencies(rooms);
  rng.shuffle(adj);
  std::vector<int> parent(rooms.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<Cell> doors;
  for (const auto& a : adj) {
    const int ra = find_root(parent, a.a);
    const int rb = find_root(parent, a.b);
    const bool tree_edge = ra != rb;
    if (!tree_edge && rng.unit() >= kExtraDoorRate) continue;
    if (tree_edge) parent[static_cast<std::size_t>(ra)] = rb;
    const Cell door = a.doors[rng.index(a.doors.size())];
    scene.walls[scene.index(door)] = 0;
    doors.push_back(door);
  }

  std::set<Cell> keep_clear;
  for (const Cell door : doors) {
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) keep_clear.insert({door.r + dr, door.c + dc});
  }
  for (const Rect& room : rooms) place_furniture(scene, room, keep_clear, rng);

  // Zone categories: every category once (shuffled), extras drawn at random.
  std::vector<std::string> cats = categories;
  rng.shuffle(cats);
  std::vector<std::string> zone_cat(rooms.size());
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    zone_cat[i] = i < cats.size() ? cats[i] : categories[rng.index(categories.size())];
  }
  const std::string target_cat = spec.target_category ? *spec.target_category : categories[rng.index(categories.size())];
  std::size_t target_zone = rooms.size();
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    if (zone_cat[i] == target_cat) {
      target_zone = i;
      break;
    }
  }
  if (target_zone == rooms.size()) {
    target_zone = rng.index(rooms.size());
    zone_cat[target_zone] = target_cat;
  }
  const auto target_choices = vocab.in_category(target_cat);
  scene.target_label = target_choices[rng.index(target_choices.size())]->label;

  // Objects, placed against walls or furniture where possible.
  std::set<Cell> used;
  for (std::size_t z = 0; z < rooms.size(); ++z) {
    const Rect& room = rooms[z];
    ZoneAnnotation ann{static_cast<int>(z), zone_cat[z], {}};
    std::vector<Cell> against, open_cells;
    for (int r = room.r0; r <= room.r1; ++r)
      for (int c = room.c0; c <= room.c1; ++c) {
        const Cell cell{r, c};
        if (!scene.is_floor(cell)) continue;
        ann.cells.push_back(cell);
        if (keep_clear.count(cell)) continue;
        bool touches = false;
        for (const Cell d : kFourNeighbors) touches = touches || scene.is_wall({r + d.r, c + d.c});
        (touches ? against : open_cells).push_back(cell);
      }
    scene.zones_gt.push_back(std::move(ann));

    const auto own = vocab.in_category(zone_cat[z]);
    std::vector<const VocabEntry*> other;
    for (const auto& e : vocab.entries()) {
      if (e.category != zone_cat[z]) other.push_back(&e);
    }
    std::vector<std::size_t> zone_objects;
    for (int k = 0; k < spec.objects_per_zone; ++k) {
      const bool in_cat = other.empty() || rng.unit() < kInCategoryRate;
      const VocabEntry* entry = in_cat ? own[rng.index(own.size())] : other[rng.index(other.size())];
      auto& pool = !against.empty() ? against : open_cells;
      if (pool.empty()) throw SizingError("no free cell left for objects in zone " + std::to_string(z));
      const std::size_t pick = rng.index(pool.size());
      const Cell cell = pool[pick];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
      used.insert(cell);
      zone_objects.push_back(scene.objects.size());
      scene.objects.push_back({entry->label, cell_center(cell, scene.cell_size), entry->size});
    }
    if (z == target_zone) {
      const bool present = std::any_of(zone_objects.begin(), zone_objects.end(), [&](std::size_t i) {
        return scene.objects[i].label == scene.target_label;
      });
      if (!present) {
        std::size_t slot = zone_objects.back();
        for (const std::size_t i : zone_objects) {
          if (vocab.find(scene.objects[i].label)->category != zone_cat[z]) {
            slot = i;
            break;
          }
        }
        scene.objects[slot].label = scene.target_label;
        scene.objects[slot].size = vocab.find(scene.target_label)->size;
      }
    }
  }

  // Start outside the target zone, clear of objects and doorways.
  std::vector<Cell> starts;
  for (std::size_t z = 0; z < rooms.size(); ++z) {
    if (rooms.size() > 1 && z == target_zone) continue;
    for (const Cell cell : scene.zones_gt[z].cells) {
      if (!used.count(cell) && !keep_clear.count(cell)) starts.push_back(cell);
    }
  }
  if (starts.empty()) {
    for (const Cell cell : scene.zones_gt[target_zone].cells)
      if (!used.count(cell)) starts.push_back(cell);
  }
  if (starts.empty()) throw SizingError("no free start cell");
  scene.agent_start.cell = starts[rng.index(starts.size())];
  scene.agent_start.heading = static_cast<Heading>(90 * static_cast<int>(rng.index(4)));

  validate_scene(scene);
  return scene;
}

}  // namespace zonenav
