#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "json.hpp"
#include "zonenav/errors.hpp"
#include "zonenav/world.hpp"

namespace zonenav {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

std::vector<std::uint8_t> reachable_floor(const Scene& scene, Cell from) {
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(scene.width) * scene.height, 0);
  if (!scene.is_floor(from)) return seen;
  std::queue<Cell> open;
  open.push(from);
  seen[scene.index(from)] = 1;
  while (!open.empty()) {
    const Cell cur = open.front();
    open.pop();
    for (const Cell d : kFourNeighbors) {
      const Cell next{cur.r + d.r, cur.c + d.c};
      if (!scene.is_floor(next) || seen[scene.index(next)]) continue;
      seen[scene.index(next)] = 1;
      open.push(next);
    }
  }
  return seen;
}

}  // namespace

int Scene::floor_count() const {
  return static_cast<int>(std::count(walls.begin(), walls.end(), std::uint8_t{0}));
}

bool line_of_sight(const Scene& scene, Cell a, Cell b) {
  for (const Cell cell : sight_line(a, b)) {
    if (scene.is_wall(cell)) return false;
  }
  return true;
}

// ---- Vocabulary ----------------------------------------------------------

Vocabulary Vocabulary::parse(const std::string& text, const std::string& origin) {
  Vocabulary vocab;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    VocabEntry entry;
    if (!(fields >> entry.label)) continue;
    if (!(fields >> entry.category >> entry.size) || entry.size <= 0.0) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": expected `label category size` with size > 0");
    }
    if (!seen.insert(entry.label).second) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": duplicate label '" + entry.label + "'");
    }
    if (std::find(vocab.categories_.begin(), vocab.categories_.end(), entry.category) == vocab.categories_.end()) {
      vocab.categories_.push_back(entry.category);
    }
    vocab.entries_.push_back(std::move(entry));
  }
  if (vocab.entries_.empty()) throw ParseError(origin + ": vocabulary is empty");
  return vocab;
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) { return parse(read_file(path), path.string()); }

std::vector<const VocabEntry*> Vocabulary::in_category(const std::string& category) const {
  std::vector<const VocabEntry*> out;
  for (const auto& e : entries_) {
    if (e.category == category) out.push_back(&e);
  }
  return out;
}

const VocabEntry* Vocabulary::find(const std::string& label) const {
  for (const auto& e : entries_) {
    if (e.label == label) return &e;
  }
  return nullptr;
}

// ---- Scene files ---------------------------------------------------------

Scene parse_scene(const std::string& text, const std::string& origin) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ":" + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }

  Scene scene;
  try {
    scene.width = doc.at("width").get<int>();
    scene.height = doc.at("height").get<int>();
    scene.cell_size = doc.value("cell_size", kDefaultCellSize);
    if (scene.width <= 0 || scene.height <= 0) throw ValidationError(origin + ": width and height must be positive");
    if (!(scene.cell_size > 0.0)) throw ValidationError(origin + ": cell_size must be positive");

    const auto& rows = doc.at("cells");
    if (!rows.is_array() || static_cast<int>(rows.size()) != scene.height) {
      throw ValidationError(origin + ": cells must hold exactly `height` rows");
    }
    scene.walls.reserve(static_cast<std::size_t>(scene.width) * scene.height);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto row = rows[r].get<std::string>();
      if (static_cast<int>(row.size()) != scene.width) {
        throw ValidationError(origin + ": row " + std::to_string(r) + " has length " + std::to_string(row.size()) +
                              ", expected " + std::to_string(scene.width));
      }
      for (const char ch : row) {
        if (ch != '#' && ch != '.') {
          throw ValidationError(origin + ": row " + std::to_string(r) + " contains '" + std::string(1, ch) +
                                "' (only '#' and '.' allowed)");
        }
        scene.walls.push_back(ch == '#' ? 1 : 0);
      }
    }

    for (const auto& o : doc.at("objects")) {
      ObjectInstance obj;
      obj.label = o.at("label").get<std::string>();
      obj.position = {o.at("x").get<double>(), o.at("y").get<double>()};
      obj.size = o.at("size").get<double>();
      scene.objects.push_back(std::move(obj));
    }

    if (doc.contains("zones_gt")) {
      for (const auto& z : doc.at("zones_gt")) {
        ZoneAnnotation zone;
        zone.id = z.at("id").get<int>();
        zone.category = z.at("category").get<std::string>();
        for (const auto& rc : z.at("cells")) zone.cells.push_back({rc.at(0).get<int>(), rc.at(1).get<int>()});
        scene.zones_gt.push_back(std::move(zone));
      }
    }

    const auto& start = doc.at("agent_start");
    scene.agent_start.cell = {start.at("r").get<int>(), start.at("c").get<int>()};
    if (!heading_from_degrees(start.value("heading", 0), scene.agent_start.heading)) {
      throw ValidationError(origin + ": agent_start heading must be one of 0, 90, 180, 270");
    }
    scene.target_label = doc.at("target").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }

  try {
    validate_scene(scene);
  } catch (const ValidationError& e) {
    throw ValidationError(origin + ": " + e.what());
  }
  return scene;
}

Scene load_scene(const std::filesystem::path& path) { return parse_scene(read_file(path), path.string()); }

void validate_scene(const Scene& scene) {
  if (scene.walls.size() != static_cast<std::size_t>(scene.width) * scene.height) {
    throw ValidationError("cell grid size does not match width x height");
  }
  const Cell start = scene.agent_start.cell;
  if (!scene.is_floor(start)) throw ValidationError("agent_start not on Floor");

  for (const auto& obj : scene.objects) {
    if (!(obj.size > 0.0)) throw ValidationError("object '" + obj.label + "' has non-positive size");
    const Cell cell = scene.object_cell(obj);
    if (!scene.is_floor(cell)) throw ValidationError("object '" + obj.label + "' not on a Floor cell");
    if (cell == start) throw ValidationError("agent_start occupied by object '" + obj.label + "'");
  }

  std::set<Cell> claimed;
  for (const auto& zone : scene.zones_gt) {
    for (const Cell cell : zone.cells) {
      if (!scene.in_bounds(cell)) throw ValidationError("zone " + std::to_string(zone.id) + " cell out of bounds");
      if (!claimed.insert(cell).second) {
        throw ValidationError("zone cell sets overlap at " + to_string(cell));
      }
    }
  }

  if (scene.target_label.empty()) throw ValidationError("target label is empty");
  const auto reach = reachable_floor(scene, start);
  bool any = false;
  bool reachable = false;
  for (const auto& obj : scene.objects) {
    if (obj.label != scene.target_label) continue;
    any = true;
    if (reach[scene.index(scene.object_cell(obj))]) reachable = true;
  }
  if (!any) throw ValidationError("no instance of target '" + scene.target_label + "'");
  if (!reachable) throw ValidationError("target '" + scene.target_label + "' not reachable from agent_start");
}

void validate_labels(const Scene& scene, const Vocabulary& vocab) {
  for (const auto& obj : scene.objects) {
    if (!vocab.find(obj.label)) throw ValidationError("object label '" + obj.label + "' not in vocabulary");
  }
}

std::string scene_to_json(const Scene& scene) {
  ordered_json doc;
  doc["width"] = scene.width;
  doc["height"] = scene.height;
  doc["cell_size"] = scene.cell_size;
  auto rows = ordered_json::array();
  for (int r = 0; r < scene.height; ++r) {
    std::string row;
    row.reserve(static_cast<std::size_t>(scene.width));
    for (int c = 0; c < scene.width; ++c) row.push_back(scene.is_wall({r, c}) ? '#' : '.');
    rows.push_back(row);
  }
  doc["cells"] = rows;
  auto objects = ordered_json::array();
  for (const auto& obj : scene.objects) {
    objects.push_back({{"label", obj.label}, {"x", obj.position.x}, {"y", obj.position.y}, {"size", obj.size}});
  }
  doc["objects"] = objects;
  auto zones = ordered_json::array();
  for (const auto& zone : scene.zones_gt) {
    auto cells = ordered_json::array();
    for (const Cell cell : zone.cells) cells.push_back({cell.r, cell.c});
    zones.push_back({{"id", zone.id}, {"category", zone.category}, {"cells", cells}});
  }
  doc["zones_gt"] = zones;
  doc["agent_start"] = {{"r", scene.agent_start.cell.r},
                        {"c", scene.agent_start.cell.c},
                        {"heading", degrees(scene.agent_start.heading)}};
  doc["target"] = scene.target_label;
  return doc.dump(1) + "\n";
}

void save_scene(const Scene& scene, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << scene_to_json(scene);
}

}  // namespace zonenav
