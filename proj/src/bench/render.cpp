#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "zonenav/bench.hpp"

namespace zonenav {

namespace {

struct Rgb {
  unsigned char r, g, b;
};

Rgb color_of(char glyph) {
  switch (glyph) {
    case '.': return {235, 235, 235};
    case '#': return {40, 40, 40};
    case 'F': return {60, 120, 255};
    case '*': return {255, 160, 0};
    case 'Z': return {0, 170, 0};
    case 'T': return {220, 0, 0};
    case 'A': return {200, 0, 200};
    default: return {128, 128, 128};
  }
}

}  // namespace

std::string Snapshot::ppm() const {
  std::string out = "P6\n" + std::to_string(width_px) + " " + std::to_string(height_px) + "\n255\n";
  out.append(rgb.begin(), rgb.end());
  return out;
}

Snapshot render_snapshot(const Scene& scene, const EpisodeTrace& trace, int step, int cell_px) {
  if (cell_px < 1) throw std::invalid_argument("cell_px must be positive");
  std::size_t last = trace.steps.size();
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    if (trace.steps[i].step == step) last = i;
  }
  if (last == trace.steps.size()) throw std::out_of_range("step " + std::to_string(step) + " is not in the trace");

  OccupancyGrid grid(scene.width, scene.height, scene.cell_size);
  std::optional<ZoneGraph> zones;
  std::optional<Cell> scanned;
  for (std::size_t i = 0; i <= last; ++i) {
    const StepRecord& rec = trace.steps[i];
    if (!scanned || *scanned != rec.pose.cell) {
      integrate_scan(grid, rec.pose, scene);
      scanned = rec.pose.cell;
    }
    if (rec.zones) zones = rec.zones;
    if (i < last && rec.collided) grid.observe(step_toward(rec.pose.cell, rec.pose.heading), CellState::Occupied);
  }
  const Cell agent = trace.steps[last].pose.cell;

  const std::string base = grid_to_text(grid, detect_frontiers(grid), std::nullopt);
  std::vector<std::string> rows;
  for (std::size_t pos = 0; pos < base.size();) {
    const std::size_t eol = base.find('\n', pos);
    rows.push_back(base.substr(pos, eol - pos));
    pos = eol + 1;
  }
  auto put = [&](Cell c, char glyph) {
    if (scene.in_bounds(c)) rows[static_cast<std::size_t>(c.r)][static_cast<std::size_t>(c.c)] = glyph;
  };
  for (std::size_t i = 0; i < last; ++i) put(trace.steps[i].pose.cell, '*');
  if (zones) {
    for (const auto& node : zones->nodes()) put(world_to_cell(node.centroid, scene.cell_size), 'Z');
  }
  for (const auto& obj : scene.objects) {
    if (obj.label == scene.target_label) put(scene.object_cell(obj), 'T');
  }
  put(agent, 'A');

  Snapshot snap;
  snap.width_px = scene.width * cell_px;
  snap.height_px = scene.height * cell_px;
  snap.rgb.resize(static_cast<std::size_t>(snap.width_px) * snap.height_px * 3);
  for (int y = 0; y < snap.height_px; ++y) {
    for (int x = 0; x < snap.width_px; ++x) {
      const Rgb c = color_of(rows[static_cast<std::size_t>(y / cell_px)][static_cast<std::size_t>(x / cell_px)]);
      const std::size_t at = (static_cast<std::size_t>(y) * snap.width_px + x) * 3;
      snap.rgb[at] = c.r;
      snap.rgb[at + 1] = c.g;
      snap.rgb[at + 2] = c.b;
    }
  }

  std::string text = "step " + std::to_string(step) + "  target " + scene.target_label + "\n";
  for (const auto& row : rows) text += row + "\n";
  text += "legend: ? unknown  . free  # occupied  F frontier  * path  Z zone  T target  A agent\n";
  if (zones) {
    for (const auto& node : zones->nodes()) {
      char line[160];
      std::snprintf(line, sizeof line, "zone %d  (%.2f, %.2f)  %s  p=%.3f\n", node.id, node.centroid.x,
                    node.centroid.y, node.zone_category.value_or("?").c_str(), node.p_target);
      text += line;
    }
  }
  snap.text = std::move(text);
  return snap;
}

void write_snapshot(const Snapshot& snapshot, const std::filesystem::path& dir, int step) {
  std::filesystem::create_directories(dir);
  const std::string stem = "step_" + std::to_string(step);
  std::ofstream(dir / (stem + ".txt"), std::ios::binary) << snapshot.text;
  std::ofstream(dir / (stem + ".ppm"), std::ios::binary) << snapshot.ppm();
}

}  // namespace zonenav
