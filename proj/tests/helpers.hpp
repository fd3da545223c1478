#pragma once

#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

#include "zonenav/agent.hpp"
#include "zonenav/bench.hpp"

#ifndef ZONENAV_FIXTURES
#define ZONENAV_FIXTURES "tests/fixtures"
#endif
#ifndef ZONENAV_DATA_DIR
#define ZONENAV_DATA_DIR "data"
#endif

namespace helpers {

inline std::string fixture(const std::string& name) { return std::string(ZONENAV_FIXTURES) + "/" + name; }
inline std::string data(const std::string& name) { return std::string(ZONENAV_DATA_DIR) + "/" + name; }

struct Placed {
  std::string label;
  zonenav::Cell cell;
  double size = 1.0;
};

// '#' wall, anything else floor.
inline zonenav::Scene scene_from_rows(const std::vector<std::string>& rows, std::initializer_list<Placed> objects,
                                      zonenav::Cell start, const std::string& target,
                                      zonenav::Heading heading = zonenav::Heading::East) {
  zonenav::Scene s;
  s.height = static_cast<int>(rows.size());
  s.width = static_cast<int>(rows.front().size());
  for (const auto& row : rows) {
    for (const char ch : row) s.walls.push_back(ch == '#' ? 1 : 0);
  }
  for (const auto& o : objects) s.objects.push_back({o.label, zonenav::cell_center(o.cell, s.cell_size), o.size});
  s.agent_start = {start, heading};
  s.target_label = target;
  return s;
}

inline std::vector<std::string> open_room(int h, int w) {
  std::vector<std::string> rows;
  for (int r = 0; r < h; ++r) {
    std::string row;
    for (int c = 0; c < w; ++c) row += (r == 0 || c == 0 || r == h - 1 || c == w - 1) ? '#' : '.';
    rows.push_back(row);
  }
  return rows;
}

inline std::shared_ptr<const zonenav::EmbeddingTable> bundled_embeddings() {
  static const auto table =
      std::make_shared<const zonenav::EmbeddingTable>(zonenav::EmbeddingTable::load(data("embeddings.json")));
  return table;
}

inline std::shared_ptr<const zonenav::PriorsTable> bundled_priors() {
  static const auto table = std::make_shared<const zonenav::PriorsTable>(zonenav::PriorsTable::load(data("priors.json")));
  return table;
}

inline zonenav::EpisodeConfig table_config() {
  zonenav::EpisodeConfig cfg;
  cfg.embeddings = bundled_embeddings();
  cfg.backend = std::make_shared<zonenav::TableBackend>(bundled_priors());
  return cfg;
}

}  // namespace helpers
