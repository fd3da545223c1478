#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "zonenav/errors.hpp"

using namespace zonenav;
using helpers::scene_from_rows;

namespace {

OccupancyGrid grid_from(const std::vector<std::string>& rows) {
  OccupancyGrid g(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) {
      const char ch = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (ch == '.') g.observe({r, c}, CellState::Free);
      if (ch == '#') g.observe({r, c}, CellState::Occupied);
    }
  }
  return g;
}

OccupancyGrid random_grid(std::mt19937& rng, int w, int h) {
  OccupancyGrid g(w, h);
  std::uniform_int_distribution<int> pick(0, 9);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const int v = pick(rng);
      if (v < 5) g.observe({r, c}, CellState::Free);
      else if (v < 7) g.observe({r, c}, CellState::Occupied);
    }
  }
  return g;
}

Vec2 at(Cell c) { return cell_center(c, kDefaultCellSize); }

}  // namespace

TEST_SUITE("occupancy grid") {
  TEST_CASE("observe only writes unknown cells") {
    OccupancyGrid g(4, 3);
    CHECK(g.unknown_count() == 12);
    CHECK(g.observe({1, 1}, CellState::Free));
    CHECK_FALSE(g.observe({1, 1}, CellState::Occupied));
    CHECK(g.at({1, 1}) == CellState::Free);
    CHECK_FALSE(g.observe({5, 5}, CellState::Free));
    CHECK(g.at({5, 5}) == CellState::Occupied);
    CHECK(g.unknown_count() == 11);
  }

  TEST_CASE("scan of an open room from the centre") {
    const Scene s = scene_from_rows(helpers::open_room(7, 7), {}, {3, 3}, "x");
    OccupancyGrid g(7, 7);
    integrate_scan(g, s.agent_start, s);
    for (int r = 1; r <= 5; ++r)
      for (int c = 1; c <= 5; ++c) CHECK(g.at({r, c}) == CellState::Free);
    for (int i = 1; i <= 5; ++i) {
      CHECK(g.at({0, i}) == CellState::Occupied);
      CHECK(g.at({6, i}) == CellState::Occupied);
      CHECK(g.at({i, 0}) == CellState::Occupied);
      CHECK(g.at({i, 6}) == CellState::Occupied);
    }
    CHECK(integrate_scan(g, s.agent_start, s) == 0);
  }

  TEST_CASE("wall one cell ahead hides what is behind") {
    const Scene s = scene_from_rows({".#...", ".#...", ".#..."}, {}, {1, 0}, "x");
    OccupancyGrid g(5, 3);
    integrate_scan(g, s.agent_start, s);
    CHECK(g.at({1, 1}) == CellState::Occupied);
    for (int r = 0; r < 3; ++r)
      for (int c = 2; c < 5; ++c) CHECK(g.is_unknown({r, c}));
  }

  TEST_CASE("scan range is respected") {
    const Scene s = scene_from_rows({std::string(40, '.')}, {}, {0, 0}, "x");
    OccupancyGrid g(40, 1);
    integrate_scan(g, s.agent_start, s, 1.0);
    CHECK(g.is_free({0, 4}));
    CHECK(g.is_unknown({0, 5}));
  }
}

TEST_SUITE("frontiers") {
  TEST_CASE("fully known grid has none") {
    CHECK(detect_frontiers(grid_from({"...", ".#.", "..."})).empty());
  }

  TEST_CASE("a lone free cell is below the size filter") {
    CHECK(detect_frontiers(grid_from({"???", "?.?", "???"})).empty());
    CHECK(detect_frontiers(grid_from({"???", "?.?", "???"}), 1).size() == 1);
  }

  TEST_CASE("corridor with two open ends") {
    const auto g = grid_from({"??########??", "??........??", "??........??", "??........??", "??########??"});
    const auto fs = detect_frontiers(g);
    REQUIRE(fs.size() == 2);
    const auto brute = oracle::frontier_clusters(g, kMinFrontierSize);
    REQUIRE(brute.size() == 2);
    CHECK(fs[0].cells == brute[0]);
    CHECK(fs[1].cells == brute[1]);
    CHECK(fs[0].id == Cell{1, 2});
    CHECK(fs[0].centroid == Cell{2, 2});
  }

  TEST_CASE("clusters match brute force on random grids") {
    std::mt19937 rng(11);
    for (int i = 0; i < 50; ++i) {
      const auto g = random_grid(rng, 20, 15);
      for (const int min_size : {1, 3}) {
        const auto fs = detect_frontiers(g, min_size);
        const auto brute = oracle::frontier_clusters(g, min_size);
        REQUIRE(fs.size() == brute.size());
        for (std::size_t k = 0; k < fs.size(); ++k) {
          CHECK(fs[k].cells == brute[k]);
          CHECK(fs[k].id == brute[k].front());
          CHECK(std::binary_search(brute[k].begin(), brute[k].end(), fs[k].centroid));
        }
      }
    }
  }

  TEST_CASE("text export") {
    const auto g = grid_from({"?..", ".#."});
    CHECK(grid_to_text(g, detect_frontiers(g, 1), Cell{1, 2}) == "?F.\nF#A\n");
  }
}

TEST_SUITE("zone graph") {
  TEST_CASE("jaccard") {
    CHECK(jaccard({"a", "b"}, {"b", "c"}) == doctest::Approx(1.0 / 3.0));
    CHECK(jaccard({}, {}) == 0.0);
    CHECK(jaccard({"a"}, {"a"}) == 1.0);
  }

  TEST_CASE("first and repeated observations") {
    ZoneGraph g;
    const auto first = g.assign_zone({{1.0, 1.0}, {"stove", "kettle"}});
    CHECK(first.zone_id == 0);
    CHECK(first.is_new);
    CHECK(first.context_reset);
    const auto again = g.assign_zone({{1.0, 1.0}, {"stove", "kettle"}});
    CHECK(again.zone_id == 0);
    CHECK_FALSE(again.is_new);
    CHECK_FALSE(again.context_reset);
  }

  TEST_CASE("distant disjoint observation spawns a linked node") {
    ZoneGraph g;
    g.assign_zone({{1.0, 1.0}, {"stove", "kettle"}});
    const auto out = g.assign_zone({{6.0, 1.0}, {"bed", "pillow"}});
    CHECK(out.zone_id == 1);
    CHECK(out.is_new);
    CHECK(out.context_reset);
    CHECK(g.edges().count({0, 1}) == 1);
    // Returning to the first zone is a context reset but not a new node.
    const auto back = g.assign_zone({{1.2, 1.0}, {"stove"}});
    CHECK(back.zone_id == 0);
    CHECK(back.context_reset);
    CHECK_FALSE(back.is_new);
  }

  TEST_CASE("new labels in the same zone reset context") {
    ZoneGraph g;
    g.assign_zone({{1.0, 1.0}, {"stove"}});
    const auto out = g.assign_zone({{1.5, 1.0}, {"stove", "sink"}});
    CHECK(out.zone_id == 0);
    CHECK(out.context_reset);
    CHECK(g.node(0).centroid.x == doctest::Approx(1.25));
  }

  TEST_CASE("semantics update") {
    ZoneGraph g;
    g.assign_zone({{1.0, 1.0}, {"stove"}});
    CHECK(g.node(0).p_target == kDefaultPTarget);
    g.update_node_semantics(0, {"Kitchen Area", 0.9});
    CHECK(g.node(0).zone_category == "Kitchen Area");
    CHECK(g.node(0).p_target == 0.9);
    g.update_node_semantics(0, {"Bedroom", 0.1});
    CHECK(g.node(0).zone_category == "Bedroom");
    CHECK(g.node(0).p_target == 0.1);
    CHECK_THROWS_AS(g.update_node_semantics(0, {"Kitchen", 1.2}), std::invalid_argument);
    CHECK(g.node(0).p_target == 0.1);
    CHECK_THROWS_AS(g.update_node_semantics(3, {"Kitchen", 0.5}), std::out_of_range);
  }

  TEST_CASE("random observation streams keep the graph connected") {
    std::mt19937 rng(5);
    const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f", "g", "h"};
    std::uniform_real_distribution<double> pos(0.0, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
      ZoneGraph g;
      for (int i = 0; i < 40; ++i) {
        std::set<std::string> labels;
        const int n = 1 + static_cast<int>(rng() % 3);
        for (int k = 0; k < n; ++k) labels.insert(vocab[rng() % vocab.size()]);
        const auto out = g.assign_zone({{pos(rng), pos(rng)}, labels});
        CHECK(g.current() == out.zone_id);
        if (out.is_new) CHECK(out.context_reset);
      }
      CHECK(g.is_connected());
    }
  }

  TEST_CASE("json round trip") {
    ZoneGraph g;
    g.assign_zone({{1.0, 1.0}, {"stove", "kettle"}});
    g.assign_zone({{6.0, 2.0}, {"bed"}});
    g.update_node_semantics(1, {"Bedroom", 0.25});
    const std::string text = zone_graph_to_json(g);
    const ZoneGraph back = zone_graph_from_json(text);
    CHECK(zone_graph_to_json(back) == text);
    CHECK(back.current() == 1);
    CHECK(back.edges() == g.edges());
    CHECK_THROWS_AS(zone_graph_from_json("{\"nodes\": 3}"), ParseError);
  }
}

TEST_SUITE("frontier ownership") {
  // Open 3-row strip 40 cells long; an Unknown notch above row 0 forms the frontier.
  OccupancyGrid strip(int notch_c) {
    OccupancyGrid g(40, 4);
    for (int r = 1; r < 4; ++r)
      for (int c = 0; c < 40; ++c) g.observe({r, c}, CellState::Free);
    for (int c = 0; c < 40; ++c) {
      if (c < notch_c - 1 || c > notch_c + 1) g.observe({0, c}, CellState::Occupied);
    }
    return g;
  }

  TEST_CASE("single node owns a nearby frontier") {
    const auto g = strip(8);
    const auto fs = detect_frontiers(g);
    REQUIRE(fs.size() == 1);
    ZoneGraph zones;
    CHECK_FALSE(frontier_zone(zones, fs[0], g).has_value());
    zones.assign_zone({at({2, 6}), {"stove"}});
    CHECK(frontier_zone(zones, fs[0], g) == 0);
  }

  TEST_CASE("nearer node wins") {
    const auto g = strip(8);
    const auto fs = detect_frontiers(g);
    ZoneGraph zones;
    zones.assign_zone({at({1, 36}), {"bed"}});    // 8 m away
    zones.assign_zone({at({1, 4}), {"stove"}});   // 1 m away
    CHECK(frontier_zone(zones, fs[0], g) == 1);
  }

  TEST_CASE("unexplored wing falls back to the default prior") {
    const auto g = strip(20);
    const auto fs = detect_frontiers(g);
    ZoneGraph zones;
    zones.assign_zone({at({1, 4}), {"stove"}});
    zones.assign_zone({at({1, 36}), {"bed"}});
    const auto owner = frontier_zone(zones, fs[0], g);
    CHECK_FALSE(owner.has_value());
    CHECK(zone_p_target(zones, owner) == 0.5);
  }

  TEST_CASE("anchor snaps to the nearest free cell") {
    const auto g = grid_from({"....", ".##.", ".##.", "...."});
    ZoneNode node;
    node.centroid = at({1, 1});
    const auto a = zone_anchor(node, g);
    REQUIRE(a.has_value());
    CHECK(g.is_free(*a));
    CHECK(manhattan(*a, {1, 1}) == 1);
  }
}
