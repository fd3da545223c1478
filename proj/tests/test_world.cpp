#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "zonenav/errors.hpp"

using namespace zonenav;
using helpers::scene_from_rows;

TEST_CASE("minimal 3x3 scene loads") {
  const std::string text = R"({"width":3,"height":3,"cell_size":0.25,"cells":["...","...","..."],
    "objects":[{"label":"kettle","x":0.625,"y":0.625,"size":0.6}],"zones_gt":[],
    "agent_start":{"r":0,"c":0,"heading":0},"target":"kettle"})";
  const Scene s = parse_scene(text);
  CHECK(s.objects.size() == 1);
  CHECK(s.floor_count() == 9);
}

TEST_CASE("agent_start on a wall is rejected") {
  const std::string text = R"({"width":3,"height":3,"cell_size":0.25,"cells":["#..","...","..."],
    "objects":[{"label":"kettle","x":0.625,"y":0.625,"size":0.6}],"zones_gt":[],
    "agent_start":{"r":0,"c":0,"heading":0},"target":"kettle"})";
  try {
    parse_scene(text);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("agent_start not on Floor") != std::string::npos);
  }
}

TEST_CASE("malformed scene json is a parse error") {
  CHECK_THROWS_AS(parse_scene("{\"width\": 3,"), ParseError);
  CHECK_THROWS_AS(load_scene("/nonexistent/scene.json"), ParseError);
}

TEST_CASE("bundled kitchen fixture") {
  const Scene s = load_scene(helpers::fixture("kitchen_small.scene"));
  CHECK(s.zones_gt.size() == 2);
  CHECK(s.objects.size() == 8);
  CHECK(s.target_label == "kettle");
  CHECK_NOTHROW(validate_labels(s, Vocabulary::load(helpers::data("vocabulary.txt"))));
}

TEST_CASE("scene json round trip") {
  const Scene s = load_scene(helpers::fixture("kitchen_small.scene"));
  const std::string once = scene_to_json(s);
  CHECK(scene_to_json(parse_scene(once)) == once);
}

TEST_CASE("unreachable target fails validation") {
  Scene s = scene_from_rows({".#.", ".#.", ".#."}, {{"kettle", {1, 2}}}, {1, 0}, "kettle");
  CHECK_THROWS_AS(validate_scene(s), ValidationError);
}

TEST_CASE("vocabulary parsing") {
  const Vocabulary v = Vocabulary::parse("# header\nstove Kitchen 1.2\nbed Bedroom 1.5\n\nsofa LivingRoom 1\n");
  CHECK(v.entries().size() == 3);
  CHECK(v.categories() == std::vector<std::string>{"Kitchen", "Bedroom", "LivingRoom"});
  CHECK(v.find("bed")->category == "Bedroom");
  CHECK(v.find("lamp") == nullptr);
  CHECK_THROWS_AS(Vocabulary::parse("stove Kitchen\n"), ParseError);
  CHECK_THROWS_AS(Vocabulary::parse("stove Kitchen 1\nstove Bedroom 1\n"), ParseError);
}

TEST_SUITE("generator") {
  const Vocabulary vocab = Vocabulary::load(helpers::data("vocabulary.txt"));

  TEST_CASE("same seed gives identical bytes") {
    GenSpec spec;
    CHECK(scene_to_json(generate_scene(7, spec, vocab)) == scene_to_json(generate_scene(7, spec, vocab)));
    CHECK(scene_to_json(generate_scene(7, spec, vocab)) != scene_to_json(generate_scene(8, spec, vocab)));
  }

  TEST_CASE("default spec: 4 disjoint zones, 20 objects, valid") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Scene s = generate_scene(seed, GenSpec{}, vocab);
      CHECK(s.zones_gt.size() == 4);
      CHECK(s.objects.size() == 20);
      std::set<Cell> seen;
      std::size_t total = 0;
      for (const auto& z : s.zones_gt) {
        seen.insert(z.cells.begin(), z.cells.end());
        total += z.cells.size();
      }
      CHECK(seen.size() == total);
      CHECK_NOTHROW(validate_scene(s));
      CHECK_NOTHROW(validate_labels(s, vocab));
    }
  }

  TEST_CASE("target category is honoured") {
    GenSpec spec;
    spec.target_category = "Bathroom";
    const Scene s = generate_scene(3, spec, vocab);
    CHECK(vocab.find(s.target_label)->category == "Bathroom");
  }

  TEST_CASE("infeasible sizing") {
    GenSpec spec;
    spec.n_zones = 100;
    spec.width = spec.height = 10;
    CHECK_THROWS_AS(generate_scene(0, spec, vocab), SizingError);
  }
}

TEST_SUITE("simulator") {
  const Scene room = scene_from_rows(helpers::open_room(7, 7), {{"kettle", {1, 1}}}, {3, 3}, "kettle");

  TEST_CASE("move ahead into free space") {
    const auto out = step_agent(room, {{3, 3}, Heading::East}, Action::MoveAhead);
    CHECK_FALSE(out.collided);
    CHECK(out.pose.cell == Cell{3, 4});
    CHECK(distance(out.pose.position(room.cell_size), cell_center({3, 3}, room.cell_size)) == doctest::Approx(0.25));
  }

  TEST_CASE("move into a wall") {
    const AgentPose pose{{3, 5}, Heading::East};
    const auto out = step_agent(room, pose, Action::MoveAhead);
    CHECK(out.collided);
    CHECK(out.pose == pose);
  }

  TEST_CASE("rotations") {
    CHECK(step_agent(room, {{3, 3}, Heading::East}, Action::RotateLeft).pose.heading == Heading::North);
    CHECK(step_agent(room, {{3, 3}, Heading::East}, Action::RotateRight).pose.heading == Heading::South);
    CHECK(step_agent(room, {{3, 3}, Heading::South}, Action::RotateLeft).pose.heading == Heading::East);
  }

  TEST_CASE("object behind a wall is not detected") {
    const Scene s = scene_from_rows({".....", "..#..", "....."}, {{"kettle", {1, 4}}, {"stove", {0, 1}}}, {1, 0},
                                    "kettle");
    const auto dets = panoramic_scan(s, s.agent_start);
    REQUIRE(dets.size() == 1);
    CHECK(dets[0].label == "stove");
  }

  TEST_CASE("apparent pixels at the filter boundary") {
    CHECK(apparent_pixels(1.0, 1.5) == 400);
    // 1.5 m = 6 cells along a row.
    const Scene s = scene_from_rows({"........"}, {{"sofa", {0, 7}, 1.0}}, {0, 1}, "sofa");
    const auto dets = panoramic_scan(s, s.agent_start);
    REQUIRE(dets.size() == 1);
    CHECK(dets[0].distance == doctest::Approx(1.5));
    CHECK(dets[0].apparent_pixels == 400);
  }

  TEST_CASE("empty scene scans empty") {
    const Scene s = scene_from_rows(helpers::open_room(5, 5), {}, {2, 2}, "kettle");
    CHECK(panoramic_scan(s, s.agent_start).empty());
  }

  TEST_CASE("detections sorted by distance") {
    const Scene s = scene_from_rows(helpers::open_room(9, 9), {{"a", {1, 1}}, {"b", {4, 5}}, {"c", {7, 7}}}, {4, 4},
                                    "a");
    const auto dets = panoramic_scan(s, s.agent_start);
    REQUIRE(dets.size() == 3);
    CHECK(dets[0].label == "b");
    CHECK(dets[0].distance <= dets[1].distance);
    CHECK(dets[1].distance <= dets[2].distance);
  }

  TEST_CASE("oracle shortest path") {
    const Scene adjacent = scene_from_rows({"....."}, {{"kettle", {0, 2}}}, {0, 1}, "kettle");
    CHECK(*oracle_shortest_path(adjacent, {0, 1}, "kettle") == 0.0);

    // Target 10 cells down a corridor; success radius covers the last 4.
    const Scene corridor = scene_from_rows({"#############", "#...........#", "#############"}, {{"kettle", {1, 11}}},
                                           {1, 1}, "kettle");
    CHECK(*oracle_shortest_path(corridor, {1, 1}, "kettle") == doctest::Approx(1.5));

    const Scene walled = scene_from_rows({"..#...", "..#...", "..#..."}, {{"kettle", {1, 5}}}, {1, 0}, "kettle");
    CHECK_FALSE(oracle_shortest_path(walled, {1, 0}, "kettle").has_value());
  }

  TEST_CASE("check_success distance and sight") {
    // dr=2, dc=3 cells: 0.901 m.
    const Scene open = scene_from_rows(helpers::open_room(8, 8), {{"kettle", {4, 5}}}, {2, 2}, "kettle");
    CHECK(check_success(open, {{2, 2}, Heading::East}));
    // dr=2, dc=4 cells: 1.118 m.
    const Scene far = scene_from_rows(helpers::open_room(8, 8), {{"kettle", {4, 6}}}, {2, 2}, "kettle");
    CHECK_FALSE(check_success(far, {{2, 2}, Heading::East}));
    const Scene blocked = scene_from_rows({"########", "#......#", "#......#", "#.####.#", "#......#", "#......#",
                                           "########"},
                                          {{"kettle", {4, 4}}}, {2, 2}, "kettle");
    CHECK(distance(cell_center({2, 2}, 0.25), cell_center({4, 4}, 0.25)) < 1.0);
    CHECK_FALSE(check_success(blocked, {{2, 2}, Heading::East}));
  }

  TEST_CASE("line of sight is symmetric") {
    const Scene s = scene_from_rows({"......", "..#...", "....#.", "......"}, {}, {0, 0}, "x");
    for (int r1 = 0; r1 < 4; ++r1)
      for (int c1 = 0; c1 < 6; ++c1)
        for (int r2 = 0; r2 < 4; ++r2)
          for (int c2 = 0; c2 < 6; ++c2) CHECK(line_of_sight(s, {r1, c1}, {r2, c2}) == line_of_sight(s, {r2, c2}, {r1, c1}));
  }
}
