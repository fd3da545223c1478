#include <fstream>
#include <queue>
#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"

using namespace zonenav;
using helpers::scene_from_rows;

namespace {

EpisodeResult res(bool s, double p, double l) { return {s, p, l, 0}; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("spl examples") {
    const EpisodeResult one[] = {res(true, 3.0, 3.0)};
    CHECK(compute_spl(one) == 1.0);
    const EpisodeResult fail[] = {res(false, 3.0, 3.0)};
    CHECK(compute_spl(fail) == 0.0);
    const EpisodeResult two[] = {res(true, 5.0, 4.0), res(true, 2.0, 2.0)};
    CHECK(compute_spl(two) == doctest::Approx(0.9));
    const EpisodeResult zero[] = {res(true, 0.0, 0.0)};
    CHECK(compute_spl(zero) == 1.0);
    CHECK_THROWS_AS(compute_spl(std::span<const EpisodeResult>{}), std::invalid_argument);
  }

  TEST_CASE("sr and td") {
    const EpisodeResult fails[] = {res(false, 3.0, 1.0), res(false, 5.0, 1.0)};
    CHECK(compute_sr(fails) == 0.0);
    CHECK(compute_td(fails) == 4.0);
    const EpisodeResult mixed[] = {res(true, 1.0, 1.0), res(false, 2.0, 1.0)};
    CHECK(compute_sr(mixed) == 0.5);
  }

  TEST_CASE("spl against the hand formula on random sets") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> len(0.0, 30.0);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<EpisodeResult> rs(1 + rng() % 20);
      double expect = 0.0, successes = 0.0;
      for (auto& r : rs) {
        r.success = rng() % 2;
        r.shortest_length = 0.25 + len(rng);
        r.path_length = len(rng);
        if (r.success) {
          expect += r.shortest_length / std::max(r.path_length, r.shortest_length);
          successes += 1.0;
        }
      }
      expect /= static_cast<double>(rs.size());
      CHECK(compute_spl(rs) == doctest::Approx(expect).epsilon(1e-12));
      CHECK(compute_spl(rs) <= compute_sr(rs) + 1e-12);
      CHECK(compute_sr(rs) == doctest::Approx(successes / static_cast<double>(rs.size())));
    }
  }
}

TEST_CASE("method names round trip") {
  for (const Method m : kAllMethods) CHECK(parse_method(to_string(m)) == m);
  CHECK_FALSE(parse_method("greedy").has_value());
  CHECK(method_names() == "random_walk, standard_frontier, reactive, proposed_uniform, proposed");
}

TEST_CASE("episode starts") {
  const auto vocab = Vocabulary::load(helpers::data("vocabulary.txt"));
  for (std::uint64_t gen = 0; gen < 4; ++gen) {
    const Scene s = generate_scene(gen, GenSpec{}, vocab);
    CHECK(episode_start(s, 0) == s.agent_start);
    for (std::uint64_t seed = 1; seed < 8; ++seed) {
      const AgentPose p = episode_start(s, seed);
      CHECK(p == episode_start(s, seed));
      CHECK(s.is_floor(p.cell));
      const auto d = oracle_shortest_path(s, p.cell, s.target_label);
      REQUIRE(d.has_value());
      CHECK(*d >= 2.0);
      for (const auto& z : s.zones_gt) {
        const bool holds = std::any_of(s.objects.begin(), s.objects.end(), [&](const ObjectInstance& o) {
          return o.label == s.target_label && std::find(z.cells.begin(), z.cells.end(), s.object_cell(o)) != z.cells.end();
        });
        if (holds) CHECK(std::find(z.cells.begin(), z.cells.end(), p.cell) == z.cells.end());
      }
    }
  }
}

TEST_SUITE("baselines") {
  TEST_CASE("random walk next to the target") {
    const Scene s = scene_from_rows(helpers::open_room(5, 5), {{"kettle", {1, 1}}}, {2, 3}, "kettle");
    auto cfg = helpers::table_config();
    const auto a = run_baseline(Method::RandomWalk, s, cfg);
    CHECK(a.result.success);
    CHECK(trace_to_jsonl(a.trace) == trace_to_jsonl(run_baseline(Method::RandomWalk, s, cfg).trace));
    cfg.seed = 5;
    CHECK(run_baseline(Method::RandomWalk, s, cfg).result.success);
  }

  TEST_CASE("memoryless baselines carry no modes") {
    const Scene s = load_scene(helpers::fixture("kitchen_small.scene"));
    for (const Method m : {Method::RandomWalk, Method::Reactive}) {
      const auto out = run_baseline(m, s, helpers::table_config());
      CHECK(out.trace.method == to_string(m));
      for (const auto& rec : out.trace.steps) CHECK_FALSE(rec.mode.has_value());
    }
  }

  TEST_CASE("reactive revisits the start room more than the proposed agent") {
    const Scene s = load_scene(helpers::fixture("kitchen_small.scene"));
    const auto& bedroom = s.zones_gt[1].cells;
    auto revisits = [&](const EpisodeTrace& t) {
      std::map<Cell, int> count;
      int extra = 0;
      Cell last{-1, -1};
      for (const auto& rec : t.steps) {
        if (rec.pose.cell == last) continue;
        last = rec.pose.cell;
        if (std::find(bedroom.begin(), bedroom.end(), rec.pose.cell) == bedroom.end()) continue;
        if (count[rec.pose.cell]++ > 0) ++extra;
      }
      return extra;
    };
    int reactive = 0, proposed = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto cfg = helpers::table_config();
      cfg.seed = seed;
      cfg.start = episode_start(s, seed);
      reactive += revisits(run_baseline(Method::Reactive, s, cfg).trace);
      proposed += revisits(run_baseline(Method::Proposed, s, cfg).trace);
    }
    MESSAGE("start-room revisits: reactive " << reactive << ", proposed " << proposed);
    CHECK(reactive > proposed);
  }

  TEST_CASE("uniform prior variant labels its backend") {
    const Scene s = load_scene(helpers::fixture("kitchen_small.scene"));
    const auto out = run_baseline(Method::ProposedUniformPrior, s, helpers::table_config());
    for (const auto& rec : out.trace.steps)
      for (const auto& ev : rec.inferences) CHECK(ev.p_target == 0.5);
  }
}

TEST_SUITE("suite") {
  SuiteSpec tiny(std::vector<Method> methods, std::vector<std::uint64_t> seeds) {
    SuiteSpec spec;
    spec.scenes.push_back({"kitchen_small", load_scene(helpers::fixture("kitchen_small.scene"))});
    spec.methods = std::move(methods);
    spec.seeds = std::move(seeds);
    spec.base = helpers::table_config();
    return spec;
  }

  TEST_CASE("single episode report") {
    const auto report = run_suite(tiny({Method::Proposed}, {0}));
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].scene == "kitchen_small");
    const std::string csv = report_csv(report);
    CHECK(csv.rfind("method,scene,seed,success,path_length,shortest_length,steps,inferences,fallbacks\n", 0) == 0);
    CHECK(csv.find("proposed,kitchen_small,0,1,") != std::string::npos);
    CHECK(report_json(report).find("\"backend\": \"table\"") != std::string::npos);
  }

  TEST_CASE("reports are byte-identical across runs and worker counts") {
    auto a = tiny({Method::Proposed, Method::StandardFrontier, Method::Reactive}, {0, 1, 2, 3});
    auto b = a;
    b.workers = 3;
    CHECK(report_csv(run_suite(a)) == report_csv(run_suite(b)));
    CHECK(report_json(run_suite(a)) == report_json(run_suite(b)));
  }

  TEST_CASE("sink sees every episode") {
    int calls = 0;
    run_suite(tiny({Method::RandomWalk, Method::Proposed}, {0, 1}), [&](const EpisodeRow&, const EpisodeTrace& t) {
      ++calls;
      CHECK_FALSE(t.steps.empty());
    });
    CHECK(calls == 4);
  }

  TEST_CASE("episode errors become failed rows") {
    auto spec = tiny({Method::Proposed}, {0});
    spec.base.embeddings = nullptr;
    const auto report = run_suite(spec);
    REQUIRE(report.rows.size() == 1);
    CHECK_FALSE(report.rows[0].result.success);
  }

  TEST_CASE("default suite composition") {
    const auto scenes = default_suite_scenes(Vocabulary::load(helpers::data("vocabulary.txt")));
    CHECK(scenes.size() == 20);
    std::map<std::string, int> per_category;
    const auto vocab = Vocabulary::load(helpers::data("vocabulary.txt"));
    for (const auto& s : scenes) ++per_category[vocab.find(s.scene.target_label)->category];
    CHECK(per_category.size() == 4);
    for (const auto& [cat, n] : per_category) CHECK(n == 5);
  }
}

TEST_SUITE("render") {
  struct Rendered {
    Scene scene;
    EpisodeTrace trace;
  };

  Rendered kitchen_run() {
    Rendered r{load_scene(helpers::fixture("kitchen_small.scene")), {}};
    r.trace = parse_trace_jsonl(trace_to_jsonl(run_episode(r.scene, helpers::table_config()).trace));
    return r;
  }

  TEST_CASE("step 0 is mostly unknown") {
    const auto r = kitchen_run();
    const Snapshot snap = render_snapshot(r.scene, r.trace, 0, 2);
    CHECK(snap.text.find('A') != std::string::npos);
    CHECK(snap.text.find('?') != std::string::npos);
    CHECK(snap.width_px == r.scene.width * 2);
    CHECK(snap.rgb.size() == static_cast<std::size_t>(snap.width_px * snap.height_px * 3));
    CHECK(snap.ppm().rfind("P6\n44 24\n255\n", 0) == 0);
  }

  TEST_CASE("terminal step shows the path reaching the target") {
    const auto r = kitchen_run();
    const Snapshot snap = render_snapshot(r.scene, r.trace, r.trace.steps.back().step, 1);
    CHECK(snap.text.find('*') != std::string::npos);
    CHECK(snap.text.find('T') != std::string::npos);
    CHECK(snap.text.find("zone 0") != std::string::npos);
  }

  TEST_CASE("missing step") {
    const auto r = kitchen_run();
    CHECK_THROWS_AS(render_snapshot(r.scene, r.trace, 100000, 1), std::out_of_range);
  }

  TEST_CASE("fixture trace matches the golden snapshot") {
    const Scene scene = load_scene(helpers::fixture("kitchen_small.scene"));
    const EpisodeTrace trace = parse_trace_jsonl(slurp(helpers::fixture("golden/kitchen_small_trace.jsonl")));
    const Snapshot snap = render_snapshot(scene, trace, 20, 4);
    CHECK(snap.text == slurp(helpers::fixture("golden/step_20.txt")));
    CHECK(snap.ppm() == slurp(helpers::fixture("golden/step_20.ppm")));
  }
}
