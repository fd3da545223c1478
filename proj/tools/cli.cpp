#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "zonenav/bench.hpp"
#include "zonenav/errors.hpp"

#ifndef ZONENAV_DATA_DIR
#define ZONENAV_DATA_DIR "data"
#endif

namespace zonenav::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
  std::string out = ".";
  std::uint64_t seed = 0;
  int workers = 1;
  std::string backend = "table";
  std::string endpoint = "http://127.0.0.1:8000";
  int timeout_ms = 2000;
  std::string priors = std::string(ZONENAV_DATA_DIR) + "/priors.json";
  std::string embeddings = std::string(ZONENAV_DATA_DIR) + "/embeddings.json";
  std::string vocab = std::string(ZONENAV_DATA_DIR) + "/vocabulary.txt";
  int max_steps = 500;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
  app->add_option("--seed", c.seed, "Seed (generator seed or episode seed)")->capture_default_str();
  app->add_option("--workers", c.workers, "Worker threads for suite runs")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--backend", c.backend, "Zone inference backend")
      ->capture_default_str()
      ->check(CLI::IsMember({"table", "remote", "uniform"}));
  app->add_option("--endpoint", c.endpoint, "Inference service URL (remote backend)")->capture_default_str();
  app->add_option("--timeout-ms", c.timeout_ms, "Remote request timeout in milliseconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--priors", c.priors, "Co-occurrence priors table (JSON)")->capture_default_str();
  app->add_option("--embeddings", c.embeddings, "Label embedding table (JSON)")->capture_default_str();
  app->add_option("--vocab", c.vocab, "Object vocabulary file")->capture_default_str();
  app->add_option("--max-steps", c.max_steps, "Action budget per episode")->capture_default_str()->check(CLI::PositiveNumber);
}

EpisodeConfig base_config(const Common& c) {
  EpisodeConfig cfg;
  cfg.max_steps = c.max_steps;
  cfg.embeddings = std::make_shared<const EmbeddingTable>(EmbeddingTable::load(c.embeddings));
  if (c.backend == "uniform") {
    cfg.backend = std::make_shared<UniformBackend>();
  } else {
    auto priors = std::make_shared<const PriorsTable>(PriorsTable::load(c.priors));
    if (c.backend == "remote") {
      cfg.backend = std::make_shared<RemoteBackend>(c.endpoint, std::chrono::milliseconds(c.timeout_ms), priors);
    } else {
      cfg.backend = std::make_shared<TableBackend>(priors);
    }
  }
  return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string result_json(const std::string& method, const EpisodeOutcome& o) {
  nlohmann::ordered_json j;
  j["method"] = method;
  j["outcome"] = o.trace.outcome;
  j["success"] = o.result.success;
  j["steps"] = o.result.steps;
  j["path_length"] = o.result.path_length;
  j["shortest_length"] = std::isinf(o.result.shortest_length) ? nlohmann::ordered_json() : nlohmann::ordered_json(o.result.shortest_length);
  const EpisodeResult r[] = {o.result};
  j["spl"] = compute_spl(r);
  j["inferences"] = o.trace.inference_count;
  j["fallbacks"] = o.trace.fallback_count;
  return j.dump(2) + "\n";
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zone-guided object search in generated indoor scenes", "zonenav"};
  app.require_subcommand(1);

  Common common;

  auto* scene_cmd = app.add_subcommand("scene", "Scene utilities");
  scene_cmd->require_subcommand(1);
  auto* gen = scene_cmd->add_subcommand("gen", "Generate a scene file");
  GenSpec spec;
  std::string category;
  add_common(gen, common);
  gen->add_option("--zones", spec.n_zones, "Number of zones")->capture_default_str();
  gen->add_option("--objects", spec.objects_per_zone, "Objects per zone")->capture_default_str();
  gen->add_option("--width", spec.width, "Grid width in cells")->capture_default_str();
  gen->add_option("--height", spec.height, "Grid height in cells")->capture_default_str();
  gen->add_option("--category", category, "Category the target is drawn from (default: seed picks)");

  auto* run_cmd = app.add_subcommand("run", "Run one episode; exit 0 on success, 1 on failure");
  std::string scene_path;
  std::string method_name = "proposed";
  add_common(run_cmd, common);
  run_cmd->add_option("--scene", scene_path, "Scene file")->required();
  run_cmd->add_option("--method", method_name, "One of: " + method_names())->capture_default_str();

  auto* bench_cmd = app.add_subcommand("bench", "Run the benchmark suite and write report.csv/report.json");
  int n_seeds = 5;
  std::string methods_list;
  std::string scene_dir;
  bool write_traces = false;
  add_common(bench_cmd, common);
  bench_cmd->add_option("--seeds", n_seeds, "Episode seeds per scene (0..N-1)")->capture_default_str()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--methods", methods_list, "Comma-separated subset of: " + method_names());
  bench_cmd->add_option("--scene-dir", scene_dir, "Directory of scene files (default: generated suite)");
  bench_cmd->add_flag("--traces", write_traces, "Also write every episode trace under <out>/traces");

  auto* render_cmd = app.add_subcommand("render", "Render the agent's map at one step of a trace");
  std::string trace_path;
  int step = 0;
  int cell_px = 6;
  add_common(render_cmd, common);
  render_cmd->add_option("--scene", scene_path, "Scene file")->required();
  render_cmd->add_option("--trace", trace_path, "Trace file (JSONL)")->required();
  render_cmd->add_option("--step", step, "Step to render")->required();
  render_cmd->add_option("--cell-px", cell_px, "Pixels per cell")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      if (!category.empty()) spec.target_category = category;
      const Vocabulary vocab = Vocabulary::load(common.vocab);
      const Scene scene = generate_scene(common.seed, spec, vocab);
      const fs::path path = fs::path(common.out) / ("scene_" + std::to_string(common.seed) + ".json");
      write_file(path, scene_to_json(scene));
      out << path.string() << "\n";
      return kExitOk;
    }

    if (run_cmd->parsed()) {
      const auto method = parse_method(method_name);
      if (!method) {
        err << "unknown method '" << method_name << "' (expected one of: " << method_names() << ")\n";
        return kExitUsage;
      }
      const Scene scene = load_scene(scene_path);
      EpisodeConfig cfg = base_config(common);
      cfg.seed = common.seed;
      cfg.start = episode_start(scene, common.seed);
      const EpisodeOutcome o = run_baseline(*method, scene, cfg);
      write_file(fs::path(common.out) / "trace.jsonl", trace_to_jsonl(o.trace));
      write_file(fs::path(common.out) / "result.json", result_json(method_name, o));
      char line[200];
      std::snprintf(line, sizeof line, "%s: %s after %d steps, path %.2f m, inferences %d, fallbacks %d\n",
                    method_name.c_str(), o.trace.outcome.c_str(), o.result.steps, o.result.path_length,
                    o.trace.inference_count, o.trace.fallback_count);
      out << line;
      return o.result.success ? kExitOk : kExitEpisodeFailed;
    }

    if (bench_cmd->parsed()) {
      SuiteSpec suite;
      if (methods_list.empty()) {
        suite.methods.assign(std::begin(kAllMethods), std::end(kAllMethods));
      } else {
        for (const auto& name : split_list(methods_list)) {
          const auto m = parse_method(name);
          if (!m) {
            err << "unknown method '" << name << "' (expected one of: " << method_names() << ")\n";
            return kExitUsage;
          }
          suite.methods.push_back(*m);
        }
      }
      if (scene_dir.empty()) {
        suite.scenes = default_suite_scenes(Vocabulary::load(common.vocab));
      } else {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(scene_dir)) {
          if (entry.path().extension() == ".json" || entry.path().extension() == ".scene") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw std::runtime_error("no scene files in " + scene_dir);
        for (const auto& f : files) suite.scenes.push_back({f.stem().string(), load_scene(f)});
      }
      for (int s = 0; s < n_seeds; ++s) suite.seeds.push_back(common.seed + static_cast<std::uint64_t>(s));
      suite.base = base_config(common);
      suite.workers = common.workers;

      const fs::path out_dir(common.out);
      EpisodeSink sink;
      if (write_traces) {
        sink = [&](const EpisodeRow& row, const EpisodeTrace& trace) {
          write_file(out_dir / "traces" / (to_string(row.method) + "_" + row.scene + "_" + std::to_string(row.seed) + ".jsonl"),
                     trace_to_jsonl(trace));
        };
      }
      const BenchReport report = run_suite(suite, sink);
      write_report(report, out_dir);
      for (const auto& [m, s] : report.summary) {
        char line[200];
        std::snprintf(line, sizeof line, "%-18s SR %.3f  SPL %.3f  TD %.2f m  (%d episodes, %d fallbacks)\n",
                      to_string(m).c_str(), s.sr, s.spl, s.td, s.n_episodes, s.fallbacks);
        out << line;
      }
      return kExitOk;
    }

    if (render_cmd->parsed()) {
      const Scene scene = load_scene(scene_path);
      const EpisodeTrace trace = parse_trace_jsonl(read_file(trace_path));
      const Snapshot snap = render_snapshot(scene, trace, step, cell_px);
      write_snapshot(snap, common.out, step);
      out << snap.text;
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace zonenav::cli
