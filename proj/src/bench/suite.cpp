#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "zonenav/bench.hpp"

namespace zonenav {

std::vector<NamedScene> default_suite_scenes(const Vocabulary& vocab) {
  std::vector<NamedScene> out;
  const auto& categories = vocab.categories();
  const std::size_t n_categories = std::min<std::size_t>(4, categories.size());
  for (std::size_t i = 0; i < n_categories; ++i) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      GenSpec spec;
      spec.target_category = categories[i];
      out.push_back({categories[i] + "_" + std::to_string(seed), generate_scene(seed, spec, vocab)});
    }
  }
  return out;
}

namespace {

struct Job {
  Method method;
  std::size_t scene;
  std::uint64_t seed;
};

std::string fixed(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

BenchReport run_suite(const SuiteSpec& spec, const EpisodeSink& sink,
                      const std::function<StepObserver(const NamedScene&, Method, std::uint64_t)>& observers) {
  std::vector<Job> jobs;
  for (const Method m : spec.methods) {
    for (std::size_t s = 0; s < spec.scenes.size(); ++s) {
      for (const std::uint64_t seed : spec.seeds) jobs.push_back({m, s, seed});
    }
  }

  std::vector<EpisodeRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      const NamedScene& named = spec.scenes[job.scene];
      EpisodeRow& row = rows[i];
      row.method = job.method;
      row.scene = named.name;
      row.seed = job.seed;
      EpisodeTrace trace;
      try {
        EpisodeConfig cfg = spec.base;
        cfg.seed = job.seed;
        cfg.start = episode_start(named.scene, job.seed);
        const StepObserver observer = observers ? observers(named, job.method, job.seed) : StepObserver{};
        EpisodeOutcome out = run_baseline(job.method, named.scene, cfg, observer);
        row.result = out.result;
        row.inferences = out.trace.inference_count;
        row.fallbacks = out.trace.fallback_count;
        trace = std::move(out.trace);
      } catch (const std::exception& e) {
        row.result = EpisodeResult{};
        trace.method = to_string(job.method);
        trace.outcome = std::string("error: ") + e.what();
      }
      if (sink) {
        const std::lock_guard<std::mutex> lock(sink_mutex);
        sink(row, trace);
      }
    }
  };

  const int n_workers = std::max(1, std::min<int>(spec.workers, static_cast<int>(jobs.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::sort(rows.begin(), rows.end(), [](const EpisodeRow& a, const EpisodeRow& b) {
    return std::tie(a.method, a.scene, a.seed) < std::tie(b.method, b.scene, b.seed);
  });

  BenchReport report;
  report.rows = std::move(rows);
  report.backend = spec.base.backend ? spec.base.backend->name() : "none";
  report.seeds = spec.seeds;
  report.max_steps = spec.base.max_steps;
  for (const Method m : spec.methods) {
    std::vector<EpisodeResult> results;
    MethodSummary summary;
    for (const auto& row : report.rows) {
      if (row.method != m) continue;
      results.push_back(row.result);
      summary.fallbacks += row.fallbacks;
    }
    if (results.empty()) continue;
    summary.sr = compute_sr(results);
    summary.spl = compute_spl(results);
    summary.td = compute_td(results);
    summary.n_episodes = static_cast<int>(results.size());
    report.summary[m] = summary;
  }
  return report;
}

std::string report_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "method,scene,seed,success,path_length,shortest_length,steps,inferences,fallbacks\n";
  for (const auto& row : report.rows) {
    out << to_string(row.method) << ',' << row.scene << ',' << row.seed << ',' << (row.result.success ? 1 : 0) << ','
        << fixed(row.result.path_length) << ',' << fixed(row.result.shortest_length) << ',' << row.result.steps << ','
        << row.inferences << ',' << row.fallbacks << '\n';
  }
  return out.str();
}

std::string report_json(const BenchReport& report) {
  nlohmann::ordered_json doc;
  doc["backend"] = report.backend;
  doc["max_steps"] = report.max_steps;
  doc["seeds"] = report.seeds;
  auto methods = nlohmann::ordered_json::object();
  for (const auto& [method, s] : report.summary) {
    methods[to_string(method)] = {{"sr", s.sr}, {"spl", s.spl}, {"td", s.td}, {"episodes", s.n_episodes},
                                  {"fallbacks", s.fallbacks}};
  }
  doc["methods"] = std::move(methods);
  return doc.dump(2) + "\n";
}

void write_report(const BenchReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "report.csv", std::ios::binary) << report_csv(report);
  std::ofstream(dir / "report.json", std::ios::binary) << report_json(report);
}

}  // namespace zonenav
