#include <sstream>

#include "json.hpp"
#include "zonenav/agent.hpp"
#include "zonenav/bench.hpp"
#include "zonenav/errors.hpp"

namespace zonenav {

namespace {

using ojson = nlohmann::ordered_json;

ojson cell_json(const std::optional<Cell>& cell) {
  if (!cell) return nullptr;
  return ojson::array({cell->r, cell->c});
}

std::optional<Cell> cell_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return Cell{j.at(0).get<int>(), j.at(1).get<int>()};
}

std::optional<Mode> mode_from(const std::string& name) {
  for (const Mode m : {Mode::LocalExploration, Mode::InterZoneNavigation, Mode::ObjectVerification}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::optional<Action> action_from(const std::string& name) {
  for (const Action a : {Action::MoveAhead, Action::RotateLeft, Action::RotateRight, Action::Stop}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

}  // namespace

std::string trace_to_jsonl(const EpisodeTrace& trace) {
  std::ostringstream out;
  for (const auto& rec : trace.steps) {
    ojson j;
    j["step"] = rec.step;
    j["mode"] = rec.mode ? ojson(to_string(*rec.mode)) : ojson();
    j["pose"] = {{"r", rec.pose.cell.r}, {"c", rec.pose.cell.c}, {"heading", degrees(rec.pose.heading)}};
    j["action"] = to_string(rec.action);
    j["collided"] = rec.collided;
    j["frontier"] = cell_json(rec.frontier);
    j["goal"] = cell_json(rec.goal);
    auto inferences = ojson::array();
    for (const auto& ev : rec.inferences) {
      inferences.push_back({{"zone", ev.zone_id},
                            {"prompt", ev.prompt},
                            {"category", ev.category},
                            {"p_target", ev.p_target},
                            {"backend", ev.backend}});
    }
    j["inferences"] = std::move(inferences);
    j["fallbacks"] = rec.fallbacks;
    j["unknown"] = rec.unknown_cells;
    if (rec.zones) j["zones"] = ojson::parse(zone_graph_to_json(*rec.zones));
    if (rec.terminal) j["terminal"] = *rec.terminal;
    out << j.dump() << '\n';
  }
  return out.str();
}

EpisodeTrace parse_trace_jsonl(const std::string& text) {
  EpisodeTrace trace;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      StepRecord rec;
      rec.step = j.at("step").get<int>();
      if (!j.at("mode").is_null()) {
        rec.mode = mode_from(j["mode"].get<std::string>());
        if (!rec.mode) throw ParseError("unknown mode '" + j["mode"].get<std::string>() + "'");
      }
      const auto& pose = j.at("pose");
      rec.pose.cell = {pose.at("r").get<int>(), pose.at("c").get<int>()};
      if (!heading_from_degrees(pose.at("heading").get<int>(), rec.pose.heading)) {
        throw ParseError("bad heading");
      }
      const auto action = action_from(j.at("action").get<std::string>());
      if (!action) throw ParseError("unknown action '" + j["action"].get<std::string>() + "'");
      rec.action = *action;
      rec.collided = j.value("collided", false);
      rec.frontier = cell_from(j.value("frontier", nlohmann::json()));
      rec.goal = cell_from(j.value("goal", nlohmann::json()));
      for (const auto& ev : j.value("inferences", nlohmann::json::array())) {
        rec.inferences.push_back({ev.at("zone").get<int>(), ev.at("prompt").get<std::string>(),
                                  ev.at("category").get<std::string>(), ev.at("p_target").get<double>(),
                                  ev.at("backend").get<std::string>()});
      }
      rec.fallbacks = j.value("fallbacks", std::vector<std::string>{});
      rec.unknown_cells = j.value("unknown", -1);
      if (j.contains("zones")) rec.zones = zone_graph_from_json(j["zones"].dump());
      if (j.contains("terminal")) rec.terminal = j["terminal"].get<std::string>();
      trace.inference_count += static_cast<int>(rec.inferences.size());
      trace.fallback_count += static_cast<int>(rec.fallbacks.size());
      trace.steps.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("trace line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!trace.steps.empty() && trace.steps.back().terminal) trace.outcome = *trace.steps.back().terminal;
  return trace;
}

}  // namespace zonenav
