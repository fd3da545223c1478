#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "zonenav/errors.hpp"
#include "zonenav/inference.hpp"

namespace zonenav {

namespace {

void read_prob_map(const nlohmann::json& doc, const char* key, const std::string& origin,
                   std::map<std::string, std::map<std::string, double>>& out) {
  for (const auto& [label, per_cat] : doc.at(key).items()) {
    for (const auto& [cat, value] : per_cat.items()) {
      const double p = value.get<double>();
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError(origin + ": " + key + "[" + label + "][" + cat + "] outside [0, 1]");
      }
      out[label][cat] = p;
    }
  }
}

double lookup(const std::map<std::string, std::map<std::string, double>>& table, const std::string& label,
              const std::string& category) {
  const auto row = table.find(label);
  if (row == table.end()) return 0.0;
  const auto cell = row->second.find(category);
  return cell == row->second.end() ? 0.0 : cell->second;
}

}  // namespace

PriorsTable PriorsTable::parse(const std::string& text, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  PriorsTable table;
  try {
    table.categories_ = doc.at("categories").get<std::vector<std::string>>();
    read_prob_map(doc, "p_label", origin, table.p_label_);
    read_prob_map(doc, "p_target", origin, table.p_target_);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }
  if (table.categories_.empty()) throw ValidationError(origin + ": no categories");
  std::sort(table.categories_.begin(), table.categories_.end());
  table.categories_.erase(std::unique(table.categories_.begin(), table.categories_.end()), table.categories_.end());
  return table;
}

PriorsTable PriorsTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

double PriorsTable::p_label(const std::string& label, const std::string& category) const {
  return lookup(p_label_, label, category);
}

double PriorsTable::p_target(const std::string& target, const std::string& category) const {
  return lookup(p_target_, target, category);
}

std::string verbalize(const std::set<std::string>& labels, const std::string& target) {
  if (labels.empty()) throw std::invalid_argument("cannot verbalize an empty object set");
  std::string out = "Observed objects: ";
  bool first = true;
  for (const auto& label : labels) {  // std::set iterates in sorted order
    if (!first) out += ", ";
    out += label;
    first = false;
  }
  out += ". Target: " + target + ". What zone is this, and what is the probability the target is here?";
  return out;
}

ZoneInference table_infer(const std::set<std::string>& labels, const std::string& target, const PriorsTable& priors) {
  if (labels.empty()) throw std::invalid_argument("table_infer needs at least one label");
  for (const auto& label : labels) {
    if (!priors.knows_label(label)) throw UnknownLabel(label);
  }
  if (!priors.knows_target(target)) throw UnknownLabel(target);

  const std::string* best = nullptr;
  double best_score = -std::numeric_limits<double>::infinity();
  for (const auto& category : priors.categories()) {
    double score = 0.0;
    for (const auto& label : labels) score += std::log(priors.p_label(label, category) + kLaplaceFloor);
    if (score > best_score) {  // strict: alphabetical order wins ties
      best_score = score;
      best = &category;
    }
  }
  return {*best, priors.p_target(target, *best)};
}

InferenceOutcome TableBackend::infer(const std::set<std::string>& labels, const std::string& target) const {
  InferenceOutcome out;
  out.prompt = verbalize(labels, target);
  out.value = table_infer(labels, target, *priors_);
  out.backend = name();
  return out;
}

InferenceOutcome UniformBackend::infer(const std::set<std::string>& labels, const std::string& target) const {
  InferenceOutcome out;
  out.prompt = verbalize(labels, target);
  out.value = {"Unknown", p_};
  out.backend = name();
  return out;
}

}  // namespace zonenav
