#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "zonenav/errors.hpp"
#include "zonenav/perception.hpp"

namespace zonenav {

EmbeddingTable EmbeddingTable::parse(const std::string& text, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  EmbeddingTable table;
  try {
    table.dim_ = doc.at("dim").get<std::size_t>();
    if (table.dim_ == 0) throw ValidationError(origin + ": dim must be positive");
    for (const auto& [label, values] : doc.at("vectors").items()) {
      auto v = values.get<std::vector<double>>();
      if (v.size() != table.dim_) {
        throw ValidationError(origin + ": vector for '" + label + "' has dimension " + std::to_string(v.size()) +
                              ", expected " + std::to_string(table.dim_));
      }
      double norm = 0.0;
      for (const double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (!(norm > 0.0) || !std::isfinite(norm)) throw ValidationError(origin + ": zero vector for '" + label + "'");
      for (double& x : v) x /= norm;
      table.vectors_.emplace(label, std::move(v));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return table;
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

const std::vector<double>& EmbeddingTable::vector(const std::string& label) const {
  const auto it = vectors_.find(label);
  if (it == vectors_.end()) throw MissingEmbedding(label);
  return it->second;
}

std::vector<std::string> EmbeddingTable::labels() const {
  std::vector<std::string> out;
  out.reserve(vectors_.size());
  for (const auto& [label, v] : vectors_) out.push_back(label);
  return out;
}

double similarity(const std::string& a, const std::string& b, const EmbeddingTable& table) {
  const auto& va = table.vector(a);
  const auto& vb = table.vector(b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    dot += va[i] * vb[i];
    na += va[i] * va[i];
    nb += vb[i] * vb[i];
  }
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

void PerceptionConfig::validate() const {
  if (tau_pixel <= 0) throw std::invalid_argument("tau_pixel must be positive");
  if (!(tau_dist > 0.0)) throw std::invalid_argument("tau_dist must be positive");
  if (!(tau_target > 0.0 && tau_target <= 1.0)) throw std::invalid_argument("tau_target must lie in (0, 1]");
  if (!(merge_radius >= 0.0)) throw std::invalid_argument("merge_radius must be non-negative");
}

std::string to_string(FilterVerdict verdict) {
  switch (verdict) {
    case FilterVerdict::Accept: return "accept";
    case FilterVerdict::RejectPixel: return "reject:pixel";
    case FilterVerdict::RejectDistance: return "reject:distance";
    case FilterVerdict::RejectBoth: return "reject:pixel+distance";
  }
  return "?";
}

FilterVerdict filter_detection(const Detection& d, const PerceptionConfig& cfg) {
  const bool pixel_ok = d.apparent_pixels >= cfg.tau_pixel;
  const bool dist_ok = d.distance <= cfg.tau_dist;
  if (pixel_ok && dist_ok) return FilterVerdict::Accept;
  if (!pixel_ok && !dist_ok) return FilterVerdict::RejectBoth;
  return pixel_ok ? FilterVerdict::RejectDistance : FilterVerdict::RejectPixel;
}

bool is_verification_trigger(const Detection& d, const std::string& target, const EmbeddingTable& table,
                             const PerceptionConfig& cfg) {
  return similarity(d.label, target, table) >= cfg.tau_target;
}

Registration ObjectRegistry::register_object(const Detection& accepted, int step) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& rec = records_[i];
    if (rec.label == accepted.label && distance(rec.position, accepted.world_position) <= merge_radius_) {
      return {false, i};
    }
  }
  records_.push_back({accepted.world_position, accepted.label, std::nullopt, step});
  return {true, records_.size() - 1};
}

}  // namespace zonenav
