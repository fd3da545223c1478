#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "json.hpp"
#include "zonenav/errors.hpp"
#include "zonenav/mapping.hpp"
#include "zonenav/planning.hpp"

namespace zonenav {

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& label : a) common += b.count(label);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

void ZoneGraph::link(int a, int b) {
  if (a == b) return;
  edges_.insert({std::min(a, b), std::max(a, b)});
}

ZoneAssignment ZoneGraph::assign_zone(const ZoneObservation& observation) {
  // Candidates: Jaccard >= theta or centroid within r_zone. Best Jaccard
  // wins, then the nearer centroid, then the lower id.
  int best = -1;
  double best_j = -1.0;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& node : nodes_) {
    const double j = jaccard(observation.labels, node.object_labels);
    const double d = distance(node.centroid, observation.position);
    if (j < params_.theta_zone && d > params_.r_zone) continue;
    if (j > best_j || (j == best_j && d < best_d)) {
      best = node.id;
      best_j = j;
      best_d = d;
    }
  }

  ZoneAssignment out;
  if (best < 0) {
    ZoneNode node;
    node.id = static_cast<int>(nodes_.size());
    node.centroid = observation.position;
    node.observations = 1;
    node.object_labels = observation.labels;
    nodes_.push_back(std::move(node));
    if (current_) link(*current_, nodes_.back().id);
    current_ = nodes_.back().id;
    out.zone_id = nodes_.back().id;
    out.is_new = true;
    out.context_reset = true;
    return out;
  }

  ZoneNode& node = nodes_[static_cast<std::size_t>(best)];
  const auto n = static_cast<double>(node.observations);
  node.centroid = {(node.centroid.x * n + observation.position.x) / (n + 1.0),
                   (node.centroid.y * n + observation.position.y) / (n + 1.0)};
  ++node.observations;
  bool gained = false;
  for (const auto& label : observation.labels) gained = node.object_labels.insert(label).second || gained;

  const bool moved = !current_ || *current_ != best;
  if (current_) link(*current_, best);
  current_ = best;
  out.zone_id = best;
  out.context_reset = moved || gained;
  return out;
}

void ZoneGraph::update_node_semantics(int zone_id, const SemanticUpdate& update) {
  if (zone_id < 0 || zone_id >= static_cast<int>(nodes_.size())) {
    throw std::out_of_range("unknown zone id " + std::to_string(zone_id));
  }
  if (!(update.p_target >= 0.0 && update.p_target <= 1.0)) {
    throw std::invalid_argument("p_target outside [0, 1]");
  }
  auto& node = nodes_[static_cast<std::size_t>(zone_id)];
  node.zone_category = update.category;
  node.p_target = update.p_target;
}

bool ZoneGraph::is_connected() const {
  if (nodes_.empty()) return true;
  std::vector<std::vector<int>> adj(nodes_.size());
  for (const auto& [a, b] : edges_) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  std::vector<bool> seen(nodes_.size(), false);
  std::queue<int> open;
  open.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!open.empty()) {
    const int cur = open.front();
    open.pop();
    for (const int next : adj[static_cast<std::size_t>(cur)]) {
      if (seen[static_cast<std::size_t>(next)]) continue;
      seen[static_cast<std::size_t>(next)] = true;
      ++count;
      open.push(next);
    }
  }
  return count == nodes_.size();
}

std::optional<Cell> zone_anchor(const ZoneNode& node, const OccupancyGrid& grid) {
  const Cell center = world_to_cell(node.centroid, grid.cell_size());
  if (grid.is_free(center)) return center;
  // Expanding square rings. Once ring k yields a Free cell, nothing beyond
  // ring ceil(k * sqrt 2) can be nearer.
  std::optional<Cell> best;
  double best_d = std::numeric_limits<double>::infinity();
  const int max_ring = std::max(grid.width(), grid.height());
  int stop_ring = max_ring;
  for (int ring = 1; ring <= stop_ring && ring <= max_ring; ++ring) {
    for (int r = center.r - ring; r <= center.r + ring; ++r) {
      for (int c = center.c - ring; c <= center.c + ring; ++c) {
        if (std::max(std::abs(r - center.r), std::abs(c - center.c)) != ring) continue;
        const Cell cell{r, c};
        if (!grid.is_free(cell)) continue;
        const double d = distance(cell_center(cell, grid.cell_size()), node.centroid);
        if (d < best_d || (d == best_d && cell < *best)) {
          best = cell;
          best_d = d;
        }
      }
    }
    if (best && stop_ring == max_ring) stop_ring = static_cast<int>(std::ceil(ring * std::sqrt(2.0)));
  }
  return best;
}

std::optional<int> frontier_zone(const ZoneGraph& graph, const Frontier& frontier, const OccupancyGrid& grid) {
  const double r_zone = graph.params().r_zone;
  const int max_steps = static_cast<int>(std::floor(r_zone / grid.cell_size() + 1e-9));
  std::optional<int> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& node : graph.nodes()) {
    const auto anchor = zone_anchor(node, grid);
    if (!anchor) continue;
    if (manhattan(*anchor, frontier.centroid) > max_steps) continue;
    const auto path = astar(grid, *anchor, frontier.centroid);
    if (!path || path->length > r_zone + 1e-9) continue;
    if (path->length < best_d) {
      best = node.id;
      best_d = path->length;
    }
  }
  return best;
}

double zone_p_target(const ZoneGraph& graph, std::optional<int> zone_id) {
  return zone_id ? graph.node(*zone_id).p_target : kDefaultPTarget;
}

std::string zone_graph_to_json(const ZoneGraph& graph) {
  nlohmann::ordered_json doc;
  auto nodes = nlohmann::ordered_json::array();
  for (const auto& node : graph.nodes()) {
    nlohmann::ordered_json n;
    n["id"] = node.id;
    n["centroid"] = {node.centroid.x, node.centroid.y};
    n["labels"] = node.object_labels;
    n["category"] = node.zone_category ? nlohmann::ordered_json(*node.zone_category) : nlohmann::ordered_json();
    n["p_target"] = node.p_target;
    n["observations"] = node.observations;
    nodes.push_back(std::move(n));
  }
  auto edges = nlohmann::ordered_json::array();
  for (const auto& [a, b] : graph.edges()) edges.push_back({a, b});
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  doc["current"] = graph.current() ? nlohmann::ordered_json(*graph.current()) : nlohmann::ordered_json();
  return doc.dump();
}

ZoneGraph ZoneGraph::restore(std::vector<ZoneNode> nodes, std::set<std::pair<int, int>> edges,
                             std::optional<int> current, ZoneParams params) {
  ZoneGraph g(params);
  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);
  g.current_ = current;
  return g;
}

ZoneGraph zone_graph_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    std::vector<ZoneNode> nodes;
    for (const auto& n : doc.at("nodes")) {
      ZoneNode node;
      node.id = n.at("id").get<int>();
      node.centroid = {n.at("centroid").at(0).get<double>(), n.at("centroid").at(1).get<double>()};
      node.object_labels = n.at("labels").get<std::set<std::string>>();
      if (!n.at("category").is_null()) node.zone_category = n.at("category").get<std::string>();
      node.p_target = n.at("p_target").get<double>();
      node.observations = n.value("observations", 1);
      nodes.push_back(std::move(node));
    }
    std::set<std::pair<int, int>> edges;
    for (const auto& e : doc.at("edges")) edges.insert({e.at(0).get<int>(), e.at(1).get<int>()});
    std::optional<int> current;
    if (doc.contains("current") && !doc["current"].is_null()) current = doc["current"].get<int>();
    return ZoneGraph::restore(std::move(nodes), std::move(edges), current);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("zone graph: ") + e.what());
  }
}

}  // namespace zonenav
