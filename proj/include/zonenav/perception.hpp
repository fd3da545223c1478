#pragma once

// Detection filtering, label similarity and the object registry.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zonenav/world.hpp"

namespace zonenav {

/// Label -> unit-norm embedding, all of one dimension. Immutable after load.
class EmbeddingTable {
 public:
  static EmbeddingTable load(const std::filesystem::path& path);
  static EmbeddingTable parse(const std::string& text, const std::string& origin = "<embeddings>");

  std::size_t dim() const { return dim_; }
  bool contains(const std::string& label) const { return vectors_.count(label) != 0; }
  /// Throws MissingEmbedding.
  const std::vector<double>& vector(const std::string& label) const;
  std::vector<std::string> labels() const;

 private:
  std::size_t dim_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
};

/// Cosine similarity of the two label embeddings, in [-1, 1].
double similarity(const std::string& a, const std::string& b, const EmbeddingTable& table);

struct PerceptionConfig {
  int tau_pixel = 400;
  double tau_dist = 1.5;
  double tau_target = 0.85;
  double merge_radius = 0.25;

  void validate() const;
};

enum class FilterVerdict { Accept, RejectPixel, RejectDistance, RejectBoth };

std::string to_string(FilterVerdict verdict);

/// Accept iff pixels >= tau_pixel and distance <= tau_dist (both inclusive).
FilterVerdict filter_detection(const Detection& d, const PerceptionConfig& cfg);

bool is_verification_trigger(const Detection& d, const std::string& target, const EmbeddingTable& table,
                             const PerceptionConfig& cfg);

struct ObjectRecord {
  Vec2 position;
  std::string label;
  std::optional<int> zone_id;
  int first_seen_step = 0;
};

struct Registration {
  bool is_new = false;
  std::size_t index = 0;
};

/// The object manager: every accepted object instance, deduplicated by
/// (label, merge radius). Single writer.
class ObjectRegistry {
 public:
  explicit ObjectRegistry(double merge_radius = 0.25) : merge_radius_(merge_radius) {}

  Registration register_object(const Detection& accepted, int step);
  void set_zone(std::size_t index, int zone_id) { records_.at(index).zone_id = zone_id; }

  const std::vector<ObjectRecord>& records() const { return records_; }
  const ObjectRecord& at(std::size_t index) const { return records_.at(index); }
  std::size_t size() const { return records_.size(); }

 private:
  double merge_radius_;
  std::vector<ObjectRecord> records_;
};

}  // namespace zonenav
