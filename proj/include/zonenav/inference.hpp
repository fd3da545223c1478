#pragma once

// Zone inference: prompt verbalization plus interchangeable backends that
// map an observed label set to (zone category, target probability).

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace zonenav {

struct ZoneInference {
  std::string category;
  double p_target = 0.5;
};

/// Co-occurrence statistics: P(label | category) and P(target present | category).
class PriorsTable {
 public:
  static PriorsTable load(const std::filesystem::path& path);
  static PriorsTable parse(const std::string& text, const std::string& origin = "<priors>");

  /// Alphabetical.
  const std::vector<std::string>& categories() const { return categories_; }
  bool knows_label(const std::string& label) const { return p_label_.count(label) != 0; }
  /// Missing (label, category) pairs read as 0.
  double p_label(const std::string& label, const std::string& category) const;
  double p_target(const std::string& target, const std::string& category) const;
  bool knows_target(const std::string& target) const { return p_target_.count(target) != 0; }

 private:
  std::vector<std::string> categories_;
  std::map<std::string, std::map<std::string, double>> p_label_;
  std::map<std::string, std::map<std::string, double>> p_target_;
};

inline constexpr double kLaplaceFloor = 1e-3;

/// "Observed objects: a, b. Target: t. What zone is this, and what is the
/// probability the target is here?" Throws std::invalid_argument on an
/// empty label set.
std::string verbalize(const std::set<std::string>& labels, const std::string& target);

/// argmax_c sum_l log(P(l|c) + eps), ties to the alphabetically first
/// category; p_target = P(target | argmax). Throws UnknownLabel.
ZoneInference table_infer(const std::set<std::string>& labels, const std::string& target, const PriorsTable& priors);

struct InferenceOutcome {
  ZoneInference value;
  std::string prompt;
  std::string backend;
  bool fallback = false;
  std::string fallback_reason;
};

class InferenceBackend {
 public:
  virtual ~InferenceBackend() = default;
  virtual InferenceOutcome infer(const std::set<std::string>& labels, const std::string& target) const = 0;
  virtual std::string name() const = 0;
};

class TableBackend final : public InferenceBackend {
 public:
  explicit TableBackend(std::shared_ptr<const PriorsTable> priors) : priors_(std::move(priors)) {}
  InferenceOutcome infer(const std::set<std::string>& labels, const std::string& target) const override;
  std::string name() const override { return "table"; }

 private:
  std::shared_ptr<const PriorsTable> priors_;
};

/// Constant prior: every zone is equally likely to hold the target.
class UniformBackend final : public InferenceBackend {
 public:
  explicit UniformBackend(double p = 0.5) : p_(p) {}
  InferenceOutcome infer(const std::set<std::string>& labels, const std::string& target) const override;
  std::string name() const override { return "uniform"; }

 private:
  double p_;
};

/// HTTP client for POST /infer. Any transport error, non-200 status or
/// out-of-range payload falls back to the table oracle; never throws.
class RemoteBackend final : public InferenceBackend {
 public:
  RemoteBackend(std::string endpoint, std::chrono::milliseconds timeout, std::shared_ptr<const PriorsTable> fallback);
  InferenceOutcome infer(const std::set<std::string>& labels, const std::string& target) const override;
  std::string name() const override { return "remote"; }

  /// {"objects":[...],"target":"...","prompt":"..."}
  static std::string request_body(const std::set<std::string>& labels, const std::string& target);
  /// Parses and range-checks a response body; throws std::runtime_error.
  static ZoneInference parse_response(const std::string& body);

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
  TableBackend fallback_;
};

}  // namespace zonenav
