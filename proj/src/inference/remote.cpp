#include <cmath>

#include "httplib.h"
#include "json.hpp"
#include "zonenav/inference.hpp"

namespace zonenav {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host:port
  std::string prefix;  // path before /infer, without trailing slash
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme = url.find("://");
  const auto path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  Endpoint ep;
  ep.origin = path_start == std::string::npos ? url : url.substr(0, path_start);
  ep.prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!ep.prefix.empty() && ep.prefix.back() == '/') ep.prefix.pop_back();
  if (ep.prefix.size() >= 6 && ep.prefix.compare(ep.prefix.size() - 6, 6, "/infer") == 0) {
    ep.prefix.erase(ep.prefix.size() - 6);
  }
  return ep;
}

}  // namespace

RemoteBackend::RemoteBackend(std::string endpoint, std::chrono::milliseconds timeout,
                             std::shared_ptr<const PriorsTable> fallback)
    : endpoint_(std::move(endpoint)), timeout_(timeout), fallback_(std::move(fallback)) {}

std::string RemoteBackend::request_body(const std::set<std::string>& labels, const std::string& target) {
  nlohmann::ordered_json doc;
  doc["objects"] = labels;
  doc["target"] = target;
  doc["prompt"] = verbalize(labels, target);
  return doc.dump();
}

ZoneInference RemoteBackend::parse_response(const std::string& body) {
  const auto doc = nlohmann::json::parse(body);
  if (!doc.is_object()) throw std::runtime_error("response is not a JSON object");
  const auto& category = doc.at("zone_category");
  const auto& p = doc.at("p_target");
  if (!category.is_string() || category.get<std::string>().empty()) {
    throw std::runtime_error("zone_category must be a non-empty string");
  }
  if (!p.is_number()) throw std::runtime_error("p_target must be a number");
  const double value = p.get<double>();
  if (!(value >= 0.0 && value <= 1.0)) throw std::runtime_error("p_target outside [0, 1]");
  return {category.get<std::string>(), value};
}

InferenceOutcome RemoteBackend::infer(const std::set<std::string>& labels, const std::string& target) const {
  std::string reason;
  try {
    const Endpoint ep = split_endpoint(endpoint_);
    httplib::Client client(ep.origin);
    const auto secs = static_cast<time_t>(timeout_.count() / 1000);
    const auto usecs = static_cast<time_t>((timeout_.count() % 1000) * 1000);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    const auto res = client.Post(ep.prefix + "/infer", request_body(labels, target), "application/json");
    if (!res) {
      reason = "transport: " + httplib::to_string(res.error());
    } else if (res->status != 200) {
      reason = "status " + std::to_string(res->status);
    } else {
      InferenceOutcome out;
      out.prompt = verbalize(labels, target);
      out.value = parse_response(res->body);
      out.backend = name();
      return out;
    }
  } catch (const std::exception& e) {
    reason = std::string("invalid response: ") + e.what();
  }

  InferenceOutcome out;
  try {
    out = fallback_.infer(labels, target);
  } catch (const std::exception& e) {
    // Even the oracle cannot answer (unknown label): neutral prior.
    out.prompt = labels.empty() ? std::string() : verbalize(labels, target);
    out.value = {"Unknown", 0.5};
    reason += "; table fallback failed: " + std::string(e.what());
  }
  out.backend = name();
  out.fallback = true;
  out.fallback_reason = reason;
  return out;
}

}  // namespace zonenav
