#include <algorithm>
#include <stdexcept>

#include "zonenav/metrics.hpp"

namespace zonenav {

namespace {

void require_nonempty(std::span<const EpisodeResult> results, const char* what) {
  if (results.empty()) throw std::invalid_argument(std::string(what) + " of an empty result set");
}

}  // namespace

double compute_sr(std::span<const EpisodeResult> results) {
  require_nonempty(results, "SR");
  double sum = 0.0;
  for (const auto& r : results) sum += r.success ? 1.0 : 0.0;
  return sum / static_cast<double>(results.size());
}

double compute_spl(std::span<const EpisodeResult> results) {
  require_nonempty(results, "SPL");
  double sum = 0.0;
  for (const auto& r : results) {
    if (!r.success) continue;
    const double denom = std::max(r.path_length, r.shortest_length);
    // A zero-length oracle path that was also walked with zero length.
    sum += denom > 0.0 ? r.shortest_length / denom : 1.0;
  }
  return sum / static_cast<double>(results.size());
}

double compute_td(std::span<const EpisodeResult> results) {
  require_nonempty(results, "TD");
  double sum = 0.0;
  for (const auto& r : results) sum += r.path_length;
  return sum / static_cast<double>(results.size());
}

}  // namespace zonenav
