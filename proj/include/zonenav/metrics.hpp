#pragma once

#include <limits>
#include <span>

namespace zonenav {

struct EpisodeResult {
  bool success = false;                                           // S_i
  double path_length = 0.0;                                       // P_i, meters
  double shortest_length = std::numeric_limits<double>::infinity();  // L_i, meters
  int steps = 0;
};

/// Mean of S_i. Throws std::invalid_argument on an empty set.
double compute_sr(std::span<const EpisodeResult> results);
/// (1/N) sum S_i * L_i / max(P_i, L_i).
double compute_spl(std::span<const EpisodeResult> results);
/// Mean of P_i.
double compute_td(std::span<const EpisodeResult> results);

}  // namespace zonenav
