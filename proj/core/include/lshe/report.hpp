#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lshe/estimator.hpp"

namespace lshe {

// Result of one estimator run. `budget` is the number of distinct pairs that
// were labeled (|S| for the LSH estimator).
struct EstimateReport {
  std::string method;                       // "lshe", "prse", "bfs-vertex", "induced-subgraph"
  std::vector<std::string> method_aliases;  // alternative names used in the literature
  double estimate = 0.0;
  double std_error = 0.0;
  std::string std_error_kind = "plug-in";  // "plug-in", "reseed", or "none"
  double p = 0.0;
  std::uint64_t budget = 0;
  std::uint64_t record_count = 0;
  std::optional<ComponentProfile> profile;
  std::optional<CliqueCounts> clique_counts;
  std::uint64_t seed = 0;
  double elapsed_ms = 0.0;
  bool degenerate = false;
  std::optional<double> reduction_ratio;
};

// Keys: estimate, std_error, p, m, n_prime {1,2,3,4plus}, n_star {1,2,3},
// method, seed, elapsed_ms, plus std_error_kind, degenerate, record_count,
// method_aliases and reduction_ratio.
nlohmann::json to_json(const EstimateReport& report);

}  // namespace lshe
