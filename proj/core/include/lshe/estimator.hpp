#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "lshe/record.hpp"

namespace lshe {

// Vertices 0..vertex_count-1 and the sampled pairs that were labeled match.
struct ObservedGraph {
  std::size_t vertex_count = 0;
  std::vector<RecordPair> edges;
};

// Connected components of an observed graph, counted by size:
// count(i) is the number of components with exactly i vertices.
class ComponentProfile {
 public:
  ComponentProfile() = default;
  // Throws std::invalid_argument unless sum(i * count(i)) == vertex_count.
  ComponentProfile(std::size_t vertex_count, std::map<std::size_t, std::uint64_t> counts);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::uint64_t count(std::size_t size) const noexcept;
  std::uint64_t count_at_least(std::size_t size) const noexcept;
  std::uint64_t component_count() const noexcept;
  const std::map<std::size_t, std::uint64_t>& counts() const noexcept { return counts_; }

  bool operator==(const ComponentProfile&) const = default;

 private:
  std::size_t vertex_count_ = 0;
  std::map<std::size_t, std::uint64_t> counts_;  // only sizes with count > 0
};

// Union-find census, O(M + |edges|). Throws std::out_of_range for an
// endpoint >= vertex_count.
ComponentProfile component_profile(std::size_t vertex_count, std::span<const RecordPair> edges);
inline ComponentProfile component_profile(const ObservedGraph& graph) {
  return component_profile(graph.vertex_count, graph.edges);
}

// Solved clique counts n*_1, n*_2, n*_3. May be negative on noisy input.
struct CliqueCounts {
  double singletons = 0.0;
  double pairs = 0.0;
  double triples = 0.0;
};

// Inverts the expected-component equations for cliques up to size three.
// Requires 0 < p <= 1.
CliqueCounts solve_clique_counts(const ComponentProfile& profile, double p);

// Point estimate of the number of components of the unobserved graph:
//   n'_1 + n'_2 (2p-1)/p + n'_3 (1 - 6(1-p)^2 p) / (p^2 (3-2p)) + sum_{i>=4} n'_i
// Components of size four or more pass through unchanged.
double lshe(const ComponentProfile& profile, double p);

// Variance = triples * n*_3 + pairs * n*_2.
struct VarianceCoefficients {
  double triples = 0.0;  // (1-p)^2 (3p^2 - p + 1) / (p^2 (3-2p))
  double pairs = 0.0;    // (1-p) / p
};

VarianceCoefficients variance_coefficients(double p);

// Negative plug-in counts are clamped to zero (with a warning) before use.
double lshe_variance(double pairs, double triples, double p);

}  // namespace lshe
