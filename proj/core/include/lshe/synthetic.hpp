#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "lshe/estimator.hpp"

namespace lshe {

// Disjoint cliques: counts[i] cliques of size i. Vertices are assigned to
// cliques in a seeded random order.
struct SyntheticCliqueGraph {
  std::map<std::size_t, std::uint64_t> counts;
  std::vector<std::uint32_t> entity_of;  // clique index per vertex
  std::vector<RecordPair> edges;         // every within-clique pair
  std::uint64_t seed = 0;

  std::size_t record_count() const noexcept { return entity_of.size(); }
  std::uint64_t entity_count() const noexcept;
};

// Throws std::invalid_argument when every count is zero or a size is zero.
SyntheticCliqueGraph synth_graph(const std::map<std::size_t, std::uint64_t>& counts, std::uint64_t seed);

// Keeps every edge independently with probability p.
ObservedGraph simulate_edge_sampling(const SyntheticCliqueGraph& graph, double p, std::uint64_t seed);

// Expected n'_1, n'_2, n'_3 for cliques of size <= 3 under edge retention p.
struct ExpectedObservedCounts {
  double singletons = 0.0;
  double pairs = 0.0;
  double triples = 0.0;
};

ExpectedObservedCounts expected_observed_counts(const CliqueCounts& truth, double p);

// |estimate - n| / n. Throws std::invalid_argument when n <= 0.
double relative_error(double estimate, double n);

}  // namespace lshe
