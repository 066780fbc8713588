#pragma once

#include <cstddef>
#include <cstdint>

#include "lshe/oracle.hpp"
#include "lshe/report.hpp"

namespace lshe {

// Uniform random pairs instead of LSH buckets, then the same estimator with
// p = 2m / (M(M-1)). A sample without match edges, or a non-finite result,
// sets `degenerate` instead of throwing.
EstimateReport prse(std::size_t record_count, std::uint64_t budget, const LabelOracle& oracle,
                    std::uint64_t seed);

// Full component discovery from uniformly drawn vertices until the budget
// runs out or `max_vertices` vertices completed. Estimate is
// M * mean(1 / |C(v)|) over completed vertices. Throws std::runtime_error
// ("no completed exploration") when none finished.
EstimateReport bfse_vertex_bfs(std::size_t record_count, std::uint64_t budget, const LabelOracle& oracle,
                               std::size_t max_vertices, std::uint64_t seed);

// Labels every pair inside s = floor(sqrt(2m)) random vertices and inverts
// the induced-subgraph moments for cliques of size <= 3. Throws
// std::invalid_argument ("budget too small for a subgraph") when s < 2.
EstimateReport rsge_induced_subgraph(std::size_t record_count, std::uint64_t budget, const LabelOracle& oracle,
                                     std::uint64_t seed);

// Vertex-inclusion probabilities of a uniform s-subset of M vertices: any
// fixed 1, 2 and 3 vertices all included.
struct InclusionProbabilities {
  double one = 0.0;
  double two = 0.0;
  double three = 0.0;
};

InclusionProbabilities inclusion_probabilities(std::size_t sample_size, std::size_t record_count);

// Solves the induced-subgraph system for (n*_1, n*_2, n*_3).
CliqueCounts solve_induced_counts(const ComponentProfile& observed, const InclusionProbabilities& q);

}  // namespace lshe
