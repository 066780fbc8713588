#include "lshe/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace lshe {

std::uint64_t SyntheticCliqueGraph::entity_count() const noexcept {
  std::uint64_t n = 0;
  for (const auto& [size, count] : counts) n += count;
  return n;
}

SyntheticCliqueGraph synth_graph(const std::map<std::size_t, std::uint64_t>& counts, std::uint64_t seed) {
  std::size_t vertices = 0;
  std::uint64_t cliques = 0;
  for (const auto& [size, count] : counts) {
    if (size == 0 && count > 0) throw std::invalid_argument("clique size must be positive");
    vertices += size * count;
    cliques += count;
  }
  if (cliques == 0) throw std::invalid_argument("all clique counts are zero");
  if (vertices > std::numeric_limits<RecordId>::max()) throw std::invalid_argument("graph too large");

  SyntheticCliqueGraph g;
  g.seed = seed;
  for (const auto& [size, count] : counts) {
    if (count > 0) g.counts.emplace(size, count);
  }
  std::vector<RecordId> order(vertices);
  std::iota(order.begin(), order.end(), RecordId{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  g.entity_of.assign(vertices, 0);
  std::size_t next = 0;
  std::uint32_t entity = 0;
  for (const auto& [size, count] : g.counts) {
    for (std::uint64_t c = 0; c < count; ++c, ++entity) {
      for (std::size_t a = 0; a < size; ++a) {
        g.entity_of[order[next + a]] = entity;
        for (std::size_t b = a + 1; b < size; ++b) {
          g.edges.push_back(RecordPair::canonical(order[next + a], order[next + b]));
        }
      }
      next += size;
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

ObservedGraph simulate_edge_sampling(const SyntheticCliqueGraph& graph, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(p);
  ObservedGraph out{graph.record_count(), {}};
  for (const RecordPair& e : graph.edges) {
    if (keep(rng)) out.edges.push_back(e);
  }
  return out;
}

ExpectedObservedCounts expected_observed_counts(const CliqueCounts& truth, double p) {
  const double q = 1.0 - p;
  ExpectedObservedCounts e;
  e.triples = truth.triples * p * p * (3.0 - 2.0 * p);
  e.pairs = truth.pairs * p + truth.triples * 3.0 * q * q * p;
  e.singletons = truth.singletons + 2.0 * q * truth.pairs + 3.0 * q * q * truth.triples;
  return e;
}

double relative_error(double estimate, double n) {
  if (!(n > 0.0)) throw std::invalid_argument("relative error needs n > 0");
  return std::abs(estimate - n) / n;
}

}  // namespace lshe
