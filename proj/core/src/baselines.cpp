#include "lshe/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "lshe/estimator.hpp"
#include "lshe/hash.hpp"

namespace lshe {

namespace {

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

// Pair with colex rank r: j(j-1)/2 + i, i < j.
RecordPair unrank_pair(std::uint64_t r) {
  auto j = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(r))) / 2.0);
  while (j * (j - 1) / 2 > r) --j;
  while ((j + 1) * j / 2 <= r) ++j;
  const std::uint64_t i = r - j * (j - 1) / 2;
  return {static_cast<RecordId>(i), static_cast<RecordId>(j)};
}

// Floyd's sampler: `count` distinct values in [0, n).
std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t count, std::mt19937_64& rng) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(count * 2);
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t j = n - count; j < n; ++j) {
    const std::uint64_t t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
    const std::uint64_t v = chosen.insert(t).second ? t : j;
    if (v == j) chosen.insert(j);
    out.push_back(v);
  }
  return out;
}

}  // namespace

EstimateReport prse(std::size_t record_count, std::uint64_t budget, const LabelOracle& oracle,
                    std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  if (record_count < 2) throw std::invalid_argument("need at least two records");
  const std::uint64_t total = static_cast<std::uint64_t>(record_count) * (record_count - 1) / 2;
  if (budget < 1 || budget > total) throw std::invalid_argument("budget must lie in [1, M(M-1)/2]");

  std::mt19937_64 rng(seed);
  EdgeQueryBudget queries(oracle, budget);
  ObservedGraph graph{record_count, {}};
  for (std::uint64_t r : sample_without_replacement(total, budget, rng)) {
    const RecordPair pair = unrank_pair(r);
    if (queries.query(pair) == Label::match) graph.edges.push_back(pair);
  }

  EstimateReport report;
  report.method = "prse";
  report.method_aliases = {"PRSE"};
  report.p = static_cast<double>(budget) / static_cast<double>(total);
  report.budget = queries.used();
  report.record_count = record_count;
  report.seed = seed;
  report.profile = component_profile(graph);
  report.estimate = lshe(*report.profile, report.p);
  report.clique_counts = solve_clique_counts(*report.profile, report.p);
  report.std_error =
      std::sqrt(lshe_variance(report.clique_counts->pairs, report.clique_counts->triples, report.p));
  report.reduction_ratio = 1.0 - report.p;
  report.degenerate = graph.edges.empty() || !std::isfinite(report.estimate) || !std::isfinite(report.std_error);
  report.elapsed_ms = elapsed_since(start);
  return report;
}

EstimateReport bfse_vertex_bfs(std::size_t record_count, std::uint64_t budget, const LabelOracle& oracle,
                               std::size_t max_vertices, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  if (record_count < 1) throw std::invalid_argument("no records");
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  if (max_vertices < 1) throw std::invalid_argument("max_vertices must be >= 1");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<RecordId> pick(0, static_cast<RecordId>(record_count - 1));
  EdgeQueryBudget queries(oracle, budget);
  std::vector<double> inverse_sizes;
  std::vector<char> in_component(record_count, 0);
  std::vector<RecordId> component;

  while (inverse_sizes.size() < max_vertices && !queries.exhausted()) {
    const RecordId v = pick(rng);
    component.assign(1, v);
    in_component[v] = 1;
    bool complete = true;
    for (std::size_t head = 0; head < component.size() && complete; ++head) {
      const RecordId u = component[head];
      for (RecordId w = 0; w < record_count; ++w) {
        if (in_component[w]) continue;
        const auto label = queries.query(RecordPair::canonical(u, w));
        if (!label) {
          complete = false;
          break;
        }
        if (*label == Label::match) {
          in_component[w] = 1;
          component.push_back(w);
        }
      }
    }
    for (RecordId x : component) in_component[x] = 0;
    if (complete) inverse_sizes.push_back(1.0 / static_cast<double>(component.size()));
  }
  if (inverse_sizes.empty()) throw std::runtime_error("no completed exploration");

  const double k = static_cast<double>(inverse_sizes.size());
  double mean = 0.0;
  for (double x : inverse_sizes) mean += x;
  mean /= k;
  double var = 0.0;
  for (double x : inverse_sizes) var += (x - mean) * (x - mean);
  var = inverse_sizes.size() > 1 ? var / (k - 1.0) : 0.0;

  EstimateReport report;
  report.method = "bfs-vertex";
  report.method_aliases = {"RSGE", "BFSE"};
  report.estimate = static_cast<double>(record_count) * mean;
  report.std_error = static_cast<double>(record_count) * std::sqrt(var / k);
  report.std_error_kind = inverse_sizes.size() > 1 ? "sample" : "none";
  report.budget = queries.used();
  report.record_count = record_count;
  report.seed = seed;
  report.elapsed_ms = elapsed_since(start);
  return report;
}

InclusionProbabilities inclusion_probabilities(std::size_t sample_size, std::size_t record_count) {
  if (sample_size > record_count) throw std::invalid_argument("sample larger than population");
  const auto s = static_cast<double>(sample_size);
  const auto m = static_cast<double>(record_count);
  InclusionProbabilities q;
  q.one = record_count ? s / m : 0.0;
  q.two = record_count >= 2 ? s * (s - 1) / (m * (m - 1)) : 0.0;
  q.three = record_count >= 3 ? s * (s - 1) * (s - 2) / (m * (m - 1) * (m - 2)) : 0.0;
  return q;
}

CliqueCounts solve_induced_counts(const ComponentProfile& observed, const InclusionProbabilities& q) {
  const auto n1 = static_cast<double>(observed.count(1));
  const auto n2 = static_cast<double>(observed.count(2));
  const auto n3 = static_cast<double>(observed.count(3));
  CliqueCounts c;
  if (n3 > 0 && q.three <= 0) throw std::domain_error("triples observed with zero inclusion probability");
  c.triples = n3 > 0 ? n3 / q.three : 0.0;
  const double rest2 = n2 - 3.0 * c.triples * (q.two - q.three);
  if (rest2 != 0 && q.two <= 0) throw std::domain_error("pairs observed with zero inclusion probability");
  c.pairs = rest2 != 0 ? rest2 / q.two : 0.0;
  const double rest1 = n1 - 2.0 * c.pairs * (q.one - q.two) - 3.0 * c.triples * (q.one - 2.0 * q.two + q.three);
  c.singletons = rest1 / q.one;
  return c;
}

EstimateReport rsge_induced_subgraph(std::size_t record_count, std::uint64_t budget, const LabelOracle& oracle,
                                     std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  auto s = static_cast<std::size_t>(std::floor(std::sqrt(2.0 * static_cast<double>(budget))));
  while (s * (s - 1) / 2 > budget) --s;
  while ((s + 1) * s / 2 <= budget) ++s;
  s = std::min(s, record_count);
  if (s < 2) throw std::invalid_argument("budget too small for a subgraph");

  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> picked = sample_without_replacement(record_count, s, rng);
  std::sort(picked.begin(), picked.end());
  EdgeQueryBudget queries(oracle, budget);
  ObservedGraph local{s, {}};
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = a + 1; b < s; ++b) {
      const auto pair = RecordPair::canonical(static_cast<RecordId>(picked[a]), static_cast<RecordId>(picked[b]));
      const auto label = queries.query(pair);
      if (!label) throw std::logic_error("induced subgraph exceeded its budget");
      if (*label == Label::match) local.edges.push_back({static_cast<RecordId>(a), static_cast<RecordId>(b)});
    }
  }

  const InclusionProbabilities q = inclusion_probabilities(s, record_count);
  EstimateReport report;
  report.method = "induced-subgraph";
  report.method_aliases = {"BFSE", "RSGE"};
  report.profile = component_profile(local);
  report.clique_counts = solve_induced_counts(*report.profile, q);
  report.estimate = report.clique_counts->singletons + report.clique_counts->pairs + report.clique_counts->triples +
                    static_cast<double>(report.profile->count_at_least(4)) / q.one;
  report.std_error_kind = "none";
  report.p = q.one;
  report.budget = queries.used();
  report.record_count = record_count;
  report.seed = seed;
  report.elapsed_ms = elapsed_since(start);
  return report;
}

}  // namespace lshe
