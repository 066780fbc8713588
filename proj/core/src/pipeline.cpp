#include "lshe/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace lshe {

namespace {

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SamplePairSet lsh_sample(std::span<const ShingleSet> sets, const PipelineConfig& config,
                         SignatureCacheWriter* cache) {
  if (sets.empty()) throw std::invalid_argument("no records");
  const auto start = std::chrono::steady_clock::now();
  const Signer signer(config.backend, config.seed, config.shape);
  const LshTables tables = LshTables::from_keys(bucket_keys(sets, signer, cache), config.shape);
  SamplePairSet sample = sample_pairs(tables, SampleOptions{config.seed, config.bucket_cap});
  SampleMetadata meta = sample.metadata();
  meta.elapsed_ms = elapsed_since(start);
  return SamplePairSet(std::vector<RecordPair>(sample.pairs().begin(), sample.pairs().end()), meta);
}

EstimateReport estimate_from_sample(std::size_t record_count, const SamplePairSet& sample, double p,
                                    const LabelOracle& oracle) {
  const auto start = std::chrono::steady_clock::now();
  EdgeQueryBudget budget(oracle, sample.size());
  ObservedGraph graph{record_count, {}};
  for (const RecordPair& pair : sample.pairs()) {
    if (budget.query(pair) == Label::match) graph.edges.push_back(pair);
  }

  EstimateReport report;
  report.method = "lshe";
  report.p = p;
  report.record_count = record_count;
  report.budget = budget.used();
  report.seed = sample.metadata().seed;
  report.profile = component_profile(graph);
  report.estimate = lshe(*report.profile, p);
  report.clique_counts = solve_clique_counts(*report.profile, p);
  report.std_error = std::sqrt(lshe_variance(report.clique_counts->pairs, report.clique_counts->triples, p));
  if (record_count >= 2) report.reduction_ratio = reduction_ratio(sample.size(), record_count);
  report.elapsed_ms = sample.metadata().elapsed_ms + elapsed_since(start);
  return report;
}

PipelineResult run_pipeline(std::span<const ShingleSet> sets, const PipelineConfig& config,
                            std::span<const RecordPair> recall_matches, const LabelOracle& oracle,
                            SignatureCacheWriter* cache) {
  SamplePairSet sample = lsh_sample(sets, config, cache);
  const double p = empirical_recall(sample, recall_matches);
  EstimateReport report = estimate_from_sample(sets.size(), sample, p, oracle);
  return {std::move(report), std::move(sample)};
}

EstimateReport estimate_unique_entities(const Dataset& dataset, const PipelineConfig& config,
                                        const LabeledPairs& labeled, const LabelOracle& oracle) {
  const auto sets = shingle_dataset(dataset, config.shingle_k, config.normalization);
  const auto matches = labeled.matches();
  return run_pipeline(sets, config, matches, oracle).report;
}

double reseed_std_error(std::span<const ShingleSet> sets, const PipelineConfig& config,
                        std::span<const RecordPair> recall_matches, const LabelOracle& oracle,
                        std::size_t replicates) {
  if (replicates < 2) throw std::invalid_argument("reseed standard error needs at least 2 replicates");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t r = 1; r <= replicates; ++r) {
    PipelineConfig c = config;
    c.seed = config.seed + r;
    const double e = run_pipeline(sets, c, recall_matches, oracle).report.estimate;
    sum += e;
    sum_sq += e * e;
  }
  const double n = static_cast<double>(replicates);
  const double var = (sum_sq - sum * sum / n) / (n - 1.0);
  return std::sqrt(std::max(var, 0.0));
}

}  // namespace lshe
