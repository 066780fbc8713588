#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "lshe/lsh_sampler.hpp"
#include "lshe/minhash.hpp"
#include "lshe/oracle.hpp"
#include "lshe/record.hpp"
#include "lshe/report.hpp"

namespace lshe {

struct PipelineConfig {
  unsigned shingle_k = 3;
  NormalizationPolicy normalization{};
  LshShape shape{1, 20};
  std::uint64_t seed = 1;
  std::size_t bucket_cap = 2000;
  MinHashBackend backend = MinHashBackend::densified;
};

// Signs every record, builds the L tables and emits the candidate pairs.
SamplePairSet lsh_sample(std::span<const ShingleSet> sets, const PipelineConfig& config,
                         SignatureCacheWriter* cache = nullptr);

// Labels every sampled pair through `oracle`, counts the observed components
// and applies the estimator with recall `p`. Throws std::domain_error at p=0.
EstimateReport estimate_from_sample(std::size_t record_count, const SamplePairSet& sample, double p,
                                    const LabelOracle& oracle);

struct PipelineResult {
  EstimateReport report;
  SamplePairSet sample;
};

// Sample, estimate p from `recall_matches`, label, count, estimate.
PipelineResult run_pipeline(std::span<const ShingleSet> sets, const PipelineConfig& config,
                            std::span<const RecordPair> recall_matches, const LabelOracle& oracle,
                            SignatureCacheWriter* cache = nullptr);

// End-to-end estimate from raw records. p is measured on the matches of
// `labeled`.
EstimateReport estimate_unique_entities(const Dataset& dataset, const PipelineConfig& config,
                                        const LabeledPairs& labeled, const LabelOracle& oracle);

// Sample standard deviation of the estimate over `replicates` runs with
// seeds config.seed + 1 .. config.seed + replicates. Requires replicates >= 2.
double reseed_std_error(std::span<const ShingleSet> sets, const PipelineConfig& config,
                        std::span<const RecordPair> recall_matches, const LabelOracle& oracle,
                        std::size_t replicates);

}  // namespace lshe
