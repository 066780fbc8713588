#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lshe/minhash.hpp"
#include "lshe/oracle.hpp"
#include "lshe/record.hpp"

namespace lshe {

struct SweepGrid {
  std::vector<std::size_t> rows;    // K values
  std::vector<std::size_t> tables;  // L values
  std::vector<unsigned> shingles;   // k values
  std::uint64_t seed = 1;
  std::size_t bucket_cap = 2000;
  MinHashBackend backend = MinHashBackend::densified;
  NormalizationPolicy normalization{};
};

// One (K, L, k) operating point. A row whose recall cannot be computed keeps
// its sample size and carries the message in `error`.
struct SweepRow {
  std::size_t rows = 0;
  std::size_t tables = 0;
  unsigned shingle = 0;
  std::uint64_t sample_size = 0;
  std::optional<double> recall;
  double reduction_ratio = 0.0;
  double elapsed_ms = 0.0;
  std::string error;
};

// Rows ordered by (K, L, k). Throws std::invalid_argument on an empty range.
std::vector<SweepRow> sweep(const Dataset& dataset, std::span<const RecordPair> matches, const SweepGrid& grid);

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

struct CompareConfig {
  std::vector<LshShape> points;
  unsigned shingle_k = 3;
  std::uint64_t seed = 1;
  std::size_t replicates = 1;  // seeds seed, seed+1, ...
  std::size_t bfs_max_vertices = 0;  // 0 selects M
  std::size_t bucket_cap = 2000;
  MinHashBackend backend = MinHashBackend::densified;
  NormalizationPolicy normalization{};
};

// One estimator run at the budget set by the LSH sample of its operating point.
struct CompareRow {
  std::size_t rows = 0;
  std::size_t tables = 0;
  std::uint64_t seed = 0;
  std::string method;
  std::uint64_t budget = 0;
  std::optional<double> estimate;
  std::optional<double> relative_error;
  bool degenerate = false;
  std::string error;
};

// For every point and replicate: LSHE, then the three baselines with the
// same number of labeled pairs. `true_count` enables relative errors.
std::vector<CompareRow> compare(std::span<const ShingleSet> sets, std::span<const RecordPair> recall_matches,
                                const LabelOracle& oracle, std::optional<double> true_count,
                                const CompareConfig& config);

// No timing columns; a fixed-seed run is byte-identical.
void write_compare_csv(std::ostream& out, std::span<const CompareRow> rows);

}  // namespace lshe
