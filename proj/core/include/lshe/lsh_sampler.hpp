#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lshe/minhash.hpp"
#include "lshe/record.hpp"

namespace lshe {

class SignatureCacheWriter;

// Order-sensitive 64-bit digest of one table's K minhash values.
std::uint64_t bucket_key(std::span<const std::uint64_t> rows) noexcept;

// L bucket keys per record, record-major. Sentinel records carry no keys and
// are never inserted into a table.
struct BucketKeyMatrix {
  std::size_t records = 0;
  std::size_t tables = 0;
  std::vector<std::uint64_t> keys;
  std::vector<char> sentinel;

  std::uint64_t key(std::size_t record, std::size_t table) const { return keys[record * tables + table]; }
};

BucketKeyMatrix bucket_keys(std::span<const MinHashSignature> signatures, LshShape shape);

// Signs and digests records one at a time, so the full M*K*L signature
// matrix is never resident. Optionally streams every signature to `cache`.
BucketKeyMatrix bucket_keys(std::span<const ShingleSet> sets, const Signer& signer,
                            SignatureCacheWriter* cache = nullptr);

// L hash tables. Each table stores its (key, record) entries sorted by key,
// so a bucket is a contiguous run of record ids.
class LshTables {
 public:
  struct Bucket {
    std::uint64_t key;
    std::span<const RecordId> members;
  };

  // Throws std::invalid_argument if a signature's shape differs from `shape`.
  static LshTables build(std::span<const MinHashSignature> signatures, LshShape shape);
  static LshTables from_keys(const BucketKeyMatrix& keys, LshShape shape);

  LshShape shape() const noexcept { return shape_; }
  std::size_t table_count() const noexcept { return tables_.size(); }
  std::size_t record_count() const noexcept { return record_count_; }
  std::size_t skipped_records() const noexcept { return skipped_; }

  std::size_t bucket_count(std::size_t table) const { return tables_.at(table).starts.size() - 1; }
  Bucket bucket_at(std::size_t table, std::size_t index) const;
  // Members of the bucket with this key; empty if absent.
  std::span<const RecordId> find(std::size_t table, std::uint64_t key) const;

 private:
  struct Table {
    std::vector<std::uint64_t> keys;  // sorted
    std::vector<RecordId> ids;        // parallel to keys
    std::vector<std::size_t> starts;  // bucket boundaries, plus a final end
  };

  LshShape shape_;
  std::size_t record_count_ = 0;
  std::size_t skipped_ = 0;
  std::vector<Table> tables_;
};

LshTables build_tables(std::span<const MinHashSignature> signatures, LshShape shape);

struct SampleOptions {
  std::uint64_t seed = 0;
  // Buckets larger than this emit only member-to-random-subset pairs.
  std::size_t bucket_cap = 2000;
};

struct SampleMetadata {
  LshShape shape;
  std::uint64_t seed = 0;
  double elapsed_ms = 0.0;
  std::size_t capped_buckets = 0;
};

// Sorted, duplicate-free candidate pairs.
class SamplePairSet {
 public:
  SamplePairSet() = default;
  SamplePairSet(std::vector<RecordPair> pairs, SampleMetadata metadata);

  std::span<const RecordPair> pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool contains(RecordPair pair) const noexcept;
  const SampleMetadata& metadata() const noexcept { return metadata_; }

 private:
  std::vector<RecordPair> pairs_;
  SampleMetadata metadata_;
};

SamplePairSet sample_pairs(const LshTables& tables, const SampleOptions& options = {});

// |matches ∩ S| / |matches|. Throws std::domain_error ("p undefined") when
// there are no matches.
double empirical_recall(const SamplePairSet& sample, std::span<const RecordPair> matches);

// 1 - m / C(M, 2). Requires M >= 2.
double reduction_ratio(std::uint64_t sample_size, std::uint64_t record_count);

// `id_a,id_b` per line, sorted, no header.
void export_pairs(const std::filesystem::path& path, const SamplePairSet& sample, char delimiter = ',');
std::vector<RecordPair> load_pairs(const std::filesystem::path& path, char delimiter = ',');

}  // namespace lshe
