#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lshe {

using RecordId = std::uint32_t;

struct Record {
  RecordId id = 0;
  std::vector<std::string> attributes;  // empty string = missing value
};

// Records with dense ids 0..M-1 in row order. Every record carries exactly
// schema().size() attributes.
class Dataset {
 public:
  Dataset(std::vector<std::string> schema, std::vector<std::vector<std::string>> rows);

  const std::vector<std::string>& schema() const noexcept { return schema_; }
  std::span<const Record> records() const noexcept { return records_; }
  const Record& operator[](RecordId id) const { return records_.at(id); }
  std::size_t size() const noexcept { return records_.size(); }

  // C(M, 2)
  std::uint64_t pair_count() const noexcept;

 private:
  std::vector<std::string> schema_;
  std::vector<Record> records_;
};

// Unordered record pair stored smaller id first.
struct RecordPair {
  RecordId first = 0;
  RecordId second = 0;

  // Throws std::invalid_argument on a self pair.
  static RecordPair canonical(RecordId a, RecordId b);

  std::uint64_t packed() const noexcept {
    return (static_cast<std::uint64_t>(first) << 32) | second;
  }
  static RecordPair unpack(std::uint64_t key) noexcept {
    return {static_cast<RecordId>(key >> 32), static_cast<RecordId>(key & 0xFFFFFFFFu)};
  }

  auto operator<=>(const RecordPair&) const = default;
};

struct RecordPairHash {
  std::size_t operator()(const RecordPair& p) const noexcept;
};

enum class Label : std::uint8_t { non_match = 0, match = 1 };

struct LabeledPair {
  RecordPair pair;
  Label label = Label::non_match;
};

// Canonical, duplicate-free labeled pairs sorted by pair.
class LabeledPairs {
 public:
  struct Row {
    RecordId a;
    RecordId b;
    Label label;
  };

  LabeledPairs() = default;

  // Canonicalizes and deduplicates. Throws on self pairs, on ids >= record_count
  // (when given) and on a pair that appears with both labels.
  static LabeledPairs from_rows(std::span<const Row> rows,
                                std::optional<std::size_t> record_count = std::nullopt);

  std::span<const LabeledPair> pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  std::vector<RecordPair> matches() const;
  std::size_t match_count() const noexcept;
  std::optional<Label> find(RecordPair pair) const;

 private:
  std::vector<LabeledPair> pairs_;
};

struct RecordFileOptions {
  // Attribute columns in output order. Empty selects every header column not
  // listed in exclude_columns.
  std::vector<std::string> attribute_columns;
  std::vector<std::string> exclude_columns;
  char delimiter = ',';
};

// Reads a delimited file with a header row. Row order defines record ids.
Dataset load_records(const std::filesystem::path& path, const RecordFileOptions& options);

// Reads one column (typically an entity or cluster id) and maps its distinct
// values to dense integers in first-seen order.
std::vector<std::uint32_t> load_entity_ids(const std::filesystem::path& path,
                                           std::string_view column, char delimiter = ',');

// Rows `id_a,id_b,label` with label in {0,1}; an optional header row is skipped.
LabeledPairs load_labeled_pairs(const std::filesystem::path& path,
                                std::optional<std::size_t> record_count = std::nullopt,
                                char delimiter = ',');

// Writes the dataset with an optional trailing entity-id column named
// `entity_column`.
void write_records(const std::filesystem::path& path, const Dataset& dataset,
                   std::span<const std::uint32_t> entity_ids = {},
                   std::string_view entity_column = "entity_id", char delimiter = ',');

void write_labeled_pairs(const std::filesystem::path& path, const LabeledPairs& pairs,
                         char delimiter = ',');

// Every pair of records sharing an entity id, as labeled matches.
LabeledPairs matches_from_entity_ids(std::span<const std::uint32_t> entity_ids);

struct NormalizationPolicy {
  bool uppercase = true;
  bool strip_punctuation = true;
  char separator = ' ';
};

// Normalizes each attribute, collapses whitespace and joins the non-empty
// attributes with policy.separator.
std::string record_string(const Record& record, const NormalizationPolicy& policy = {});

// Sorted, duplicate-free 64-bit k-gram token ids.
struct ShingleSet {
  std::vector<std::uint64_t> tokens;
  unsigned k = 0;

  std::size_t size() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }
  bool operator==(const ShingleSet&) const = default;
};

std::uint64_t token_id(std::string_view kgram) noexcept;

// Throws std::invalid_argument when k == 0.
ShingleSet shingle(std::string_view text, unsigned k);

// |a ∩ b| / |a ∪ b|; 1 when both are empty.
double jaccard(const ShingleSet& a, const ShingleSet& b);

// Number of jaccard() calls made by this process. Used to check that the
// sampler never compares records.
std::uint64_t similarity_call_count() noexcept;

std::vector<ShingleSet> shingle_dataset(const Dataset& dataset, unsigned k,
                                        const NormalizationPolicy& policy = {});

}  // namespace lshe
