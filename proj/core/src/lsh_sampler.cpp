#include "lshe/lsh_sampler.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "lshe/delimited.hpp"
#include "lshe/hash.hpp"
#include "lshe/signature_cache.hpp"

namespace lshe {

namespace {

constexpr std::uint64_t kKeySeed = 0x243F6A8885A308D3ull;

void append_record_keys(const MinHashSignature& signature, LshShape shape, BucketKeyMatrix& out) {
  if (signature.shape() != shape) {
    throw std::invalid_argument("signature layout " + std::to_string(signature.shape().rows) + "x" +
                                std::to_string(signature.shape().tables) + " does not match K=" +
                                std::to_string(shape.rows) + ", L=" + std::to_string(shape.tables));
  }
  const bool sentinel = signature.is_sentinel();
  out.sentinel.push_back(sentinel ? 1 : 0);
  for (std::size_t t = 0; t < shape.tables; ++t) {
    out.keys.push_back(sentinel ? 0 : bucket_key(signature.table(t)));
  }
  ++out.records;
}

// Emits pairs between each member and `cap` members drawn without
// replacement, seeded by (seed, table, key, member). Independent of
// processing order.
void emit_capped(std::span<const RecordId> members, std::size_t cap, std::uint64_t seed,
                 std::size_t table, std::uint64_t key, std::vector<std::uint64_t>& out) {
  const std::size_t others = members.size() - 1;
  const std::size_t draw = std::min(cap, others);
  std::vector<std::size_t> chosen;
  std::vector<char> taken(others, 0);
  for (std::size_t x = 0; x < members.size(); ++x) {
    std::mt19937_64 rng(hash_combine(hash_combine(hash_combine(seed, table), key), members[x]));
    // Floyd's algorithm: `draw` distinct indices from [0, others).
    chosen.clear();
    for (std::size_t j = others - draw; j < others; ++j) {
      std::uniform_int_distribution<std::size_t> pick(0, j);
      const std::size_t t = pick(rng);
      const std::size_t c = taken[t] ? j : t;
      taken[c] = 1;
      chosen.push_back(c);
    }
    for (std::size_t idx : chosen) {
      const std::size_t y = idx < x ? idx : idx + 1;  // skip x itself
      out.push_back(RecordPair::canonical(members[x], members[y]).packed());
      taken[idx] = 0;
    }
  }
}

}  // namespace

std::uint64_t bucket_key(std::span<const std::uint64_t> rows) noexcept {
  std::uint64_t h = kKeySeed ^ rows.size();
  for (std::uint64_t v : rows) h = hash_combine(h, v);
  return h;
}

BucketKeyMatrix bucket_keys(std::span<const MinHashSignature> signatures, LshShape shape) {
  BucketKeyMatrix out;
  out.tables = shape.tables;
  out.keys.reserve(signatures.size() * shape.tables);
  out.sentinel.reserve(signatures.size());
  for (const auto& s : signatures) append_record_keys(s, shape, out);
  return out;
}

BucketKeyMatrix bucket_keys(std::span<const ShingleSet> sets, const Signer& signer,
                            SignatureCacheWriter* cache) {
  BucketKeyMatrix out;
  out.tables = signer.shape().tables;
  out.keys.reserve(sets.size() * out.tables);
  out.sentinel.reserve(sets.size());
  for (const ShingleSet& set : sets) {
    const MinHashSignature signature = signer.sign(set);
    if (cache) cache->append(signature);
    append_record_keys(signature, signer.shape(), out);
  }
  return out;
}

LshTables LshTables::build(std::span<const MinHashSignature> signatures, LshShape shape) {
  if (signatures.empty()) throw std::invalid_argument("no records to index");
  return from_keys(bucket_keys(signatures, shape), shape);
}

LshTables LshTables::from_keys(const BucketKeyMatrix& keys, LshShape shape) {
  if (keys.tables != shape.tables) throw std::invalid_argument("key matrix has wrong table count");
  if (keys.records == 0) throw std::invalid_argument("no records to index");
  LshTables out;
  out.shape_ = shape;
  out.record_count_ = keys.records;
  out.skipped_ = static_cast<std::size_t>(std::count(keys.sentinel.begin(), keys.sentinel.end(), 1));
  out.tables_.resize(shape.tables);

  std::vector<std::pair<std::uint64_t, RecordId>> entries;
  entries.reserve(keys.records);
  for (std::size_t t = 0; t < shape.tables; ++t) {
    entries.clear();
    for (std::size_t r = 0; r < keys.records; ++r) {
      if (!keys.sentinel[r]) entries.emplace_back(keys.key(r, t), static_cast<RecordId>(r));
    }
    std::sort(entries.begin(), entries.end());
    Table& table = out.tables_[t];
    table.keys.resize(entries.size());
    table.ids.resize(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      table.keys[i] = entries[i].first;
      table.ids[i] = entries[i].second;
      if (i == 0 || entries[i].first != entries[i - 1].first) table.starts.push_back(i);
    }
    table.starts.push_back(entries.size());
  }
  return out;
}

LshTables::Bucket LshTables::bucket_at(std::size_t table, std::size_t index) const {
  const Table& t = tables_.at(table);
  if (index + 1 >= t.starts.size()) throw std::out_of_range("bucket index");
  const std::size_t begin = t.starts[index];
  const std::size_t end = t.starts[index + 1];
  return {t.keys[begin], std::span<const RecordId>(t.ids).subspan(begin, end - begin)};
}

std::span<const RecordId> LshTables::find(std::size_t table, std::uint64_t key) const {
  const Table& t = tables_.at(table);
  auto [lo, hi] = std::equal_range(t.keys.begin(), t.keys.end(), key);
  const auto begin = static_cast<std::size_t>(lo - t.keys.begin());
  const auto end = static_cast<std::size_t>(hi - t.keys.begin());
  return std::span<const RecordId>(t.ids).subspan(begin, end - begin);
}

LshTables build_tables(std::span<const MinHashSignature> signatures, LshShape shape) {
  return LshTables::build(signatures, shape);
}

SamplePairSet::SamplePairSet(std::vector<RecordPair> pairs, SampleMetadata metadata)
    : pairs_(std::move(pairs)), metadata_(metadata) {
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

bool SamplePairSet::contains(RecordPair pair) const noexcept {
  return std::binary_search(pairs_.begin(), pairs_.end(), pair);
}

SamplePairSet sample_pairs(const LshTables& tables, const SampleOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::uint64_t> packed;
  std::size_t capped = 0;
  for (std::size_t t = 0; t < tables.table_count(); ++t) {
    const std::size_t buckets = tables.bucket_count(t);
    for (std::size_t b = 0; b < buckets; ++b) {
      const auto bucket = tables.bucket_at(t, b);
      const auto& members = bucket.members;
      if (members.size() < 2) continue;
      if (options.bucket_cap > 0 && members.size() > options.bucket_cap) {
        ++capped;
        spdlog::warn("table {}: bucket of {} records capped at {} partners per record", t,
                     members.size(), options.bucket_cap);
        emit_capped(members, options.bucket_cap, options.seed, t, bucket.key, packed);
        continue;
      }
      // Members are sorted by id within a bucket, so (x, y) is already canonical.
      for (std::size_t x = 0; x < members.size(); ++x) {
        for (std::size_t y = x + 1; y < members.size(); ++y) {
          packed.push_back(RecordPair{members[x], members[y]}.packed());
        }
      }
    }
  }
  std::sort(packed.begin(), packed.end());
  packed.erase(std::unique(packed.begin(), packed.end()), packed.end());
  std::vector<RecordPair> pairs;
  pairs.reserve(packed.size());
  for (std::uint64_t p : packed) pairs.push_back(RecordPair::unpack(p));

  SampleMetadata meta;
  meta.shape = tables.shape();
  meta.seed = options.seed;
  meta.capped_buckets = capped;
  meta.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return SamplePairSet(std::move(pairs), meta);
}

double empirical_recall(const SamplePairSet& sample, std::span<const RecordPair> matches) {
  if (matches.empty()) throw std::domain_error("p undefined: no labeled match pairs");
  std::size_t hit = 0;
  for (const RecordPair& m : matches) hit += sample.contains(m) ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(matches.size());
}

double reduction_ratio(std::uint64_t sample_size, std::uint64_t record_count) {
  if (record_count < 2) throw std::invalid_argument("reduction ratio needs at least two records");
  const double total = static_cast<double>(record_count) * static_cast<double>(record_count - 1) / 2.0;
  return 1.0 - static_cast<double>(sample_size) / total;
}

void export_pairs(const std::filesystem::path& path, const SamplePairSet& sample, char delimiter) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const RecordPair& p : sample.pairs()) out << p.first << delimiter << p.second << '\n';
}

std::vector<RecordPair> load_pairs(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  DelimitedReader reader(in, delimiter);
  DelimitedRow row;
  std::vector<RecordPair> out;
  while (reader.next(row)) {
    if (row.cells.size() != 2) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(row.line) + ": expected id_a,id_b");
    }
    RecordId ids[2];
    for (int i = 0; i < 2; ++i) {
      const auto& c = row.cells[i];
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), ids[i]);
      if (ec != std::errc{} || ptr != c.data() + c.size()) {
        throw std::runtime_error(path.string() + ": line " + std::to_string(row.line) + ": bad record id");
      }
    }
    out.push_back(RecordPair::canonical(ids[0], ids[1]));
  }
  return out;
}

}  // namespace lshe
