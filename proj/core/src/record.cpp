#include "lshe/record.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "lshe/delimited.hpp"
#include "lshe/hash.hpp"

namespace lshe {

namespace {

std::atomic<std::uint64_t> g_similarity_calls{0};

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

template <typename T>
std::optional<T> parse_integer(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

bool is_word_byte(unsigned char c) {
  // Bytes >= 0x80 belong to multi-byte UTF-8 sequences and are kept verbatim.
  return c >= 0x80 || (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

Dataset::Dataset(std::vector<std::string> schema, std::vector<std::vector<std::string>> rows)
    : schema_(std::move(schema)) {
  if (rows.empty()) throw std::invalid_argument("empty dataset");
  if (rows.size() > std::size_t{0xFFFFFFFFu}) throw std::invalid_argument("too many records");
  records_.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != schema_.size()) {
      throw std::invalid_argument("record " + std::to_string(i) + " has " +
                                  std::to_string(rows[i].size()) + " attributes, schema has " +
                                  std::to_string(schema_.size()));
    }
    records_.push_back(Record{static_cast<RecordId>(i), std::move(rows[i])});
  }
}

std::uint64_t Dataset::pair_count() const noexcept {
  const std::uint64_t m = records_.size();
  return m * (m - 1) / 2;
}

RecordPair RecordPair::canonical(RecordId a, RecordId b) {
  if (a == b) throw std::invalid_argument("self pair (" + std::to_string(a) + ")");
  return a < b ? RecordPair{a, b} : RecordPair{b, a};
}

std::size_t RecordPairHash::operator()(const RecordPair& p) const noexcept {
  return static_cast<std::size_t>(mix64(p.packed()));
}

LabeledPairs LabeledPairs::from_rows(std::span<const Row> rows,
                                     std::optional<std::size_t> record_count) {
  LabeledPairs out;
  out.pairs_.reserve(rows.size());
  for (const Row& row : rows) {
    if (record_count && (row.a >= *record_count || row.b >= *record_count)) {
      throw std::invalid_argument("pair (" + std::to_string(row.a) + "," + std::to_string(row.b) +
                                  ") out of range for " + std::to_string(*record_count) +
                                  " records");
    }
    out.pairs_.push_back({RecordPair::canonical(row.a, row.b), row.label});
  }
  std::sort(out.pairs_.begin(), out.pairs_.end(),
            [](const LabeledPair& x, const LabeledPair& y) { return x.pair < y.pair; });
  std::vector<LabeledPair> unique;
  unique.reserve(out.pairs_.size());
  for (const LabeledPair& lp : out.pairs_) {
    if (!unique.empty() && unique.back().pair == lp.pair) {
      if (unique.back().label != lp.label) {
        throw std::invalid_argument("conflicting labels for pair (" +
                                    std::to_string(lp.pair.first) + "," +
                                    std::to_string(lp.pair.second) + ")");
      }
      continue;
    }
    unique.push_back(lp);
  }
  out.pairs_ = std::move(unique);
  return out;
}

std::vector<RecordPair> LabeledPairs::matches() const {
  std::vector<RecordPair> out;
  for (const LabeledPair& lp : pairs_) {
    if (lp.label == Label::match) out.push_back(lp.pair);
  }
  return out;
}

std::size_t LabeledPairs::match_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      pairs_.begin(), pairs_.end(), [](const LabeledPair& lp) { return lp.label == Label::match; }));
}

std::optional<Label> LabeledPairs::find(RecordPair pair) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), pair,
                             [](const LabeledPair& lp, const RecordPair& p) { return lp.pair < p; });
  if (it == pairs_.end() || it->pair != pair) return std::nullopt;
  return it->label;
}

Dataset load_records(const std::filesystem::path& path, const RecordFileOptions& options) {
  auto in = open_input(path);
  DelimitedReader reader(in, options.delimiter);
  DelimitedRow header;
  if (!reader.next(header)) throw std::runtime_error(path.string() + ": empty file");

  std::vector<std::size_t> columns;
  std::vector<std::string> schema;
  if (options.attribute_columns.empty()) {
    for (std::size_t c = 0; c < header.cells.size(); ++c) {
      const auto& name = header.cells[c];
      if (std::find(options.exclude_columns.begin(), options.exclude_columns.end(), name) ==
          options.exclude_columns.end()) {
        columns.push_back(c);
        schema.push_back(name);
      }
    }
  } else {
    for (const auto& name : options.attribute_columns) {
      auto it = std::find(header.cells.begin(), header.cells.end(), name);
      if (it == header.cells.end()) {
        throw std::runtime_error(path.string() + ": column '" + name + "' not in header");
      }
      columns.push_back(static_cast<std::size_t>(it - header.cells.begin()));
      schema.push_back(name);
    }
  }

  std::vector<std::vector<std::string>> rows;
  DelimitedRow row;
  while (reader.next(row)) {
    if (row.cells.size() != header.cells.size()) {
      throw std::runtime_error(path.string() + ": " + at_line(row.line) + "expected " +
                               std::to_string(header.cells.size()) + " columns, found " +
                               std::to_string(row.cells.size()));
    }
    std::vector<std::string> attributes;
    attributes.reserve(columns.size());
    for (std::size_t c : columns) attributes.push_back(std::move(row.cells[c]));
    rows.push_back(std::move(attributes));
  }
  if (rows.empty()) throw std::runtime_error(path.string() + ": empty dataset");
  return Dataset(std::move(schema), std::move(rows));
}

std::vector<std::uint32_t> load_entity_ids(const std::filesystem::path& path,
                                           std::string_view column, char delimiter) {
  auto in = open_input(path);
  DelimitedReader reader(in, delimiter);
  DelimitedRow header;
  if (!reader.next(header)) throw std::runtime_error(path.string() + ": empty file");
  auto it = std::find(header.cells.begin(), header.cells.end(), column);
  if (it == header.cells.end()) {
    throw std::runtime_error(path.string() + ": column '" + std::string(column) + "' not in header");
  }
  const auto index = static_cast<std::size_t>(it - header.cells.begin());

  std::unordered_map<std::string, std::uint32_t> dense;
  std::vector<std::uint32_t> ids;
  DelimitedRow row;
  while (reader.next(row)) {
    if (row.cells.size() != header.cells.size()) {
      throw std::runtime_error(path.string() + ": " + at_line(row.line) + "expected " +
                               std::to_string(header.cells.size()) + " columns, found " +
                               std::to_string(row.cells.size()));
    }
    auto [pos, inserted] =
        dense.try_emplace(row.cells[index], static_cast<std::uint32_t>(dense.size()));
    ids.push_back(pos->second);
  }
  if (ids.empty()) throw std::runtime_error(path.string() + ": empty dataset");
  return ids;
}

LabeledPairs load_labeled_pairs(const std::filesystem::path& path,
                                std::optional<std::size_t> record_count, char delimiter) {
  auto in = open_input(path);
  DelimitedReader reader(in, delimiter);
  std::vector<LabeledPairs::Row> rows;
  DelimitedRow row;
  bool first = true;
  while (reader.next(row)) {
    const bool header_row = first && !row.cells.empty() && !parse_integer<RecordId>(row.cells[0]);
    first = false;
    if (header_row) continue;
    if (row.cells.size() != 3) {
      throw std::runtime_error(path.string() + ": " + at_line(row.line) + "expected id_a,id_b,label");
    }
    auto a = parse_integer<RecordId>(row.cells[0]);
    auto b = parse_integer<RecordId>(row.cells[1]);
    auto label = parse_integer<int>(row.cells[2]);
    if (!a || !b) throw std::runtime_error(path.string() + ": " + at_line(row.line) + "bad record id");
    if (!label || (*label != 0 && *label != 1)) {
      throw std::runtime_error(path.string() + ": " + at_line(row.line) + "label must be 0 or 1");
    }
    if (*a == *b) {
      throw std::runtime_error(path.string() + ": " + at_line(row.line) + "self pair");
    }
    rows.push_back({*a, *b, *label == 1 ? Label::match : Label::non_match});
  }
  return LabeledPairs::from_rows(rows, record_count);
}

void write_records(const std::filesystem::path& path, const Dataset& dataset,
                   std::span<const std::uint32_t> entity_ids, std::string_view entity_column,
                   char delimiter) {
  if (!entity_ids.empty() && entity_ids.size() != dataset.size()) {
    throw std::invalid_argument("entity id count does not match dataset size");
  }
  auto out = open_output(path);
  const auto& schema = dataset.schema();
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (c) out << delimiter;
    out << quote_cell(schema[c], delimiter);
  }
  if (!entity_ids.empty()) out << delimiter << quote_cell(entity_column, delimiter);
  out << '\n';
  for (const Record& r : dataset.records()) {
    for (std::size_t c = 0; c < r.attributes.size(); ++c) {
      if (c) out << delimiter;
      out << quote_cell(r.attributes[c], delimiter);
    }
    if (!entity_ids.empty()) out << delimiter << entity_ids[r.id];
    out << '\n';
  }
}

void write_labeled_pairs(const std::filesystem::path& path, const LabeledPairs& pairs,
                         char delimiter) {
  auto out = open_output(path);
  out << "id_a" << delimiter << "id_b" << delimiter << "label\n";
  for (const LabeledPair& lp : pairs.pairs()) {
    out << lp.pair.first << delimiter << lp.pair.second << delimiter
        << (lp.label == Label::match ? 1 : 0) << '\n';
  }
}

LabeledPairs matches_from_entity_ids(std::span<const std::uint32_t> entity_ids) {
  std::unordered_map<std::uint32_t, std::vector<RecordId>> members;
  for (std::size_t i = 0; i < entity_ids.size(); ++i) {
    members[entity_ids[i]].push_back(static_cast<RecordId>(i));
  }
  std::vector<LabeledPairs::Row> rows;
  for (const auto& [entity, ids] : members) {
    for (std::size_t x = 0; x < ids.size(); ++x) {
      for (std::size_t y = x + 1; y < ids.size(); ++y) rows.push_back({ids[x], ids[y], Label::match});
    }
  }
  return LabeledPairs::from_rows(rows, entity_ids.size());
}

std::string record_string(const Record& record, const NormalizationPolicy& policy) {
  // Words are maximal runs of non-space bytes; a word that is empty after
  // stripping disappears along with its separator.
  std::string out;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    if (!out.empty()) out.push_back(policy.separator);
    out += word;
    word.clear();
  };
  for (const std::string& attribute : record.attributes) {
    for (unsigned char c : attribute) {
      if (is_space(c)) {
        flush();
        continue;
      }
      if (policy.strip_punctuation && !is_word_byte(c)) continue;
      if (policy.uppercase && c >= 'a' && c <= 'z') c = static_cast<unsigned char>(c - 'a' + 'A');
      word.push_back(static_cast<char>(c));
    }
    flush();
  }
  return out;
}

std::uint64_t token_id(std::string_view kgram) noexcept { return hash_bytes(kgram, kTokenSeed); }

ShingleSet shingle(std::string_view text, unsigned k) {
  if (k == 0) throw std::invalid_argument("shingle length must be >= 1");
  ShingleSet out;
  out.k = k;
  if (text.size() < k) return out;
  out.tokens.reserve(text.size() - k + 1);
  for (std::size_t i = 0; i + k <= text.size(); ++i) out.tokens.push_back(token_id(text.substr(i, k)));
  std::sort(out.tokens.begin(), out.tokens.end());
  out.tokens.erase(std::unique(out.tokens.begin(), out.tokens.end()), out.tokens.end());
  return out;
}

double jaccard(const ShingleSet& a, const ShingleSet& b) {
  g_similarity_calls.fetch_add(1, std::memory_order_relaxed);
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  auto x = a.tokens.begin();
  auto y = b.tokens.begin();
  while (x != a.tokens.end() && y != b.tokens.end()) {
    if (*x < *y) {
      ++x;
    } else if (*y < *x) {
      ++y;
    } else {
      ++common;
      ++x;
      ++y;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

std::uint64_t similarity_call_count() noexcept {
  return g_similarity_calls.load(std::memory_order_relaxed);
}

std::vector<ShingleSet> shingle_dataset(const Dataset& dataset, unsigned k,
                                        const NormalizationPolicy& policy) {
  std::vector<ShingleSet> out;
  out.reserve(dataset.size());
  for (const Record& r : dataset.records()) out.push_back(shingle(record_string(r, policy), k));
  return out;
}

}  // namespace lshe
