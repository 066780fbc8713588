#include <gtest/gtest.h>

#include <sstream>

#include "lshe/delimited.hpp"
#include "lshe/record.hpp"
#include "temp_dir.hpp"

using namespace lshe;

namespace {

Record rec(std::vector<std::string> attributes) { return Record{0, std::move(attributes)}; }

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Dataset, AssignsIdsInRowOrder) {
  Dataset ds({"a", "b"}, {{"x", "1"}, {"y", "2"}, {"z", "3"}});
  ASSERT_EQ(ds.size(), 3u);
  for (RecordId i = 0; i < 3; ++i) EXPECT_EQ(ds[i].id, i);
  EXPECT_EQ(ds[2].attributes[0], "z");
  EXPECT_EQ(ds.pair_count(), 3u);
}

TEST(Dataset, RejectsEmptyAndRaggedRows) {
  EXPECT_THROW(Dataset({"a"}, {}), std::invalid_argument);
  EXPECT_THROW(Dataset({"a", "b"}, {{"x"}}), std::invalid_argument);
}

TEST(LoadRecords, ReadsHeaderAndSelectsColumns) {
  TempDir dir;
  const auto path = dir.file("r.csv", "name,city,entity\n\"Baker, Ted\",Austin,7\nSammy,\"New\nYork\",8\nAl,Reno,7\n");
  RecordFileOptions opts;
  opts.exclude_columns = {"entity"};
  const Dataset ds = load_records(path, opts);
  ASSERT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.schema(), (std::vector<std::string>{"name", "city"}));
  EXPECT_EQ(ds[0].attributes[0], "Baker, Ted");
  EXPECT_EQ(ds[1].attributes[1], "New\nYork");

  opts.attribute_columns = {"city"};
  EXPECT_EQ(load_records(path, opts)[2].attributes, std::vector<std::string>{"Reno"});

  const auto ids = load_entity_ids(path, "entity");
  EXPECT_EQ(ids, (std::vector<std::uint32_t>{0, 1, 0}));
}

TEST(LoadRecords, HeaderOnlyIsEmptyDataset) {
  TempDir dir;
  const auto path = dir.file("h.csv", "name,city\n");
  EXPECT_NE(error_of([&] { load_records(path, {}); }).find("empty dataset"), std::string::npos);
  EXPECT_NE(error_of([&] { load_records(dir.file("e.csv", ""), {}); }).find("empty file"), std::string::npos);
}

TEST(LoadRecords, ArityErrorNamesTheLine) {
  TempDir dir;
  const auto path = dir.file("bad.csv", "a,b\n1,2\n3\n");
  EXPECT_NE(error_of([&] { load_records(path, {}); }).find("line 3"), std::string::npos);
}

TEST(LoadRecords, HandlesCrlfAndBom) {
  TempDir dir;
  const auto path = dir.file("w.csv", "\xEF\xBB\xBFname,city\r\nA,B\r\n\r\nC,D\r\n");
  const Dataset ds = load_records(path, {});
  EXPECT_EQ(ds.schema()[0], "name");
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[1].attributes[1], "D");
}

TEST(Delimited, QuoteRoundTrip) {
  const std::string cell = "say \"hi\", then\nleave";
  std::istringstream in("x\n" + quote_cell(cell, ',') + "\n");
  DelimitedReader reader(in, ',');
  DelimitedRow row;
  ASSERT_TRUE(reader.next(row));
  ASSERT_TRUE(reader.next(row));
  ASSERT_EQ(row.cells.size(), 1u);
  EXPECT_EQ(row.cells[0], cell);
  EXPECT_EQ(quote_cell("plain", ','), "plain");
}

TEST(LabeledPairs, CanonicalizesAndDeduplicates) {
  const std::vector<LabeledPairs::Row> rows{{2, 1, Label::match}, {1, 2, Label::match}};
  const LabeledPairs lp = LabeledPairs::from_rows(rows);
  ASSERT_EQ(lp.size(), 1u);
  EXPECT_EQ(lp.pairs()[0].pair, (RecordPair{1, 2}));
  EXPECT_EQ(lp.find({1, 2}), Label::match);
  EXPECT_FALSE(lp.find({0, 2}).has_value());
}

TEST(LabeledPairs, RejectsSelfConflictAndRange) {
  const std::vector<LabeledPairs::Row> self{{5, 5, Label::match}};
  EXPECT_NE(error_of([&] { LabeledPairs::from_rows(self); }).find("self pair"), std::string::npos);
  const std::vector<LabeledPairs::Row> conflict{{1, 2, Label::match}, {2, 1, Label::non_match}};
  EXPECT_THROW(LabeledPairs::from_rows(conflict), std::invalid_argument);
  const std::vector<LabeledPairs::Row> range{{1, 9, Label::match}};
  EXPECT_THROW(LabeledPairs::from_rows(range, 5), std::invalid_argument);
}

TEST(LabeledPairs, FileLoaderReportsLine) {
  TempDir dir;
  const auto ok = dir.file("t.csv", "id_a,id_b,label\n2,1,1\n1,2,1\n0,3,0\n");
  const LabeledPairs lp = load_labeled_pairs(ok, 4);
  EXPECT_EQ(lp.size(), 2u);
  EXPECT_EQ(lp.match_count(), 1u);
  const auto bad = dir.file("s.csv", "0,1,1\n5,5,1\n");
  const std::string msg = error_of([&] { load_labeled_pairs(bad); });
  EXPECT_NE(msg.find("self pair"), std::string::npos);
  EXPECT_NE(msg.find("line 2"), std::string::npos);
}

TEST(LabeledPairs, MatchesFromEntityIds) {
  const std::vector<std::uint32_t> ids{0, 1, 0, 2, 0};
  const LabeledPairs lp = matches_from_entity_ids(ids);
  EXPECT_EQ(lp.size(), 3u);
  EXPECT_EQ(lp.match_count(), 3u);
}

TEST(RecordIo, WriteThenLoadRoundTrips) {
  TempDir dir;
  Dataset ds({"name", "note"}, {{"a,b", "x\"y"}, {"", "line\nbreak"}});
  const std::vector<std::uint32_t> ids{4, 4};
  write_records(dir.path("o.csv"), ds, ids);
  RecordFileOptions opts;
  opts.exclude_columns = {"entity_id"};
  const Dataset back = load_records(dir.path("o.csv"), opts);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].attributes, ds[0].attributes);
  EXPECT_EQ(back[1].attributes, ds[1].attributes);
  EXPECT_EQ(load_entity_ids(dir.path("o.csv"), "entity_id"), (std::vector<std::uint32_t>{0, 0}));
}

TEST(RecordString, NormalizesCaseAndPunctuation) {
  EXPECT_EQ(record_string(rec({"BAKER", "TED"})), "BAKER TED");
  EXPECT_EQ(record_string(rec({"Sammy, Smith"})), "SAMMY SMITH");
  EXPECT_EQ(record_string(rec({"", ""})), "");
  EXPECT_EQ(record_string(rec({"  a   b ", "-", "c"})), "A B C");
  NormalizationPolicy keep;
  keep.uppercase = false;
  keep.strip_punctuation = false;
  keep.separator = '|';
  EXPECT_EQ(record_string(rec({"a.b", "c"}), keep), "a.b|c");
}

TEST(RecordString, KeepsNonAsciiBytes) {
  EXPECT_EQ(record_string(rec({"caf\xC3\xA9"})), "CAF\xC3\xA9");
}

TEST(Shingle, EnumeratesDistinctKgrams) {
  const ShingleSet s = shingle("BAKERTED", 2);
  EXPECT_EQ(s.size(), 7u);
  EXPECT_EQ(s.k, 2u);
  EXPECT_EQ(shingle("AAAA", 2).size(), 1u);
  EXPECT_TRUE(shingle("AB", 3).empty());
  EXPECT_THROW(shingle("ABC", 0), std::invalid_argument);
  EXPECT_TRUE(std::is_sorted(s.tokens.begin(), s.tokens.end()));
  const ShingleSet t = shingle("BAKERTED", 2);
  EXPECT_EQ(s, t);
}

TEST(Jaccard, MatchesDefinition) {
  const ShingleSet a{{1, 2, 3}, 1};
  const ShingleSet b{{2, 3, 4}, 1};
  EXPECT_DOUBLE_EQ(jaccard(a, b), 0.5);
  EXPECT_DOUBLE_EQ(jaccard(a, a), 1.0);
  EXPECT_DOUBLE_EQ(jaccard(a, ShingleSet{{7, 8}, 1}), 0.0);
  EXPECT_DOUBLE_EQ(jaccard(ShingleSet{}, ShingleSet{}), 1.0);
  const auto before = similarity_call_count();
  jaccard(a, b);
  EXPECT_EQ(similarity_call_count(), before + 1);
}
