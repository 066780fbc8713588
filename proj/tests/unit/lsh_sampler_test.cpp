#include <gtest/gtest.h>

#include <random>
#include <set>

#include "lshe/lsh_sampler.hpp"
#include "lshe/minhash.hpp"
#include "temp_dir.hpp"

using namespace lshe;

namespace {

std::vector<ShingleSet> random_sets(std::size_t n, std::size_t universe, std::size_t size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, universe - 1);
  std::vector<ShingleSet> out(n);
  for (auto& s : out) {
    s.k = 3;
    while (s.tokens.size() < size) {
      s.tokens.push_back(pick(rng));
      std::sort(s.tokens.begin(), s.tokens.end());
      s.tokens.erase(std::unique(s.tokens.begin(), s.tokens.end()), s.tokens.end());
    }
  }
  return out;
}

// Every pair that agrees on all K values of some table.
std::set<RecordPair> brute_force_pairs(std::span<const MinHashSignature> sigs, LshShape shape) {
  std::set<RecordPair> out;
  for (RecordId a = 0; a < sigs.size(); ++a) {
    for (RecordId b = a + 1; b < sigs.size(); ++b) {
      if (sigs[a].is_sentinel() || sigs[b].is_sentinel()) continue;
      for (std::size_t t = 0; t < shape.tables; ++t) {
        const auto x = sigs[a].table(t);
        const auto y = sigs[b].table(t);
        if (std::equal(x.begin(), x.end(), y.begin())) {
          out.insert({a, b});
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST(BucketKey, OrderSensitive) {
  const std::vector<std::uint64_t> a{1, 2}, b{2, 1};
  EXPECT_NE(bucket_key(a), bucket_key(b));
  EXPECT_EQ(bucket_key(a), bucket_key(std::vector<std::uint64_t>{1, 2}));
}

TEST(LshTables, SingleRecordHasOneBucketPerTable) {
  const LshShape shape{2, 3};
  const Signer signer(MinHashBackend::classical, 1, shape);
  const std::vector<MinHashSignature> sigs{signer.sign(ShingleSet{{1, 2}, 3})};
  const LshTables tables = build_tables(sigs, shape);
  ASSERT_EQ(tables.table_count(), 3u);
  for (std::size_t t = 0; t < 3; ++t) {
    ASSERT_EQ(tables.bucket_count(t), 1u);
    EXPECT_EQ(tables.bucket_at(t, 0).members.size(), 1u);
  }
  EXPECT_EQ(sample_pairs(tables).size(), 0u);
}

TEST(LshTables, IdenticalRecordsShareEveryBucket) {
  const LshShape shape{3, 5};
  const Signer signer(MinHashBackend::densified, 2, shape);
  const std::vector<ShingleSet> sets{ShingleSet{{4, 5, 6}, 3}, ShingleSet{{4, 5, 6}, 3}};
  const auto sigs = signer.sign_all(sets);
  const LshTables tables = build_tables(sigs, shape);
  for (std::size_t t = 0; t < shape.tables; ++t) {
    EXPECT_EQ(tables.find(t, bucket_key(sigs[0].table(t))).size(), 2u);
  }
  const SamplePairSet s = sample_pairs(tables);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_TRUE(s.contains({0, 1}));
}

TEST(LshTables, RejectsShapeMismatch) {
  const Signer signer(MinHashBackend::classical, 1, LshShape{2, 2});
  const std::vector<MinHashSignature> sigs{signer.sign(ShingleSet{{1}, 3})};
  EXPECT_THROW(build_tables(sigs, LshShape{1, 4}), std::invalid_argument);
}

TEST(SamplePairs, EqualsBruteForceCollisions) {
  const auto sets = random_sets(150, 60, 12, 3);
  for (auto backend : {MinHashBackend::classical, MinHashBackend::densified}) {
    for (LshShape shape : {LshShape{1, 3}, LshShape{2, 6}}) {
      const Signer signer(backend, 7, shape);
      const auto sigs = signer.sign_all(sets);
      const SamplePairSet s = sample_pairs(build_tables(sigs, shape));
      const auto expected = brute_force_pairs(sigs, shape);
      EXPECT_EQ(std::set<RecordPair>(s.pairs().begin(), s.pairs().end()), expected);
      EXPECT_TRUE(std::is_sorted(s.pairs().begin(), s.pairs().end()));
      EXPECT_TRUE(std::adjacent_find(s.pairs().begin(), s.pairs().end()) == s.pairs().end());
    }
  }
}

TEST(SamplePairs, StreamingKeysMatchMaterializedSignatures) {
  const auto sets = random_sets(80, 40, 10, 5);
  const LshShape shape{2, 4};
  const Signer signer(MinHashBackend::densified, 3, shape);
  const auto a = sample_pairs(LshTables::from_keys(bucket_keys(sets, signer), shape));
  const auto b = sample_pairs(build_tables(signer.sign_all(sets), shape));
  EXPECT_TRUE(std::equal(a.pairs().begin(), a.pairs().end(), b.pairs().begin(), b.pairs().end()));
}

TEST(SamplePairs, OneBucketOfBRecordsGivesAllPairs) {
  std::vector<ShingleSet> sets(6, ShingleSet{{1, 2, 3}, 3});
  sets.push_back(ShingleSet{{}, 3});
  const LshShape shape{1, 1};
  const Signer signer(MinHashBackend::classical, 1, shape);
  const LshTables tables = LshTables::from_keys(bucket_keys(sets, signer), shape);
  EXPECT_EQ(tables.skipped_records(), 1u);
  EXPECT_EQ(sample_pairs(tables).size(), 15u);
}

TEST(SamplePairs, NeverComputesSimilarity) {
  const auto sets = random_sets(300, 50, 10, 9);
  const auto before = similarity_call_count();
  const LshShape shape{1, 10};
  const Signer signer(MinHashBackend::densified, 1, shape);
  const auto s = sample_pairs(LshTables::from_keys(bucket_keys(sets, signer), shape));
  EXPECT_GT(s.size(), 0u);
  EXPECT_EQ(similarity_call_count(), before);
}

TEST(SamplePairs, CapsMegaBuckets) {
  std::vector<ShingleSet> sets(50, ShingleSet{{1, 2, 3}, 3});
  const LshShape shape{1, 1};
  const Signer signer(MinHashBackend::classical, 1, shape);
  const LshTables tables = LshTables::from_keys(bucket_keys(sets, signer), shape);
  const SamplePairSet s = sample_pairs(tables, SampleOptions{4, 5});
  EXPECT_EQ(s.metadata().capped_buckets, 1u);
  EXPECT_GE(s.size(), 50u * 5 / 2);
  EXPECT_LE(s.size(), 50u * 5);
  const SamplePairSet again = sample_pairs(tables, SampleOptions{4, 5});
  EXPECT_TRUE(std::equal(s.pairs().begin(), s.pairs().end(), again.pairs().begin(), again.pairs().end()));
}

TEST(SamplePairs, MoreTablesNeverShrinkTheSample) {
  const auto sets = random_sets(120, 50, 10, 13);
  std::size_t previous = 0;
  for (std::size_t L : {1, 2, 4, 8, 16}) {
    const LshShape shape{1, L};
    const Signer signer(MinHashBackend::classical, 21, shape);
    const std::size_t m = sample_pairs(LshTables::from_keys(bucket_keys(sets, signer), shape)).size();
    EXPECT_GE(m, previous);
    previous = m;
  }
}

TEST(Recall, FractionOfMatchesSampled) {
  const SamplePairSet s({{0, 1}, {2, 3}}, {});
  const std::vector<RecordPair> all{{0, 1}, {2, 3}};
  const std::vector<RecordPair> half{{0, 1}, {4, 5}};
  const std::vector<RecordPair> none{{4, 5}};
  EXPECT_DOUBLE_EQ(empirical_recall(s, all), 1.0);
  EXPECT_DOUBLE_EQ(empirical_recall(s, half), 0.5);
  EXPECT_DOUBLE_EQ(empirical_recall(s, none), 0.0);
  EXPECT_THROW(empirical_recall(s, {}), std::domain_error);
}

TEST(ReductionRatio, Bounds) {
  EXPECT_DOUBLE_EQ(reduction_ratio(0, 10), 1.0);
  EXPECT_DOUBLE_EQ(reduction_ratio(45, 10), 0.0);
  EXPECT_GE(reduction_ratio(450000, 354996), 0.99999);
  EXPECT_THROW(reduction_ratio(0, 1), std::invalid_argument);
}

TEST(ExportPairs, RoundTrips) {
  TempDir dir;
  const SamplePairSet s({{3, 9}, {0, 1}}, {});
  export_pairs(dir.path("p.csv"), s);
  const auto back = load_pairs(dir.path("p.csv"));
  EXPECT_EQ(back, (std::vector<RecordPair>{{0, 1}, {3, 9}}));
}
