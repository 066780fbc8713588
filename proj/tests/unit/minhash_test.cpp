#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "lshe/hash.hpp"
#include "lshe/lsh_sampler.hpp"
#include "lshe/minhash.hpp"
#include "lshe/signature_cache.hpp"
#include "temp_dir.hpp"

using namespace lshe;

namespace {

// Sets sharing `common` tokens and each holding `own` private ones.
std::pair<ShingleSet, ShingleSet> overlapping(std::size_t common, std::size_t own, std::uint64_t salt) {
  ShingleSet a, b;
  a.k = b.k = 3;
  for (std::size_t i = 0; i < common; ++i) {
    a.tokens.push_back(hash_combine(hash_combine(salt, 0), i));
    b.tokens.push_back(hash_combine(hash_combine(salt, 0), i));
  }
  for (std::size_t i = 0; i < own; ++i) {
    a.tokens.push_back(hash_combine(hash_combine(salt, 1), i));
    b.tokens.push_back(hash_combine(hash_combine(salt, 2), i));
  }
  std::sort(a.tokens.begin(), a.tokens.end());
  std::sort(b.tokens.begin(), b.tokens.end());
  return {a, b};
}

}  // namespace

TEST(Hash, MurmurIsStableAndSeeded) {
  EXPECT_EQ(hash_bytes("abc", 1), hash_bytes("abc", 1));
  EXPECT_NE(hash_bytes("abc", 1), hash_bytes("abc", 2));
  EXPECT_NE(hash_bytes("abc", 1), hash_bytes("abd", 1));
  EXPECT_NE(hash_bytes("", 1), hash_bytes("", 2));
  for (std::uint64_t h : {0ull, 1ull, ~0ull, 0x8000000000000000ull}) EXPECT_LT(fast_range(h, 7), 7u);
}

TEST(HashFamily, DeterministicAndSeedSeparated) {
  const HashFamily a({1, 2}), b({1, 2}), c({2, 2});
  EXPECT_TRUE(std::equal(a.parameters().begin(), a.parameters().end(), b.parameters().begin()));
  EXPECT_FALSE(std::equal(a.parameters().begin(), a.parameters().end(), c.parameters().begin()));
  EXPECT_EQ(HashFamily({7, 150}).size(), 150u);
  const HashFamily odd({3, 64});
  for (const auto& p : odd.parameters()) EXPECT_EQ(p.multiplier & 1u, 1u);
  EXPECT_THROW(HashFamily({1, 0}), std::invalid_argument);
}

TEST(SignatureClassical, SingletonSetTakesEachHash) {
  const LshShape shape{3, 4};
  const HashFamily family({9, shape.hash_count()});
  const ShingleSet s{{42}, 3};
  const MinHashSignature sig = signature_classical(s, family, shape);
  for (std::size_t t = 0; t < 4; ++t) {
    for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(sig.at(t, r), family(t * 3 + r, 42));
  }
  EXPECT_THROW(signature_classical(ShingleSet{{}, 3}, family, shape), std::domain_error);
}

TEST(SignatureClassical, CollisionRateEqualsJaccard) {
  // J = 40 / (40 + 2*30) = 0.4
  const auto [a, b] = overlapping(40, 30, 5);
  const double j = 0.4;
  const LshShape shape{1, 10000};
  const HashFamily family({17, shape.hash_count()});
  const auto sa = signature_classical(a, family, shape);
  const auto sb = signature_classical(b, family, shape);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < shape.hash_count(); ++i) agree += sa.values()[i] == sb.values()[i];
  const double rate = static_cast<double>(agree) / 10000.0;
  EXPECT_NEAR(rate, j, 3.0 * std::sqrt(j * (1 - j) / 10000.0));
}

TEST(SignatureDensified, DeterministicAndDenseForLargeSets) {
  const auto [a, b] = overlapping(2000, 0, 11);
  const LshShape shape{4, 25};
  DensifiedStats stats;
  const auto s1 = signature_oph_densified(a, 3, shape, &stats);
  EXPECT_EQ(s1, signature_oph_densified(a, 3, shape));
  EXPECT_NE(s1, signature_oph_densified(a, 4, shape));
  EXPECT_EQ(stats.token_hashes, a.size());
  EXPECT_EQ(stats.empty_bins, 0u);
  EXPECT_THROW(signature_oph_densified(ShingleSet{{}, 3}, 1, shape), std::domain_error);
}

TEST(SignatureDensified, SparseSetsGetEveryBinFilled) {
  const ShingleSet s{{5, 9}, 3};
  DensifiedStats stats;
  const auto sig = signature_oph_densified(s, 1, LshShape{2, 50}, &stats);
  EXPECT_GE(stats.empty_bins, 98u);
  EXPECT_FALSE(sig.is_sentinel());
  for (std::uint64_t v : sig.values()) EXPECT_NE(v, MinHashSignature::kSentinelValue);
}

TEST(SignatureDensified, CollisionRateTracksClassical) {
  const auto [a, b] = overlapping(50, 25, 23);  // J = 0.5
  const LshShape shape{1, 100};
  std::size_t dense = 0, classical = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto da = signature_oph_densified(a, seed, shape);
    const auto db = signature_oph_densified(b, seed, shape);
    const HashFamily family({seed, shape.hash_count()});
    const auto ca = signature_classical(a, family, shape);
    const auto cb = signature_classical(b, family, shape);
    for (std::size_t i = 0; i < shape.hash_count(); ++i) {
      dense += da.values()[i] == db.values()[i];
      classical += ca.values()[i] == cb.values()[i];
      ++total;
    }
  }
  EXPECT_NEAR(static_cast<double>(dense) / total, static_cast<double>(classical) / total, 0.03);
}

TEST(Signer, EmptySetsGetSentinel) {
  for (auto backend : {MinHashBackend::classical, MinHashBackend::densified}) {
    const Signer signer(backend, 1, LshShape{2, 3});
    EXPECT_TRUE(signer.sign(ShingleSet{{}, 3}).is_sentinel());
    EXPECT_FALSE(signer.sign(ShingleSet{{1, 2, 3}, 3}).is_sentinel());
    const std::vector<ShingleSet> sets{ShingleSet{{1}, 3}, ShingleSet{{1}, 3}};
    const auto sigs = signer.sign_all(sets);
    EXPECT_EQ(sigs[0], sigs[1]);
  }
}

TEST(MinHashSignature, ValidatesLength) {
  EXPECT_THROW(MinHashSignature(LshShape{2, 2}, std::vector<std::uint64_t>(3)), std::invalid_argument);
  const auto s = MinHashSignature::sentinel(LshShape{2, 2});
  EXPECT_TRUE(s.is_sentinel());
  EXPECT_EQ(s.table(1).size(), 2u);
}

TEST(RetrievalProbability, ClosedForm) {
  EXPECT_DOUBLE_EQ(retrieval_probability(1.0, 7, 3), 1.0);
  EXPECT_DOUBLE_EQ(retrieval_probability(0.3, 1, 1), 0.3);
  EXPECT_DOUBLE_EQ(retrieval_probability(0.5, 2, 4), 0.68359375);
  EXPECT_DOUBLE_EQ(retrieval_probability(0.0, 2, 4), 0.0);
  EXPECT_THROW(retrieval_probability(1.5, 1, 1), std::invalid_argument);
  EXPECT_THROW(retrieval_probability(0.5, 0, 1), std::invalid_argument);
}

TEST(SignatureCache, RoundTripsAndStreamsIdentically) {
  TempDir dir;
  const LshShape shape{3, 2};
  const Signer signer(MinHashBackend::densified, 5, shape);
  const std::vector<ShingleSet> sets{ShingleSet{{1, 2, 3}, 3}, ShingleSet{{}, 3}, ShingleSet{{4, 9}, 3}};
  const auto sigs = signer.sign_all(sets);
  write_signature_cache(dir.path("a.sig"), sigs, 5);
  const SignatureCache back = read_signature_cache(dir.path("a.sig"));
  EXPECT_EQ(back.shape, shape);
  EXPECT_EQ(back.seed, 5u);
  EXPECT_EQ(back.signatures, sigs);

  SignatureCacheWriter writer(dir.path("b.sig"), sets.size(), shape, 5);
  const BucketKeyMatrix keys = bucket_keys(sets, signer, &writer);
  writer.close();
  EXPECT_EQ(read_signature_cache(dir.path("b.sig")).signatures, sigs);
  EXPECT_EQ(keys.sentinel[1], 1);

  dir.file("bad.sig", "not a cache");
  EXPECT_THROW(read_signature_cache(dir.path("bad.sig")), std::runtime_error);
}
