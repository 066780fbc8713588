#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "lshe/baselines.hpp"
#include "lshe/synthetic.hpp"

using namespace lshe;

namespace {

// Counts distinct queries forwarded to the wrapped oracle.
class CountingOracle final : public LabelOracle {
 public:
  explicit CountingOracle(const LabelOracle& inner) : inner_(inner) {}
  Label label(RecordPair pair) const override {
    ++calls;
    return inner_.label(pair);
  }
  std::string_view name() const noexcept override { return "counting"; }
  mutable std::uint64_t calls = 0;

 private:
  const LabelOracle& inner_;
};

struct MeanSe {
  double mean;
  double se;
};

template <class F>
MeanSe monte_carlo(std::size_t reps, F&& estimate) {
  double sum = 0, sum_sq = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const double e = estimate(r);
    sum += e;
    sum_sq += e * e;
  }
  const double n = static_cast<double>(reps);
  const double mean = sum / n;
  return {mean, std::sqrt((sum_sq / n - mean * mean) / (n - 1))};
}

}  // namespace

TEST(Prse, ExhaustiveBudgetIsExact) {
  const std::vector<std::uint32_t> ids{0, 1, 0, 2, 2, 2};
  EntityIdOracle oracle(ids);
  const auto r = prse(6, 15, oracle, 3);
  EXPECT_DOUBLE_EQ(r.p, 1.0);
  EXPECT_DOUBLE_EQ(r.estimate, 3.0);
  EXPECT_EQ(r.budget, 15u);
  EXPECT_EQ(r.method, "prse");
  EXPECT_THROW(prse(6, 16, oracle, 1), std::invalid_argument);
  EXPECT_THROW(prse(6, 0, oracle, 1), std::invalid_argument);
}

TEST(Prse, SinglePairOnThreeRecordsIsUnbiased) {
  // Outcomes: the edge (estimate 0) or either non-edge (estimate 3); mean 2.
  const std::vector<std::uint32_t> ids{0, 0, 1};
  EntityIdOracle oracle(ids);
  std::size_t degenerate = 0;
  const auto mc = monte_carlo(6000, [&](std::size_t r) {
    const auto rep = prse(3, 1, oracle, r);
    EXPECT_TRUE(std::abs(rep.estimate) < 1e-9 || std::abs(rep.estimate - 3.0) < 1e-9);
    degenerate += rep.degenerate;
    return rep.estimate;
  });
  EXPECT_NEAR(mc.mean, 2.0, 4 * mc.se);
  EXPECT_NEAR(static_cast<double>(degenerate) / 6000.0, 2.0 / 3.0, 0.03);
}

TEST(BfsVertex, EdgelessAndSingleClique) {
  const std::vector<std::uint32_t> distinct{0, 1, 2, 3, 4, 5, 6};
  EntityIdOracle none(distinct);
  EXPECT_DOUBLE_EQ(bfse_vertex_bfs(7, 100, none, 3, 1).estimate, 7.0);
  const std::vector<std::uint32_t> same(7, 0);
  EntityIdOracle all(same);
  const auto r = bfse_vertex_bfs(7, 100, all, 1, 1);
  EXPECT_DOUBLE_EQ(r.estimate, 1.0);
  EXPECT_LE(r.budget, 100u);
}

TEST(BfsVertex, ExpectationOverVertexChoice) {
  const std::vector<std::uint32_t> ids{0, 1, 1, 1};
  EntityIdOracle oracle(ids);
  const auto mc = monte_carlo(4000, [&](std::size_t r) { return bfse_vertex_bfs(4, 100, oracle, 1, r).estimate; });
  EXPECT_NEAR(mc.mean, 2.0, 4 * mc.se);
}

TEST(BfsVertex, ExhaustiveMeanOfInverseSizesIsCount) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + rng() % 8;
    std::vector<std::uint32_t> ids(m);
    for (auto& id : ids) id = rng() % m;
    std::map<std::uint32_t, double> sizes;
    for (auto id : ids) sizes[id] += 1;
    double sum = 0;
    for (auto id : ids) sum += 1.0 / sizes[id];
    EXPECT_NEAR(sum, static_cast<double>(sizes.size()), 1e-12);
  }
}

TEST(BfsVertex, BudgetDiscipline) {
  const std::vector<std::uint32_t> ids{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  EntityIdOracle base(ids);
  CountingOracle oracle(base);
  try {
    bfse_vertex_bfs(10, 3, oracle, 5, 1);
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("no completed exploration"), std::string::npos);
  }
  EXPECT_LE(oracle.calls, 3u);
  oracle.calls = 0;
  const auto r = bfse_vertex_bfs(10, 20, oracle, 100, 2);
  EXPECT_LE(r.budget, 20u);
  EXPECT_EQ(oracle.calls, r.budget);
}

TEST(InducedSubgraph, FullObservationAndEdgeless) {
  const std::vector<std::uint32_t> ids{0, 0, 1, 2, 2, 2, 3};
  EntityIdOracle oracle(ids);
  const auto full = rsge_induced_subgraph(7, 21, oracle, 1);
  EXPECT_DOUBLE_EQ(full.estimate, 4.0);
  EXPECT_EQ(full.method, "induced-subgraph");
  const std::vector<std::uint32_t> distinct{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  EntityIdOracle none(distinct);
  EXPECT_NEAR(rsge_induced_subgraph(10, 10, none, 1).estimate, 10.0, 1e-9);
  try {
    rsge_induced_subgraph(10, 0, none, 1);
    FAIL();
  } catch (const std::invalid_argument&) {
  }
  try {
    rsge_induced_subgraph(1, 5, none, 1);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("budget too small"), std::string::npos);
  }
}

TEST(InducedSubgraph, InclusionProbabilities) {
  const auto q = inclusion_probabilities(5, 10);
  EXPECT_DOUBLE_EQ(q.one, 0.5);
  EXPECT_DOUBLE_EQ(q.two, 20.0 / 90.0);
  EXPECT_DOUBLE_EQ(q.three, 60.0 / 720.0);
  EXPECT_THROW(inclusion_probabilities(11, 10), std::invalid_argument);
}

TEST(InducedSubgraph, PlantedCliquesUnbiasedAtHalfInclusion) {
  const SyntheticCliqueGraph g = synth_graph({{1, 80}, {2, 10}, {3, 5}}, 2);
  ASSERT_EQ(g.record_count(), 115u);
  EntityIdOracle oracle(g.entity_of);
  const std::uint64_t budget = 1625;  // s = 57, q = 57/115
  const auto mc = monte_carlo(20000, [&](std::size_t r) { return rsge_induced_subgraph(115, budget, oracle, r).estimate; });
  EXPECT_NEAR(mc.mean, 95.0, 3 * mc.se);
}
