#include <gtest/gtest.h>

#include <sstream>

#include "lshe/estimator.hpp"
#include "lshe/record_synth.hpp"
#include "lshe/sweep.hpp"
#include "lshe/synthetic.hpp"

using namespace lshe;

TEST(SynthGraph, CountsAndEdges) {
  const auto singles = synth_graph({{1, 3}}, 1);
  EXPECT_EQ(singles.record_count(), 3u);
  EXPECT_EQ(singles.entity_count(), 3u);
  EXPECT_TRUE(singles.edges.empty());
  const auto pair = synth_graph({{2, 1}}, 1);
  EXPECT_EQ(pair.edges.size(), 1u);
  EXPECT_EQ(pair.entity_count(), 1u);
  const auto g = synth_graph({{1, 700}, {2, 100}, {3, 50}}, 7);
  EXPECT_EQ(g.record_count(), 1050u);
  EXPECT_EQ(g.entity_count(), 850u);
  EXPECT_EQ(g.edges.size(), 100u + 150u);
  EXPECT_EQ(component_profile(g.record_count(), g.edges).counts(),
            (std::map<std::size_t, std::uint64_t>{{1, 700}, {2, 100}, {3, 50}}));
  EXPECT_THROW(synth_graph({{2, 0}}, 1), std::invalid_argument);
  EXPECT_THROW(synth_graph({}, 1), std::invalid_argument);
}

TEST(SimulateEdgeSampling, Extremes) {
  const auto g = synth_graph({{1, 10}, {3, 10}}, 1);
  EXPECT_EQ(simulate_edge_sampling(g, 1.0, 3).edges.size(), g.edges.size());
  EXPECT_TRUE(simulate_edge_sampling(g, 0.0, 3).edges.empty());
  EXPECT_THROW(simulate_edge_sampling(g, 1.5, 3), std::invalid_argument);
}

TEST(SimulateEdgeSampling, TriangleOutcomesEnumerated) {
  // Weight each of the 2^3 kept-edge subsets by its probability.
  for (double p : {0.5, 0.3, 0.8}) {
    double whole = 0, pair_plus_single = 0, singles = 0;
    for (int mask = 0; mask < 8; ++mask) {
      std::vector<RecordPair> edges;
      const RecordPair all[] = {{0, 1}, {0, 2}, {1, 2}};
      double w = 1;
      for (int e = 0; e < 3; ++e) {
        if (mask >> e & 1) {
          edges.push_back(all[e]);
          w *= p;
        } else {
          w *= 1 - p;
        }
      }
      const auto prof = component_profile(3, edges);
      if (prof.count(3)) whole += w;
      else if (prof.count(2)) pair_plus_single += w;
      else singles += w;
    }
    const auto expected = expected_observed_counts(CliqueCounts{0, 0, 1}, p);
    EXPECT_NEAR(whole, expected.triples, 1e-12);
    EXPECT_NEAR(pair_plus_single, expected.pairs, 1e-12);
    EXPECT_NEAR(pair_plus_single + 3 * singles, expected.singletons, 1e-12);
  }
  EXPECT_DOUBLE_EQ(expected_observed_counts(CliqueCounts{0, 0, 1}, 0.5).triples, 0.5);
}

TEST(RelativeError, Definition) {
  EXPECT_DOUBLE_EQ(relative_error(10, 10), 0.0);
  EXPECT_DOUBLE_EQ(relative_error(20, 10), 1.0);
  EXPECT_THROW(relative_error(1, 0), std::invalid_argument);
}

TEST(Sweep, DuplicateFreeRowsRecordTheError) {
  Dataset ds({"s"}, {{"alpha"}, {"bravo"}, {"charlie"}});
  SweepGrid grid;
  grid.rows = {1};
  grid.tables = {1};
  grid.shingles = {3};
  const auto rows = sweep(ds, {}, grid);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NE(rows[0].error.find("p undefined"), std::string::npos);
  EXPECT_FALSE(rows[0].recall.has_value());
  grid.tables.clear();
  EXPECT_THROW(sweep(ds, {}, grid), std::invalid_argument);
}

TEST(Sweep, MonotoneInTablesAndOrdered) {
  const auto data = restaurant_surrogate();
  const auto matches = matches_from_entity_ids(data.entity_ids).matches();
  SweepGrid grid;
  grid.rows = {1, 2};
  grid.tables = {2, 4, 8, 16};
  grid.shingles = {4};
  const auto rows = sweep(data.dataset, matches, grid);
  ASSERT_EQ(rows.size(), 8u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].rows != rows[i - 1].rows) continue;
    EXPECT_GT(rows[i].tables, rows[i - 1].tables);
    EXPECT_GE(rows[i].sample_size, rows[i - 1].sample_size);
    EXPECT_GE(*rows[i].recall, *rows[i - 1].recall);
  }
  for (const auto& r : rows) {
    EXPECT_GE(r.reduction_ratio, 0.0);
    EXPECT_LE(r.reduction_ratio, 1.0);
  }
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  EXPECT_EQ(csv.str().rfind("K,L,shingle,m,recall,reduction_ratio,elapsed_ms,error\n", 0), 0u);
}

TEST(Compare, DeterministicCsv) {
  const auto data = restaurant_surrogate();
  const auto matches = matches_from_entity_ids(data.entity_ids).matches();
  const auto sets = shingle_dataset(data.dataset, 5);
  EntityIdOracle oracle(data.entity_ids);
  CompareConfig cfg;
  cfg.points = {{1, 8}};
  cfg.replicates = 2;
  cfg.shingle_k = 5;
  auto run = [&] {
    std::ostringstream out;
    const auto rows = compare(sets, matches, oracle, static_cast<double>(oracle.entity_count()), cfg);
    write_compare_csv(out, rows);
    return std::pair{out.str(), rows};
  };
  const auto [a, rows] = run();
  EXPECT_EQ(a, run().first);
  ASSERT_EQ(rows.size(), 8u);
  const std::uint64_t budget = rows[0].budget;
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LE(rows[i].budget, budget) << rows[i].method;
}

TEST(RecordSynth, RestaurantShape) {
  const auto data = restaurant_surrogate();
  EXPECT_EQ(data.dataset.size(), 864u);
  EXPECT_EQ(data.entity_count(), 752u);
  EXPECT_EQ(matches_from_entity_ids(data.entity_ids).size(), 112u);
  EXPECT_EQ(data.dataset.schema().size(), 4u);
  const auto again = restaurant_surrogate();
  EXPECT_EQ(again.dataset[17].attributes, data.dataset[17].attributes);
}

TEST(RecordSynth, VoterAndCasualtyShapes) {
  const auto voter = voter_like(5000, 1);
  EXPECT_EQ(voter.dataset.size(), 5000u);
  EXPECT_EQ(voter.dataset.schema().size(), 6u);
  const auto prof = component_profile(5000, matches_from_entity_ids(voter.entity_ids).matches());
  EXPECT_GE(static_cast<double>(prof.count(1)), 0.7 * 5000);
  const auto cas = casualty_like(2000, 1);
  EXPECT_EQ(cas.dataset.size(), 2000u);
  EXPECT_EQ(cas.dataset.schema().size(), 6u);
}
