#include "lshe/sweep.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "lshe/baselines.hpp"
#include "lshe/delimited.hpp"
#include "lshe/lsh_sampler.hpp"
#include "lshe/pipeline.hpp"
#include "lshe/synthetic.hpp"

namespace lshe {

namespace {

std::string csv_number(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); }

std::string csv_text(const std::string& s) { return s.empty() ? s : quote_cell(s, ','); }

}  // namespace

std::vector<SweepRow> sweep(const Dataset& dataset, std::span<const RecordPair> matches, const SweepGrid& grid) {
  if (grid.rows.empty() || grid.tables.empty() || grid.shingles.empty()) {
    throw std::invalid_argument("sweep ranges must be non-empty");
  }
  std::map<unsigned, std::vector<ShingleSet>> sets;
  for (unsigned k : grid.shingles) sets.try_emplace(k, shingle_dataset(dataset, k, grid.normalization));

  std::vector<SweepRow> out;
  for (std::size_t K : grid.rows) {
    for (std::size_t L : grid.tables) {
      for (unsigned k : grid.shingles) {
        SweepRow row;
        row.rows = K;
        row.tables = L;
        row.shingle = k;
        try {
          PipelineConfig config;
          config.shingle_k = k;
          config.normalization = grid.normalization;
          config.shape = {K, L};
          config.seed = grid.seed;
          config.bucket_cap = grid.bucket_cap;
          config.backend = grid.backend;
          const SamplePairSet sample = lsh_sample(sets.at(k), config);
          row.sample_size = sample.size();
          row.elapsed_ms = sample.metadata().elapsed_ms;
          row.reduction_ratio = reduction_ratio(sample.size(), dataset.size());
          row.recall = empirical_recall(sample, matches);
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        out.push_back(std::move(row));
      }
    }
  }
  return out;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "K,L,shingle,m,recall,reduction_ratio,elapsed_ms,error\n";
  for (const SweepRow& r : rows) {
    fmt::print(out, "{},{},{},{},{},{},{:.3f},{}\n", r.rows, r.tables, r.shingle, r.sample_size,
               csv_number(r.recall), r.reduction_ratio, r.elapsed_ms, csv_text(r.error));
  }
}

std::vector<CompareRow> compare(std::span<const ShingleSet> sets, std::span<const RecordPair> recall_matches,
                                const LabelOracle& oracle, std::optional<double> true_count,
                                const CompareConfig& config) {
  if (config.points.empty()) throw std::invalid_argument("no operating points");
  if (config.replicates == 0) throw std::invalid_argument("replicates must be >= 1");
  const std::size_t record_count = sets.size();
  const std::size_t max_vertices = config.bfs_max_vertices ? config.bfs_max_vertices : record_count;

  std::vector<CompareRow> out;
  for (const LshShape& shape : config.points) {
    for (std::size_t r = 0; r < config.replicates; ++r) {
      const std::uint64_t seed = config.seed + r;
      auto base_row = [&](std::string method) {
        CompareRow row;
        row.rows = shape.rows;
        row.tables = shape.tables;
        row.seed = seed;
        row.method = std::move(method);
        return row;
      };
      auto record = [&](CompareRow row, const EstimateReport& report) {
        row.budget = report.budget;
        row.estimate = report.estimate;
        row.degenerate = report.degenerate;
        if (true_count && std::isfinite(report.estimate)) row.relative_error = relative_error(report.estimate, *true_count);
        out.push_back(std::move(row));
      };

      PipelineConfig pc;
      pc.shingle_k = config.shingle_k;
      pc.normalization = config.normalization;
      pc.shape = shape;
      pc.seed = seed;
      pc.bucket_cap = config.bucket_cap;
      pc.backend = config.backend;
      const SamplePairSet sample = lsh_sample(sets, pc);
      const std::uint64_t budget = sample.size();
      try {
        record(base_row("lshe"), estimate_from_sample(record_count, sample, empirical_recall(sample, recall_matches),
                                                      oracle));
      } catch (const std::exception& e) {
        CompareRow row = base_row("lshe");
        row.budget = budget;
        row.error = e.what();
        out.push_back(std::move(row));
      }

      using Runner = std::function<EstimateReport()>;
      const std::pair<const char*, Runner> baselines[] = {
          {"prse", [&] { return prse(record_count, budget, oracle, seed); }},
          {"bfs-vertex", [&] { return bfse_vertex_bfs(record_count, budget, oracle, max_vertices, seed); }},
          {"induced-subgraph", [&] { return rsge_induced_subgraph(record_count, budget, oracle, seed); }},
      };
      for (const auto& [name, run] : baselines) {
        try {
          record(base_row(name), run());
        } catch (const std::exception& e) {
          CompareRow row = base_row(name);
          row.budget = budget;
          row.error = e.what();
          out.push_back(std::move(row));
        }
      }
    }
  }
  return out;
}

void write_compare_csv(std::ostream& out, std::span<const CompareRow> rows) {
  out << "K,L,seed,method,budget,estimate,relative_error,degenerate,error\n";
  for (const CompareRow& r : rows) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", r.rows, r.tables, r.seed, r.method, r.budget,
               csv_number(r.estimate), csv_number(r.relative_error), r.degenerate ? 1 : 0, csv_text(r.error));
  }
}

}  // namespace lshe
