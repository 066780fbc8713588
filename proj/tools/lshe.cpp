#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "lshe/estimator.hpp"
#include "lshe/linear_model.hpp"
#include "lshe/lsh_sampler.hpp"
#include "lshe/pipeline.hpp"
#include "lshe/record_synth.hpp"
#include "lshe/signature_cache.hpp"
#include "lshe/sweep.hpp"
#include "lshe/synthetic.hpp"

using namespace lshe;

namespace {

struct InputOptions {
  std::string records;
  std::vector<std::string> schema;
  std::string truth;
  std::string entity_col;
  std::string recall_truth;
  char delimiter = ',';
};

struct LoadedInput {
  Dataset dataset;
  std::optional<std::vector<std::uint32_t>> entity_ids;
  std::optional<LabeledPairs> truth;
};

void add_input_flags(CLI::App* cmd, InputOptions& in, bool truth_required = true) {
  cmd->add_option("--records", in.records, "delimited records file with a header row")->required()->check(CLI::ExistingFile);
  cmd->add_option("--schema", in.schema, "attribute columns to use (default: all but the entity column)")->delimiter(',');
  auto* truth = cmd->add_option("--truth", in.truth, "labeled pairs file: id_a,id_b,label")->check(CLI::ExistingFile);
  auto* entity = cmd->add_option("--entity-col", in.entity_col, "column holding a ground-truth entity id");
  cmd->add_option("--delimiter", in.delimiter, "field delimiter");
  if (truth_required) {
    auto* group = cmd->add_option_group("ground truth");
    group->add_option(truth);
    group->add_option(entity);
    group->require_option(1, 2);
  }
}

LoadedInput load_input(const InputOptions& in) {
  RecordFileOptions opts;
  opts.attribute_columns = in.schema;
  opts.delimiter = in.delimiter;
  if (!in.entity_col.empty()) opts.exclude_columns.push_back(in.entity_col);
  LoadedInput out{load_records(in.records, opts), std::nullopt, std::nullopt};
  if (!in.entity_col.empty()) {
    out.entity_ids = load_entity_ids(in.records, in.entity_col, in.delimiter);
    if (out.entity_ids->size() != out.dataset.size()) throw std::runtime_error("entity column length mismatch");
  }
  if (!in.truth.empty()) out.truth = load_labeled_pairs(in.truth, out.dataset.size(), in.delimiter);
  return out;
}

std::vector<RecordPair> known_matches(const LoadedInput& input) {
  if (input.truth) return input.truth->matches();
  if (input.entity_ids) return matches_from_entity_ids(*input.entity_ids).matches();
  return {};
}

std::unique_ptr<LabelOracle> truth_oracle(const LoadedInput& input) {
  if (input.entity_ids) return std::make_unique<EntityIdOracle>(*input.entity_ids);
  if (input.truth) return std::make_unique<PairListOracle>(*input.truth);
  throw std::runtime_error("the truth oracle needs --truth or --entity-col");
}

std::unique_ptr<LabelOracle> make_oracle(const std::string& spec, const LoadedInput& input,
                                         const NormalizationPolicy& policy) {
  if (spec == "truth") return truth_oracle(input);
  if (spec.starts_with("model:")) {
    return std::make_unique<ClassifierOracle>(load_model(spec.substr(6)), input.dataset, policy);
  }
  throw std::runtime_error("unknown oracle '" + spec + "' (expected truth or model:PATH)");
}

// "4,8,12" or "start:stop:step" (inclusive).
std::vector<std::size_t> parse_size_list(const std::string& text) {
  auto number = [&](std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::runtime_error("bad number '" + std::string(s) + "' in '" + text + "'");
    return v;
  };
  std::vector<std::size_t> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::size_t> parts;
    std::string_view rest = text;
    while (true) {
      const auto pos = rest.find(':');
      parts.push_back(number(rest.substr(0, pos)));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (parts.size() != 3 || parts[2] == 0 || parts[0] > parts[1]) throw std::runtime_error("bad range '" + text + "'");
    for (std::size_t v = parts[0]; v <= parts[1]; v += parts[2]) out.push_back(v);
    return out;
  }
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto pos = rest.find(',');
    out.push_back(number(rest.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  if (out.empty()) throw std::runtime_error("empty list");
  return out;
}

// "1x20,4x40"
std::vector<LshShape> parse_points(const std::string& text) {
  std::vector<LshShape> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto pos = rest.find(',');
    const std::string item(rest.substr(0, pos));
    const auto x = item.find('x');
    if (x == std::string::npos) throw std::runtime_error("bad operating point '" + item + "' (expected KxL)");
    const auto k = parse_size_list(item.substr(0, x));
    const auto l = parse_size_list(item.substr(x + 1));
    if (k.size() != 1 || l.size() != 1) throw std::runtime_error("bad operating point '" + item + "'");
    out.push_back({k[0], l[0]});
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  return out;
}

MinHashBackend parse_backend(const std::string& name) {
  if (name == "densified") return MinHashBackend::densified;
  if (name == "classical") return MinHashBackend::classical;
  throw std::runtime_error("unknown backend '" + name + "'");
}

void emit_json(const nlohmann::json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::map<std::size_t, std::uint64_t> parse_counts(const std::string& text) {
  std::map<std::size_t, std::uint64_t> counts;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto pos = rest.find(',');
    const std::string item(rest.substr(0, pos));
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::runtime_error("bad clique count '" + item + "' (expected SIZE:COUNT)");
    counts[std::stoull(item.substr(0, colon))] += std::stoull(item.substr(colon + 1));
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  return counts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unique entity estimation with LSH-based adaptive pair sampling"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");

  // estimate
  InputOptions est_in;
  PipelineConfig est_cfg;
  std::string est_backend = "densified", est_oracle = "truth", est_out, est_pairs, est_cache, est_stderr = "plugin";
  std::optional<std::uint64_t> est_budget;
  auto* estimate = app.add_subcommand("estimate", "sample pairs with LSH, label them and estimate the entity count");
  add_input_flags(estimate, est_in);
  estimate->add_option("--k", est_cfg.shape.rows, "minhash values per bucket key")->check(CLI::PositiveNumber);
  estimate->add_option("--l", est_cfg.shape.tables, "number of hash tables")->check(CLI::PositiveNumber);
  estimate->add_option("--shingle", est_cfg.shingle_k, "character k-gram length")->check(CLI::PositiveNumber);
  estimate->add_option("--seed", est_cfg.seed, "hash family seed");
  estimate->add_option("--bucket-cap", est_cfg.bucket_cap, "largest bucket emitted in full");
  estimate->add_option("--backend", est_backend, "densified or classical")->check(CLI::IsMember({"densified", "classical"}));
  estimate->add_option("--budget", est_budget, "fail if the sample needs more labels than this");
  estimate->add_option("--oracle", est_oracle, "truth or model:PATH");
  estimate->add_option("--recall-truth", est_in.recall_truth, "separate labeled pairs for measuring p")->check(CLI::ExistingFile);
  estimate->add_option("--stderr", est_stderr, "plugin or reseed,R");
  estimate->add_option("--export-pairs", est_pairs, "write the sampled pairs");
  estimate->add_option("--signature-cache", est_cache, "write minhash signatures");
  estimate->add_option("--out", est_out, "report path (default stdout)");

  // sweep
  InputOptions sw_in;
  SweepGrid grid;
  std::string sw_k = "1", sw_l = "5:100:5", sw_shingle = "3", sw_backend = "densified", sw_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "recall and reduction ratio over a (K, L, shingle) grid");
  add_input_flags(sweep_cmd, sw_in);
  sweep_cmd->add_option("--k", sw_k, "K values: list or start:stop:step");
  sweep_cmd->add_option("--l", sw_l, "L values: list or start:stop:step");
  sweep_cmd->add_option("--shingle", sw_shingle, "shingle lengths");
  sweep_cmd->add_option("--seed", grid.seed, "hash family seed");
  sweep_cmd->add_option("--bucket-cap", grid.bucket_cap, "largest bucket emitted in full");
  sweep_cmd->add_option("--backend", sw_backend, "densified or classical")->check(CLI::IsMember({"densified", "classical"}));
  sweep_cmd->add_option("--out", sw_out, "CSV path (default stdout)");

  // compare
  InputOptions cmp_in;
  CompareConfig cmp_cfg;
  std::string cmp_points = "1x20", cmp_backend = "densified", cmp_oracle = "truth", cmp_out;
  auto* compare_cmd = app.add_subcommand("compare", "LSHE and the three baselines at matched label budgets");
  add_input_flags(compare_cmd, cmp_in);
  compare_cmd->add_option("--points", cmp_points, "operating points KxL, comma separated");
  compare_cmd->add_option("--shingle", cmp_cfg.shingle_k, "character k-gram length")->check(CLI::PositiveNumber);
  compare_cmd->add_option("--seed", cmp_cfg.seed, "first seed");
  compare_cmd->add_option("--replicates", cmp_cfg.replicates, "seeds per operating point")->check(CLI::PositiveNumber);
  compare_cmd->add_option("--bfs-vertices", cmp_cfg.bfs_max_vertices, "vertex cap for the BFS baseline (0 = M)");
  compare_cmd->add_option("--bucket-cap", cmp_cfg.bucket_cap, "largest bucket emitted in full");
  compare_cmd->add_option("--backend", cmp_backend, "densified or classical")->check(CLI::IsMember({"densified", "classical"}));
  compare_cmd->add_option("--oracle", cmp_oracle, "truth or model:PATH");
  compare_cmd->add_option("--out", cmp_out, "CSV path (default stdout)");

  // simulate
  std::string sim_counts = "1:700,2:100,3:50", sim_preset, sim_records_out, sim_truth_out, sim_out;
  double sim_p = 0.5;
  std::size_t sim_replicates = 10000, sim_size = 0;
  std::uint64_t sim_seed = 1;
  auto* simulate = app.add_subcommand("simulate", "synthetic clique graphs or generated record sets");
  simulate->add_option("--counts", sim_counts, "clique counts SIZE:COUNT,...");
  simulate->add_option("--p", sim_p, "edge retention probability")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--replicates", sim_replicates, "Monte-Carlo replicates")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "seed");
  simulate->add_option("--preset", sim_preset, "generate records: restaurant, voter or casualty")
      ->check(CLI::IsMember({"restaurant", "voter", "casualty"}));
  simulate->add_option("--size", sim_size, "record count for voter and casualty presets");
  simulate->add_option("--records-out", sim_records_out, "generated records CSV (with entity_id column)");
  simulate->add_option("--truth-out", sim_truth_out, "matching pairs of the generated records");
  simulate->add_option("--out", sim_out, "summary path (default stdout)");

  // train-oracle
  InputOptions tr_in;
  TrainingConfig tr_cfg;
  std::optional<std::size_t> tr_pairs;
  std::string tr_out;
  std::string tr_negatives;
  double tr_match_share = 0.5;
  auto* train = app.add_subcommand("train-oracle", "train the linear pair classifier");
  add_input_flags(train, tr_in);
  train->add_option("--pairs", tr_pairs, "training pairs drawn from the entity column");
  train->add_option("--shingle", tr_cfg.shingle_k, "character k-gram length")->check(CLI::PositiveNumber);
  train->add_option("--dimension", tr_cfg.dimension, "hashed feature dimension")->check(CLI::Range(2ul, 1ul << 30));
  train->add_option("--seed", tr_cfg.seed, "seed");
  train->add_option("--match-share", tr_match_share, "share of training pairs that are matches")
      ->check(CLI::Range(0.0, 1.0));
  train->add_option("--negatives", tr_negatives, "candidate pair file to draw non-matches from");
  train->add_option("--out", tr_out, "model path")->required();

  CLI11_PARSE(app, argc, argv);
  spdlog::set_default_logger(spdlog::stderr_color_mt("lshe"));
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*estimate) {
      est_cfg.backend = parse_backend(est_backend);
      const LoadedInput input = load_input(est_in);
      const auto sets = shingle_dataset(input.dataset, est_cfg.shingle_k, est_cfg.normalization);
      std::vector<RecordPair> recall_matches = known_matches(input);
      if (!est_in.recall_truth.empty()) {
        recall_matches = load_labeled_pairs(est_in.recall_truth, input.dataset.size(), est_in.delimiter).matches();
      }
      const auto oracle = make_oracle(est_oracle, input, est_cfg.normalization);
      std::optional<SignatureCacheWriter> cache;
      if (!est_cache.empty()) cache.emplace(est_cache, sets.size(), est_cfg.shape, est_cfg.seed);
      const SamplePairSet sample = lsh_sample(sets, est_cfg, cache ? &*cache : nullptr);
      if (cache) cache->close();
      if (est_budget && sample.size() > *est_budget) {
        throw std::runtime_error("sample of " + std::to_string(sample.size()) + " pairs exceeds --budget " +
                                 std::to_string(*est_budget));
      }
      if (!est_pairs.empty()) export_pairs(est_pairs, sample);
      EstimateReport report =
          estimate_from_sample(sets.size(), sample, empirical_recall(sample, recall_matches), *oracle);
      if (est_stderr.starts_with("reseed")) {
        const auto comma = est_stderr.find(',');
        const std::size_t r = comma == std::string::npos ? 20 : std::stoul(est_stderr.substr(comma + 1));
        report.std_error = reseed_std_error(sets, est_cfg, recall_matches, *oracle, r);
        report.std_error_kind = "reseed";
      } else if (est_stderr != "plugin") {
        throw std::runtime_error("unknown --stderr '" + est_stderr + "'");
      }
      nlohmann::json j = to_json(report);
      j["K"] = est_cfg.shape.rows;
      j["L"] = est_cfg.shape.tables;
      j["shingle"] = est_cfg.shingle_k;
      j["oracle"] = oracle->name();
      emit_json(j, est_out);
    } else if (*sweep_cmd) {
      grid.rows = parse_size_list(sw_k);
      grid.tables = parse_size_list(sw_l);
      for (std::size_t k : parse_size_list(sw_shingle)) grid.shingles.push_back(static_cast<unsigned>(k));
      grid.backend = parse_backend(sw_backend);
      const LoadedInput input = load_input(sw_in);
      const auto rows = sweep(input.dataset, known_matches(input), grid);
      if (sw_out.empty()) {
        write_sweep_csv(std::cout, rows);
      } else {
        auto out = open_output(sw_out);
        write_sweep_csv(out, rows);
      }
    } else if (*compare_cmd) {
      cmp_cfg.points = parse_points(cmp_points);
      cmp_cfg.backend = parse_backend(cmp_backend);
      const LoadedInput input = load_input(cmp_in);
      const auto sets = shingle_dataset(input.dataset, cmp_cfg.shingle_k, cmp_cfg.normalization);
      const auto oracle = make_oracle(cmp_oracle, input, cmp_cfg.normalization);
      std::optional<double> true_count;
      if (input.entity_ids) {
        true_count = static_cast<double>(EntityIdOracle(*input.entity_ids).entity_count());
      } else if (input.truth) {
        std::vector<RecordPair> m = input.truth->matches();
        true_count = static_cast<double>(component_profile(input.dataset.size(), m).component_count());
      }
      const auto rows = compare(sets, known_matches(input), *oracle, true_count, cmp_cfg);
      if (cmp_out.empty()) {
        write_compare_csv(std::cout, rows);
      } else {
        auto out = open_output(cmp_out);
        write_compare_csv(out, rows);
      }
    } else if (*simulate) {
      if (!sim_preset.empty()) {
        if (sim_records_out.empty()) throw std::runtime_error("--preset needs --records-out");
        SyntheticDataset data = [&] {
          if (sim_preset == "restaurant") {
            RestaurantOptions o;
            o.seed = sim_seed;
            return restaurant_surrogate(o);
          }
          if (sim_size == 0) throw std::runtime_error("--preset " + sim_preset + " needs --size");
          return sim_preset == "voter" ? voter_like(sim_size, sim_seed) : casualty_like(sim_size, sim_seed);
        }();
        write_records(sim_records_out, data.dataset, data.entity_ids);
        const LabeledPairs matches = matches_from_entity_ids(data.entity_ids);
        if (!sim_truth_out.empty()) write_labeled_pairs(sim_truth_out, matches);
        emit_json({{"preset", sim_preset},
                   {"records", data.dataset.size()},
                   {"entities", data.entity_count()},
                   {"matching_pairs", matches.size()},
                   {"seed", sim_seed}},
                  sim_out);
      } else {
        const SyntheticCliqueGraph g = synth_graph(parse_counts(sim_counts), sim_seed);
        const double n = static_cast<double>(g.entity_count());
        double sum = 0.0, sum_sq = 0.0;
        std::map<std::size_t, double> profile_sum;
        for (std::size_t r = 0; r < sim_replicates; ++r) {
          const ComponentProfile profile = component_profile(simulate_edge_sampling(g, sim_p, sim_seed + 1 + r));
          const double e = lshe::lshe(profile, sim_p);
          sum += e;
          sum_sq += e * e;
          for (const auto& [size, count] : profile.counts()) profile_sum[size] += static_cast<double>(count);
        }
        const double reps = static_cast<double>(sim_replicates);
        const double mean = sum / reps;
        const double var = sim_replicates > 1 ? (sum_sq - sum * sum / reps) / (reps - 1.0) : 0.0;
        const auto count_of = [&](std::size_t i) {
          auto it = g.counts.find(i);
          return it == g.counts.end() ? 0.0 : static_cast<double>(it->second);
        };
        nlohmann::json mean_profile = nlohmann::json::object();
        for (const auto& [size, total] : profile_sum) mean_profile[std::to_string(size)] = total / reps;
        emit_json({{"true_count", n},
                   {"records", g.record_count()},
                   {"p", sim_p},
                   {"replicates", sim_replicates},
                   {"mean_estimate", mean},
                   {"std_error_of_mean", std::sqrt(var / reps)},
                   {"empirical_variance", var},
                   {"predicted_variance", lshe_variance(count_of(2), count_of(3), sim_p)},
                   {"mean_observed_components", mean_profile},
                   {"seed", sim_seed}},
                  sim_out);
      }
    } else if (*train) {
      const LoadedInput input = load_input(tr_in);
      LabeledPairs training;
      if (input.entity_ids) {
        const std::size_t limit = max_training_pairs(input.dataset.size());
        const std::size_t want = tr_pairs.value_or(std::min<std::size_t>(10000, limit));
        if (want > limit) spdlog::warn("{} training pairs is at least 0.01% of all pairs ({} allowed)", want, limit);
        std::vector<RecordPair> pool;
        if (!tr_negatives.empty()) pool = load_pairs(tr_negatives, tr_in.delimiter);
        training = sample_training_pairs(*input.entity_ids, want, tr_cfg.seed, {tr_match_share, pool});
      } else {
        training = *input.truth;
      }
      const LinearModel model = train_linear(input.dataset, training, tr_cfg);
      save_model(tr_out, model);
      emit_json({{"model", tr_out},
                 {"lambda", model.lambda},
                 {"epochs", model.epochs},
                 {"cv_accuracy", model.metrics.cv_accuracy},
                 {"holdout_accuracy", model.metrics.holdout_accuracy},
                 {"holdout_precision", model.metrics.holdout_precision},
                 {"holdout_recall", model.metrics.holdout_recall},
                 {"train_pairs", model.metrics.train_pairs},
                 {"holdout_pairs", model.metrics.holdout_pairs}},
                "");
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
