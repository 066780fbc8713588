#include "lshe/linear_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "lshe/hash.hpp"

namespace lshe {

namespace {

struct Example {
  PairFeatureVector x;
  double y;  // +1 match, -1 non-match
};

struct Fit {
  std::vector<double> weights;
  double bias = 0.0;
};

double dot(const std::vector<double>& w, const PairFeatureVector& x) {
  double s = 0.0;
  for (std::uint32_t i : x.indices) s += w[i];
  return s;
}

Fit fit_hinge(std::span<const Example> examples, std::span<const std::size_t> order_in, std::size_t dimension,
              double lambda, std::size_t epochs, double learning_rate, std::uint64_t seed) {
  std::vector<double> v(dimension, 0.0);
  double scale = 1.0;
  double bias = 0.0;
  std::vector<std::size_t> order(order_in.begin(), order_in.end());
  std::uint64_t t = 0;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    std::mt19937_64 rng(hash_combine(seed, epoch));
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      ++t;
      const Example& ex = examples[i];
      const double eta = learning_rate / (1.0 + learning_rate * lambda * static_cast<double>(t));
      const double margin = ex.y * (scale * dot(v, ex.x) + bias);
      scale *= (1.0 - eta * lambda);
      if (margin < 1.0) {
        const double step = eta * ex.y / scale;
        for (std::uint32_t idx : ex.x.indices) v[idx] += step;
        bias += eta * ex.y;
      }
      if (scale < 1e-9) {
        for (double& w : v) w *= scale;
        scale = 1.0;
      }
    }
  }
  for (double& w : v) w *= scale;
  return {std::move(v), bias};
}

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  double accuracy() const {
    const std::size_t n = tp + fp + tn + fn;
    return n ? static_cast<double>(tp + tn) / static_cast<double>(n) : 0.0;
  }
  double precision() const { return tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0; }
  double recall() const { return tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0; }
};

Confusion evaluate(const Fit& fit, std::span<const Example> examples, std::span<const std::size_t> idx) {
  Confusion c;
  for (std::size_t i : idx) {
    const bool predicted = dot(fit.weights, examples[i].x) + fit.bias > 0.0;
    const bool actual = examples[i].y > 0.0;
    if (predicted && actual) ++c.tp;
    else if (predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

void put_f64(std::ostream& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof bits);
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

double get_f64(std::istream& in, const std::filesystem::path& path) {
  std::array<unsigned char, 8> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw std::runtime_error(path.string() + ": truncated weight block");
  }
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes[i];
  double d;
  std::memcpy(&d, &bits, sizeof d);
  return d;
}

}  // namespace

PairFeatureVector pair_features(const ShingleSet& a, const ShingleSet& b, std::size_t dimension) {
  if (dimension < 2) throw std::invalid_argument("feature dimension must be >= 2");
  PairFeatureVector out;
  out.dimension = dimension;
  std::vector<std::uint64_t> diff;
  std::set_symmetric_difference(a.tokens.begin(), a.tokens.end(), b.tokens.begin(), b.tokens.end(),
                                std::back_inserter(diff));
  out.indices.reserve(diff.size());
  for (std::uint64_t t : diff) out.indices.push_back(static_cast<std::uint32_t>(t % dimension));
  std::sort(out.indices.begin(), out.indices.end());
  out.indices.erase(std::unique(out.indices.begin(), out.indices.end()), out.indices.end());
  return out;
}

PairFeatureVector pair_features(const Record& a, const Record& b, unsigned shingle_k, std::size_t dimension,
                                const NormalizationPolicy& policy) {
  return pair_features(shingle(record_string(a, policy), shingle_k), shingle(record_string(b, policy), shingle_k),
                       dimension);
}

double LinearModel::score(const PairFeatureVector& x) const {
  if (x.dimension != dimension) throw std::invalid_argument("feature dimension does not match model");
  return dot(weights, x) + bias;
}

LinearModel train_linear(const Dataset& dataset, const LabeledPairs& labeled, const TrainingConfig& config) {
  if (config.lambdas.empty() || config.epochs.empty()) throw std::invalid_argument("empty hyper-parameter grid");
  if (config.folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");

  std::unordered_map<RecordId, ShingleSet> sets;
  auto set_of = [&](RecordId id) -> const ShingleSet& {
    auto it = sets.find(id);
    if (it == sets.end()) {
      it = sets.emplace(id, shingle(record_string(dataset[id], config.normalization), config.shingle_k)).first;
    }
    return it->second;
  };

  std::vector<Example> examples;
  examples.reserve(labeled.size());
  std::size_t positives = 0;
  for (const LabeledPair& lp : labeled.pairs()) {
    const bool match = lp.label == Label::match;
    positives += match ? 1 : 0;
    examples.push_back({pair_features(set_of(lp.pair.first), set_of(lp.pair.second), config.dimension),
                        match ? 1.0 : -1.0});
  }
  if (positives == 0 || positives == examples.size()) {
    throw std::invalid_argument("training set must contain both match and non-match pairs");
  }

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(hash_combine(config.seed, 0x5EEDull));
  std::shuffle(order.begin(), order.end(), rng);
  const auto holdout_n = static_cast<std::size_t>(std::floor(config.holdout_fraction * examples.size()));
  std::vector<std::size_t> holdout(order.begin(), order.begin() + holdout_n);
  std::vector<std::size_t> train(order.begin() + holdout_n, order.end());
  const bool train_has_both =
      std::any_of(train.begin(), train.end(), [&](std::size_t i) { return examples[i].y > 0; }) &&
      std::any_of(train.begin(), train.end(), [&](std::size_t i) { return examples[i].y < 0; });
  if (!train_has_both) throw std::invalid_argument("training split lacks one of the classes");

  double best_lambda = config.lambdas.front();
  std::size_t best_epochs = config.epochs.front();
  double best_cv = -1.0;
  if (train.size() >= config.folds) {
    for (double lambda : config.lambdas) {
      for (std::size_t epochs : config.epochs) {
        std::size_t correct = 0;
        for (std::size_t f = 0; f < config.folds; ++f) {
          std::vector<std::size_t> fit_idx, val_idx;
          for (std::size_t i = 0; i < train.size(); ++i) {
            (i % config.folds == f ? val_idx : fit_idx).push_back(train[i]);
          }
          const Fit fit = fit_hinge(examples, fit_idx, config.dimension, lambda, epochs, config.learning_rate,
                                    hash_combine(config.seed, f));
          const Confusion c = evaluate(fit, examples, val_idx);
          correct += c.tp + c.tn;
        }
        const double accuracy = static_cast<double>(correct) / static_cast<double>(train.size());
        if (accuracy > best_cv) {
          best_cv = accuracy;
          best_lambda = lambda;
          best_epochs = epochs;
        }
      }
    }
  }

  Fit fit = fit_hinge(examples, train, config.dimension, best_lambda, best_epochs, config.learning_rate,
                      config.seed);
  LinearModel model;
  model.weights = std::move(fit.weights);
  model.bias = fit.bias;
  model.shingle_k = config.shingle_k;
  model.dimension = config.dimension;
  model.seed = config.seed;
  model.lambda = best_lambda;
  model.epochs = best_epochs;
  model.metrics.cv_accuracy = std::max(best_cv, 0.0);
  model.metrics.train_pairs = train.size();
  model.metrics.holdout_pairs = holdout.size();
  if (!holdout.empty()) {
    const Confusion c = evaluate({model.weights, model.bias}, examples, holdout);
    model.metrics.holdout_accuracy = c.accuracy();
    model.metrics.holdout_precision = c.precision();
    model.metrics.holdout_recall = c.recall();
  }
  return model;
}

void save_model(const std::filesystem::path& path, const LinearModel& model) {
  if (model.weights.size() != model.dimension) throw std::invalid_argument("weight vector length != dimension");
  nlohmann::json header = {
      {"format", "lshe-linear-model"},
      {"version", 1},
      {"shingle_k", model.shingle_k},
      {"dimension", model.dimension},
      {"bias", model.bias},
      {"seed", model.seed},
      {"lambda", model.lambda},
      {"epochs", model.epochs},
      {"weights_encoding", "f64le"},
      {"metrics",
       {{"cv_accuracy", model.metrics.cv_accuracy},
        {"holdout_accuracy", model.metrics.holdout_accuracy},
        {"holdout_precision", model.metrics.holdout_precision},
        {"holdout_recall", model.metrics.holdout_recall},
        {"train_pairs", model.metrics.train_pairs},
        {"holdout_pairs", model.metrics.holdout_pairs}}},
  };
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << header.dump() << '\n';
  for (double w : model.weights) put_f64(out, w);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

LinearModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing model header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": bad model header: " + e.what());
  }
  if (header.value("format", "") != "lshe-linear-model" || header.value("version", 0) != 1) {
    throw std::runtime_error(path.string() + ": not a version 1 linear model");
  }
  LinearModel model;
  model.shingle_k = header.at("shingle_k").get<unsigned>();
  model.dimension = header.at("dimension").get<std::size_t>();
  model.bias = header.at("bias").get<double>();
  model.seed = header.at("seed").get<std::uint64_t>();
  model.lambda = header.value("lambda", 0.0);
  model.epochs = header.value("epochs", std::size_t{0});
  if (header.contains("metrics")) {
    const auto& m = header["metrics"];
    model.metrics.cv_accuracy = m.value("cv_accuracy", 0.0);
    model.metrics.holdout_accuracy = m.value("holdout_accuracy", 0.0);
    model.metrics.holdout_precision = m.value("holdout_precision", 0.0);
    model.metrics.holdout_recall = m.value("holdout_recall", 0.0);
    model.metrics.train_pairs = m.value("train_pairs", std::size_t{0});
    model.metrics.holdout_pairs = m.value("holdout_pairs", std::size_t{0});
  }
  if (model.dimension < 2) throw std::runtime_error(path.string() + ": bad dimension");
  model.weights.resize(model.dimension);
  for (double& w : model.weights) w = get_f64(in, path);
  return model;
}

ClassifierOracle::ClassifierOracle(LinearModel model, const Dataset& dataset, const NormalizationPolicy& policy)
    : model_(std::move(model)), sets_(shingle_dataset(dataset, model_.shingle_k, policy)) {}

ClassifierOracle::ClassifierOracle(LinearModel model, std::vector<ShingleSet> sets)
    : model_(std::move(model)), sets_(std::move(sets)) {
  for (const auto& s : sets_) {
    if (!s.empty() && s.k != model_.shingle_k) {
      throw std::invalid_argument("shingle length does not match the model");
    }
  }
}

Label ClassifierOracle::label(RecordPair pair) const {
  return model_.predict(pair_features(sets_.at(pair.first), sets_.at(pair.second), model_.dimension));
}

LabeledPairs sample_training_pairs(std::span<const std::uint32_t> entity_ids, std::size_t count,
                                   std::uint64_t seed, const TrainingSampleOptions& options) {
  const std::size_t m = entity_ids.size();
  if (m < 2) throw std::invalid_argument("need at least two records");
  if (!(options.match_share >= 0.0 && options.match_share <= 1.0)) {
    throw std::invalid_argument("match share must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);

  std::unordered_map<std::uint32_t, std::vector<RecordId>> groups;
  for (std::size_t i = 0; i < m; ++i) groups[entity_ids[i]].push_back(static_cast<RecordId>(i));
  std::vector<std::uint32_t> entity_order;
  for (const auto& [e, members] : groups) {
    if (members.size() > 1) entity_order.push_back(e);
  }
  std::sort(entity_order.begin(), entity_order.end());
  std::vector<RecordPair> all_matches;
  for (std::uint32_t e : entity_order) {
    const auto& members = groups[e];
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        all_matches.push_back(RecordPair::canonical(members[x], members[y]));
      }
    }
  }
  std::shuffle(all_matches.begin(), all_matches.end(), rng);
  const auto match_target = static_cast<std::size_t>(std::floor(options.match_share * static_cast<double>(count)));
  const std::size_t match_n = std::min(match_target, all_matches.size());

  std::vector<LabeledPairs::Row> rows;
  std::unordered_set<std::uint64_t> seen;
  for (std::size_t i = 0; i < match_n; ++i) {
    rows.push_back({all_matches[i].first, all_matches[i].second, Label::match});
    seen.insert(all_matches[i].packed());
  }
  const std::size_t want = count - match_n;
  if (!options.negative_pool.empty()) {
    std::vector<RecordPair> pool;
    for (const RecordPair& raw : options.negative_pool) {
      if (raw.first == raw.second || raw.first >= m || raw.second >= m) {
        throw std::invalid_argument("candidate pair out of range");
      }
      const RecordPair p = RecordPair::canonical(raw.first, raw.second);
      if (entity_ids[p.first] != entity_ids[p.second]) pool.push_back(p);
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    if (pool.size() < want) throw std::runtime_error("candidate pool has too few non-match pairs");
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t i = 0; i < want; ++i) rows.push_back({pool[i].first, pool[i].second, Label::non_match});
    return LabeledPairs::from_rows(rows, m);
  }
  std::uniform_int_distribution<RecordId> pick(0, static_cast<RecordId>(m - 1));
  std::size_t attempts = 0;
  while (rows.size() < match_n + want) {
    if (++attempts > 100 * (want + 1)) throw std::runtime_error("could not draw enough non-match pairs");
    const RecordId a = pick(rng);
    const RecordId b = pick(rng);
    if (a == b || entity_ids[a] == entity_ids[b]) continue;
    const RecordPair p = RecordPair::canonical(a, b);
    if (!seen.insert(p.packed()).second) continue;
    rows.push_back({p.first, p.second, Label::non_match});
  }
  return LabeledPairs::from_rows(rows, m);
}

std::size_t max_training_pairs(std::size_t record_count, double fraction) {
  const double total = static_cast<double>(record_count) * static_cast<double>(record_count - 1) / 2.0;
  const double limit = fraction * total;
  const double below = std::ceil(limit) - 1.0;
  return below > 0.0 ? static_cast<std::size_t>(below) : 0;
}

}  // namespace lshe
