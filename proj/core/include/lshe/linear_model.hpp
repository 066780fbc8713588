#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lshe/oracle.hpp"
#include "lshe/record.hpp"

namespace lshe {

inline constexpr std::size_t kDefaultFeatureDimension = std::size_t{1} << 18;

// Hashed indicator vector of the symmetric difference of two shingle sets.
struct PairFeatureVector {
  std::vector<std::uint32_t> indices;  // sorted, unique, < dimension
  std::size_t dimension = 0;

  bool operator==(const PairFeatureVector&) const = default;
};

// Active positions are {token mod dimension : token in a Δ b}. Symmetric in
// its arguments. Requires dimension >= 2.
PairFeatureVector pair_features(const ShingleSet& a, const ShingleSet& b, std::size_t dimension);
PairFeatureVector pair_features(const Record& a, const Record& b, unsigned shingle_k, std::size_t dimension,
                                const NormalizationPolicy& policy = {});

struct TrainingMetrics {
  double cv_accuracy = 0.0;
  double holdout_accuracy = 0.0;
  double holdout_precision = 0.0;
  double holdout_recall = 0.0;
  std::size_t train_pairs = 0;
  std::size_t holdout_pairs = 0;
};

// Predicts match iff weights·x + bias > 0.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  unsigned shingle_k = 3;
  std::size_t dimension = kDefaultFeatureDimension;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  std::size_t epochs = 0;
  TrainingMetrics metrics;

  double score(const PairFeatureVector& x) const;
  Label predict(const PairFeatureVector& x) const { return score(x) > 0.0 ? Label::match : Label::non_match; }
};

struct TrainingConfig {
  unsigned shingle_k = 3;
  std::size_t dimension = kDefaultFeatureDimension;
  NormalizationPolicy normalization{};
  // Hyper-parameter grid searched by k-fold cross-validation.
  std::vector<double> lambdas{1e-5, 1e-4, 1e-3};
  std::vector<std::size_t> epochs{5, 15};
  std::size_t folds = 5;
  double holdout_fraction = 0.2;
  double learning_rate = 0.1;
  std::uint64_t seed = 1;
};

// Hinge-loss linear model fit by seeded stochastic subgradient descent with
// L2 regularization; (lambda, epochs) chosen by cross-validated accuracy on
// the training split, then refit on the whole training split. Throws
// std::invalid_argument if either class is missing.
LinearModel train_linear(const Dataset& dataset, const LabeledPairs& labeled, const TrainingConfig& config);

// Model file: one line of JSON (format, version, shingle_k, dimension, bias,
// seed, lambda, epochs, metrics) terminated by '\n', then `dimension`
// little-endian IEEE-754 doubles.
void save_model(const std::filesystem::path& path, const LinearModel& model);
LinearModel load_model(const std::filesystem::path& path);

// Labels pairs with a trained model. Shingle sets are computed once with the
// model's shingle length.
class ClassifierOracle final : public LabelOracle {
 public:
  ClassifierOracle(LinearModel model, const Dataset& dataset, const NormalizationPolicy& policy = {});
  ClassifierOracle(LinearModel model, std::vector<ShingleSet> sets);

  Label label(RecordPair pair) const override;
  std::string_view name() const noexcept override { return "classifier"; }
  const LinearModel& model() const noexcept { return model_; }

 private:
  LinearModel model_;
  std::vector<ShingleSet> sets_;
};

struct TrainingSampleOptions {
  // Share of the sample taken from match pairs (capped by how many exist).
  double match_share = 0.5;
  // When non-empty, non-matches are drawn from these candidate pairs instead
  // of uniformly from all pairs.
  std::span<const RecordPair> negative_pool{};
};

// Training sample drawn with entity-id ground truth: uniformly chosen match
// pairs plus non-match pairs. Defaults to a balanced sample with uniform
// non-matches.
LabeledPairs sample_training_pairs(std::span<const std::uint32_t> entity_ids, std::size_t count,
                                   std::uint64_t seed, const TrainingSampleOptions& options = {});

// Largest training set below `fraction` of all C(M, 2) pairs.
std::size_t max_training_pairs(std::size_t record_count, double fraction = 1e-4);

}  // namespace lshe
