#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lshe/hash.hpp"
#include "lshe/record.hpp"

namespace lshe {

// K rows per table, L tables. A signature holds K*L values.
struct LshShape {
  std::size_t rows = 1;    // K
  std::size_t tables = 1;  // L

  std::size_t hash_count() const noexcept { return rows * tables; }
  bool operator==(const LshShape&) const = default;
};

struct HashFamilySpec {
  std::uint64_t seed = 0;
  std::size_t count = 1;
};

// Seeded stand-ins for random permutations of the 64-bit token universe.
// Function f is t -> mix64(a_f * t + b_f) with a_f odd, which is a bijection.
class HashFamily {
 public:
  struct Parameters {
    std::uint64_t multiplier;
    std::uint64_t offset;
    bool operator==(const Parameters&) const = default;
  };

  explicit HashFamily(const HashFamilySpec& spec);

  std::size_t size() const noexcept { return params_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  std::span<const Parameters> parameters() const noexcept { return params_; }

  std::uint64_t operator()(std::size_t f, std::uint64_t token) const noexcept {
    const Parameters& p = params_[f];
    return mix64(token * p.multiplier + p.offset);
  }

 private:
  std::uint64_t seed_;
  std::vector<Parameters> params_;
};

HashFamily make_family(const HashFamilySpec& spec);

// K*L minhash values; slot (table i, row j) lives at index i*K + j.
class MinHashSignature {
 public:
  MinHashSignature() = default;
  MinHashSignature(LshShape shape, std::vector<std::uint64_t> values);

  // Reserved signature for records without tokens: every slot holds
  // kSentinelValue. Samplers skip such records.
  static MinHashSignature sentinel(LshShape shape);
  static constexpr std::uint64_t kSentinelValue = ~std::uint64_t{0};

  LshShape shape() const noexcept { return shape_; }
  std::span<const std::uint64_t> values() const noexcept { return values_; }
  std::uint64_t at(std::size_t table, std::size_t row) const { return values_.at(table * shape_.rows + row); }
  std::span<const std::uint64_t> table(std::size_t i) const {
    return std::span<const std::uint64_t>(values_).subspan(i * shape_.rows, shape_.rows);
  }
  bool is_sentinel() const noexcept;

  bool operator==(const MinHashSignature&) const = default;

 private:
  LshShape shape_;
  std::vector<std::uint64_t> values_;
};

// Independent-permutation minhash. family.size() must equal shape.hash_count().
// Throws std::domain_error for an empty set.
MinHashSignature signature_classical(const ShingleSet& set, const HashFamily& family, LshShape shape);

struct DensifiedStats {
  std::uint64_t token_hashes = 0;  // family hash evaluations
  std::uint64_t empty_bins = 0;    // bins filled by densification
};

// One-permutation hashing with optimal densification: each token is hashed
// once and routed to one of K*L bins by the high bits of its hash; each bin
// keeps its minimum. Empty bins borrow from an occupied bin chosen by a
// per-bin probe sequence, mixing the probe attempt into the borrowed value.
// Throws std::domain_error for an empty set.
MinHashSignature signature_oph_densified(const ShingleSet& set, std::uint64_t seed, LshShape shape,
                                         DensifiedStats* stats = nullptr);

enum class MinHashBackend { classical, densified };

// Computes signatures for a whole collection. Empty sets receive the sentinel.
class Signer {
 public:
  Signer(MinHashBackend backend, std::uint64_t seed, LshShape shape);

  MinHashSignature sign(const ShingleSet& set) const;
  std::vector<MinHashSignature> sign_all(std::span<const ShingleSet> sets) const;

  MinHashBackend backend() const noexcept { return backend_; }
  std::uint64_t seed() const noexcept { return seed_; }
  LshShape shape() const noexcept { return shape_; }

 private:
  MinHashBackend backend_;
  std::uint64_t seed_;
  LshShape shape_;
  HashFamily family_;
};

// 1 - (1 - J^K)^L
double retrieval_probability(double jaccard, std::size_t rows, std::size_t tables);

}  // namespace lshe
