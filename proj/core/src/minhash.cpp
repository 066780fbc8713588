#include "lshe/minhash.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lshe {

namespace {

constexpr std::uint64_t kProbeSalt = 0xD6E8FEB86659FD93ull;
constexpr std::size_t kMaxRandomProbes = 1024;

void require_non_empty(const ShingleSet& set) {
  if (set.empty()) throw std::domain_error("empty set has no minhash");
}

}  // namespace

HashFamily::HashFamily(const HashFamilySpec& spec) : seed_(spec.seed) {
  if (spec.count == 0) throw std::invalid_argument("hash family needs at least one function");
  params_.reserve(spec.count);
  for (std::size_t f = 0; f < spec.count; ++f) {
    const std::uint64_t base = hash_combine(spec.seed, f);
    params_.push_back({mix64(base ^ 0xA0761D6478BD642Full) | 1u, mix64(base ^ 0xE7037ED1A0B428DBull)});
  }
}

HashFamily make_family(const HashFamilySpec& spec) { return HashFamily(spec); }

MinHashSignature::MinHashSignature(LshShape shape, std::vector<std::uint64_t> values)
    : shape_(shape), values_(std::move(values)) {
  if (shape_.rows == 0 || shape_.tables == 0) throw std::invalid_argument("K and L must be >= 1");
  if (values_.size() != shape_.hash_count()) {
    throw std::invalid_argument("signature length " + std::to_string(values_.size()) +
                                " does not match K*L = " + std::to_string(shape_.hash_count()));
  }
}

MinHashSignature MinHashSignature::sentinel(LshShape shape) {
  return MinHashSignature(shape, std::vector<std::uint64_t>(shape.hash_count(), kSentinelValue));
}

bool MinHashSignature::is_sentinel() const noexcept {
  return !values_.empty() &&
         std::all_of(values_.begin(), values_.end(), [](std::uint64_t v) { return v == kSentinelValue; });
}

MinHashSignature signature_classical(const ShingleSet& set, const HashFamily& family, LshShape shape) {
  require_non_empty(set);
  const std::size_t n = shape.hash_count();
  if (family.size() != n) {
    throw std::invalid_argument("family has " + std::to_string(family.size()) +
                                " functions, K*L = " + std::to_string(n));
  }
  std::vector<std::uint64_t> values(n, ~std::uint64_t{0});
  for (std::size_t f = 0; f < n; ++f) {
    std::uint64_t best = ~std::uint64_t{0};
    for (std::uint64_t t : set.tokens) best = std::min(best, family(f, t));
    values[f] = best;
  }
  return MinHashSignature(shape, std::move(values));
}

MinHashSignature signature_oph_densified(const ShingleSet& set, std::uint64_t seed, LshShape shape,
                                         DensifiedStats* stats) {
  require_non_empty(set);
  const std::size_t n = shape.hash_count();
  if (n == 0) throw std::invalid_argument("K and L must be >= 1");

  const HashFamily family({seed, 1});
  constexpr std::uint64_t kEmpty = ~std::uint64_t{0};
  std::vector<std::uint64_t> bins(n, kEmpty);
  std::vector<char> occupied(n, 0);
  for (std::uint64_t t : set.tokens) {
    const std::uint64_t h = family(0, t);
    const std::size_t bin = fast_range(h, n);
    if (!occupied[bin] || h < bins[bin]) bins[bin] = h;
    occupied[bin] = 1;
  }
  if (stats) stats->token_hashes += set.size();

  std::vector<std::uint64_t> values = bins;
  const std::uint64_t probe_seed = hash_combine(seed, kProbeSalt);
  for (std::size_t i = 0; i < n; ++i) {
    if (occupied[i]) continue;
    if (stats) ++stats->empty_bins;
    const std::uint64_t bin_seed = hash_combine(probe_seed, i);
    std::size_t attempt = 1;
    std::size_t source = n;
    for (; attempt <= kMaxRandomProbes; ++attempt) {
      const std::size_t j = fast_range(hash_combine(bin_seed, attempt), n);
      if (occupied[j]) {
        source = j;
        break;
      }
    }
    if (source == n) {
      // Practically unreachable: a deterministic sweep keeps the result a pure
      // function of (set, seed).
      for (std::size_t step = 1; step <= n; ++step) {
        const std::size_t j = (i + step) % n;
        if (occupied[j]) {
          source = j;
          attempt = kMaxRandomProbes + step;
          break;
        }
      }
    }
    values[i] = hash_combine(bins[source], attempt);
  }
  return MinHashSignature(shape, std::move(values));
}

Signer::Signer(MinHashBackend backend, std::uint64_t seed, LshShape shape)
    : backend_(backend),
      seed_(seed),
      shape_(shape),
      family_(HashFamilySpec{seed, backend == MinHashBackend::classical ? shape.hash_count() : 1}) {
  if (shape.rows == 0 || shape.tables == 0) throw std::invalid_argument("K and L must be >= 1");
}

MinHashSignature Signer::sign(const ShingleSet& set) const {
  if (set.empty()) return MinHashSignature::sentinel(shape_);
  if (backend_ == MinHashBackend::classical) return signature_classical(set, family_, shape_);
  return signature_oph_densified(set, seed_, shape_);
}

std::vector<MinHashSignature> Signer::sign_all(std::span<const ShingleSet> sets) const {
  std::vector<MinHashSignature> out;
  out.reserve(sets.size());
  for (const ShingleSet& s : sets) out.push_back(sign(s));
  return out;
}

double retrieval_probability(double jaccard, std::size_t rows, std::size_t tables) {
  if (!(jaccard >= 0.0 && jaccard <= 1.0)) throw std::invalid_argument("jaccard must be in [0,1]");
  if (rows == 0 || tables == 0) throw std::invalid_argument("K and L must be >= 1");
  const double miss_one = 1.0 - std::pow(jaccard, static_cast<double>(rows));
  return 1.0 - std::pow(miss_one, static_cast<double>(tables));
}

}  // namespace lshe
