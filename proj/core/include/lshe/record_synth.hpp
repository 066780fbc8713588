#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lshe/record.hpp"

namespace lshe {

// Generated records with their entity id per record (dense, first-seen order).
struct SyntheticDataset {
  Dataset dataset;
  std::vector<std::uint32_t> entity_ids;

  std::size_t entity_count() const;
};

// Restaurant-guide style records (name, address, city, cuisine): `pairs`
// entities listed twice plus `singletons` listed once. A `heavy_fraction` of
// the duplicate pairs are rewritten with a per-character corruption rate of
// `heavy_noise`; the rest get a few light edits.
struct RestaurantOptions {
  std::size_t singletons = 640;
  std::size_t pairs = 112;
  double heavy_fraction = 1.0;
  double heavy_noise = 0.35;
  std::size_t city_pool = 100;
  std::uint64_t seed = 1;
};

SyntheticDataset restaurant_surrogate(const RestaurantOptions& options = {});

// Voter-registration style records (first, middle, last, address, city, zip)
// with about 72% singleton records and the rest in pairs and triples.
SyntheticDataset voter_like(std::size_t record_count, std::uint64_t seed);

// Casualty-list style records (name, sex, age, date, governorate, cause),
// mostly singletons.
SyntheticDataset casualty_like(std::size_t record_count, std::uint64_t seed);

}  // namespace lshe
