#include "lshe/record_synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include <fmt/format.h>

namespace lshe {

namespace {

using Rng = std::mt19937_64;
using Row = std::vector<std::string>;

constexpr std::array kOnsets{"b", "c", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p", "r", "s", "t", "v",
                             "w", "z", "br", "ch", "cl", "dr", "fr", "gr", "kh", "sh", "st", "th", "tr", ""};
constexpr std::array kVowels{"a", "e", "i", "o", "u", "a", "e", "o", "ai", "ee", "ou", "ia"};
constexpr std::array kCodas{"", "", "", "n", "r", "l", "s", "m", "t", "nd", "rt", "ck"};

constexpr std::array kCuisines{"american",   "italian",   "french",   "chinese",      "japanese", "mexican",
                               "thai",       "indian",    "seafood",  "steakhouses",  "californian",
                               "continental", "delis",    "pizza",    "vegetarian",   "greek",    "spanish",
                               "mediterranean", "cajun",  "southern", "coffee shops", "asian",    "hamburgers",
                               "barbecue",   "korean"};
constexpr std::array kSuffixes{"cafe", "grill", "restaurant", "bistro", "kitchen", "house", "bar", "diner",
                               "trattoria", "inn"};
constexpr std::array<std::array<const char*, 2>, 6> kStreetTypes{{{"st", "street"},
                                                                  {"ave", "avenue"},
                                                                  {"blvd", "boulevard"},
                                                                  {"rd", "road"},
                                                                  {"dr", "drive"},
                                                                  {"pl", "place"}}};
constexpr std::array kGovernorates{"damascus", "aleppo",   "homs",     "hama",       "latakia", "idlib",
                                   "daraa",    "deir ezzor", "raqqa",  "hasakah",    "tartus",  "quneitra",
                                   "suwayda",  "rif dimashq"};
constexpr std::array kCauses{"shooting", "shelling", "detention", "explosion", "field execution",
                             "siege",    "kidnapping", "chemical", "unknown",  "air strike"};

std::size_t uniform(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// Skewed towards low indices; larger `skew` concentrates more.
std::size_t zipf_like(Rng& rng, std::size_t n, double skew) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return std::min(n - 1, static_cast<std::size_t>(std::pow(u, skew) * static_cast<double>(n)));
}

std::string pseudo_word(Rng& rng, std::size_t min_syllables, std::size_t max_syllables) {
  const std::size_t n = min_syllables + uniform(rng, max_syllables - min_syllables + 1);
  std::string w;
  for (std::size_t i = 0; i < n; ++i) {
    w += kOnsets[uniform(rng, kOnsets.size())];
    w += kVowels[uniform(rng, kVowels.size())];
  }
  w += kCodas[uniform(rng, kCodas.size())];
  return w;
}

std::vector<std::string> word_pool(Rng& rng, std::size_t n, std::size_t min_syllables, std::size_t max_syllables) {
  std::unordered_set<std::string> seen;
  std::vector<std::string> pool;
  while (pool.size() < n) {
    std::string w = pseudo_word(rng, min_syllables, max_syllables);
    if (seen.insert(w).second) pool.push_back(std::move(w));
  }
  return pool;
}

char random_letter(Rng& rng) { return static_cast<char>('a' + uniform(rng, 26)); }

// One substitution, deletion, insertion or adjacent transposition.
void typo(std::string& s, Rng& rng) {
  if (s.empty()) {
    s.push_back(random_letter(rng));
    return;
  }
  const std::size_t i = uniform(rng, s.size());
  switch (uniform(rng, 4)) {
    case 0: s[i] = std::isdigit(static_cast<unsigned char>(s[i])) ? static_cast<char>('0' + uniform(rng, 10))
                                                                   : random_letter(rng);
      break;
    case 1: if (s.size() > 1) s.erase(i, 1);
      break;
    case 2: s.insert(s.begin() + static_cast<std::ptrdiff_t>(i), random_letter(rng));
      break;
    default:
      if (i + 1 < s.size()) std::swap(s[i], s[i + 1]);
      break;
  }
}

void typos(std::string& s, Rng& rng, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) typo(s, rng);
}

// Corrupts roughly `rate` of the characters.
void corrupt(std::string& s, Rng& rng, double rate) {
  const auto expected = rate * static_cast<double>(s.size());
  typos(s, rng, std::poisson_distribution<std::size_t>(expected)(rng));
}

std::string swap_street_type(const std::string& address) {
  for (const auto& [short_form, long_form] : kStreetTypes) {
    const std::string s = std::string(" ") + short_form;
    const std::string l = std::string(" ") + long_form;
    if (address.ends_with(s)) return address.substr(0, address.size() - s.size()) + l;
    if (address.ends_with(l)) return address.substr(0, address.size() - l.size()) + s;
  }
  return address;
}

// Shuffles records, then relabels entities densely in first-seen order.
SyntheticDataset assemble(std::vector<std::string> schema, std::vector<Row> rows, std::vector<std::uint32_t> ids,
                          Rng& rng) {
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Row> shuffled;
  shuffled.reserve(rows.size());
  std::vector<std::uint32_t> remap(ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1,
                                   std::numeric_limits<std::uint32_t>::max());
  std::vector<std::uint32_t> entity_ids;
  entity_ids.reserve(rows.size());
  std::uint32_t next = 0;
  for (std::size_t i : order) {
    shuffled.push_back(std::move(rows[i]));
    auto& r = remap[ids[i]];
    if (r == std::numeric_limits<std::uint32_t>::max()) r = next++;
    entity_ids.push_back(r);
  }
  return {Dataset(std::move(schema), std::move(shuffled)), std::move(entity_ids)};
}

struct ClusterPlan {
  std::size_t singles = 0;
  std::size_t pairs = 0;
  std::size_t triples = 0;
};

ClusterPlan plan_clusters(std::size_t record_count, double pair_share, double triple_share) {
  ClusterPlan plan;
  plan.triples = static_cast<std::size_t>(std::floor(triple_share * static_cast<double>(record_count) / 3.0));
  plan.pairs = static_cast<std::size_t>(std::floor(pair_share * static_cast<double>(record_count) / 2.0));
  if (3 * plan.triples + 2 * plan.pairs > record_count) throw std::invalid_argument("cluster shares exceed 1");
  plan.singles = record_count - 3 * plan.triples - 2 * plan.pairs;
  return plan;
}

}  // namespace

std::size_t SyntheticDataset::entity_count() const {
  return entity_ids.empty() ? 0 : *std::max_element(entity_ids.begin(), entity_ids.end()) + 1;
}

SyntheticDataset restaurant_surrogate(const RestaurantOptions& options) {
  if (options.singletons + options.pairs == 0) throw std::invalid_argument("no entities requested");
  Rng rng(options.seed);
  const auto name_words = word_pool(rng, 1500, 1, 3);
  const auto streets = word_pool(rng, 400, 1, 3);
  auto cities = word_pool(rng, options.city_pool, 2, 3);
  for (auto& c : cities) {
    if (coin(rng, 0.3)) c += " " + pseudo_word(rng, 1, 2);
  }

  auto make_entity = [&]() {
    std::string name;
    if (coin(rng, 0.1)) name = "the ";
    const std::size_t words = 1 + uniform(rng, 3);
    for (std::size_t w = 0; w < words; ++w) {
      if (w) name += ' ';
      name += name_words[uniform(rng, name_words.size())];
    }
    if (coin(rng, 0.4)) name += std::string(" ") + kSuffixes[uniform(rng, kSuffixes.size())];
    const auto& type = kStreetTypes[uniform(rng, kStreetTypes.size())];
    std::string address = fmt::format("{} {} {}", 1 + uniform(rng, 9999), streets[zipf_like(rng, streets.size(), 1.5)],
                                      coin(rng, 0.5) ? type[0] : type[1]);
    return Row{std::move(name), std::move(address), cities[zipf_like(rng, cities.size(), 2.0)],
               kCuisines[zipf_like(rng, kCuisines.size(), 1.5)]};
  };

  std::vector<Row> rows;
  std::vector<std::uint32_t> ids;
  std::uint32_t entity = 0;
  for (std::size_t i = 0; i < options.pairs; ++i, ++entity) {
    Row a = make_entity();
    Row b = a;
    if (coin(rng, options.heavy_fraction)) {
      for (auto& cell : b) corrupt(cell, rng, options.heavy_noise);
      b[1] = swap_street_type(b[1]);
      if (coin(rng, 0.5)) b[3] = kCuisines[uniform(rng, kCuisines.size())];
    } else {
      if (coin(rng, 0.5)) typo(b[0], rng);
      if (coin(rng, 0.4)) b[1] = swap_street_type(b[1]);
      if (coin(rng, 0.3)) typo(b[1], rng);
      if (coin(rng, 0.3)) b[3] = kCuisines[uniform(rng, kCuisines.size())];
    }
    rows.push_back(std::move(a));
    rows.push_back(std::move(b));
    ids.insert(ids.end(), {entity, entity});
  }
  for (std::size_t i = 0; i < options.singletons; ++i, ++entity) {
    rows.push_back(make_entity());
    ids.push_back(entity);
  }
  return assemble({"name", "address", "city", "cuisine"}, std::move(rows), std::move(ids), rng);
}

SyntheticDataset voter_like(std::size_t record_count, std::uint64_t seed) {
  if (record_count < 1) throw std::invalid_argument("no records requested");
  Rng rng(seed);
  const ClusterPlan plan = plan_clusters(record_count, 0.22, 0.06);
  const auto first_names = word_pool(rng, 800, 1, 3);
  const auto last_names = word_pool(rng, 20000, 2, 3);
  const auto streets = word_pool(rng, 3000, 1, 3);
  const auto cities = word_pool(rng, 300, 2, 3);

  auto make_person = [&]() {
    const std::size_t city = zipf_like(rng, cities.size(), 2.0);
    const auto& type = kStreetTypes[uniform(rng, kStreetTypes.size())];
    return Row{first_names[zipf_like(rng, first_names.size(), 2.0)],
               coin(rng, 0.7) ? std::string(1, random_letter(rng)) : std::string(),
               last_names[zipf_like(rng, last_names.size(), 1.3)],
               fmt::format("{} {} {}", 1 + uniform(rng, 9999), streets[zipf_like(rng, streets.size(), 1.5)], type[0]),
               cities[city],
               fmt::format("{:05}", 27000 + city * 17 + uniform(rng, 3))};
  };
  auto variant = [&](const Row& base) {
    Row r = base;
    const std::size_t edits = uniform(rng, 3);
    for (std::size_t e = 0; e < edits; ++e) {
      const std::size_t field = uniform(rng, 4);
      typo(r[field == 1 ? 0 : field == 3 ? 3 : field], rng);
    }
    if (coin(rng, 0.2)) r[1].clear();
    if (coin(rng, 0.2)) r[3] = swap_street_type(r[3]);
    if (coin(rng, 0.05)) {
      const auto& type = kStreetTypes[uniform(rng, kStreetTypes.size())];
      r[3] = fmt::format("{} {} {}", 1 + uniform(rng, 9999), streets[zipf_like(rng, streets.size(), 1.5)], type[0]);
    }
    return r;
  };

  std::vector<Row> rows;
  std::vector<std::uint32_t> ids;
  rows.reserve(record_count);
  std::uint32_t entity = 0;
  auto add_cluster = [&](std::size_t size) {
    const Row base = make_person();
    rows.push_back(base);
    ids.push_back(entity);
    for (std::size_t i = 1; i < size; ++i) {
      rows.push_back(variant(base));
      ids.push_back(entity);
    }
    ++entity;
  };
  for (std::size_t i = 0; i < plan.triples; ++i) add_cluster(3);
  for (std::size_t i = 0; i < plan.pairs; ++i) add_cluster(2);
  for (std::size_t i = 0; i < plan.singles; ++i) add_cluster(1);
  return assemble({"first_name", "middle_initial", "last_name", "address", "city", "zip"}, std::move(rows),
                  std::move(ids), rng);
}

SyntheticDataset casualty_like(std::size_t record_count, std::uint64_t seed) {
  if (record_count < 1) throw std::invalid_argument("no records requested");
  Rng rng(seed);
  const ClusterPlan plan = plan_clusters(record_count, 0.10, 0.03);
  const auto given = word_pool(rng, 1500, 1, 3);
  const auto family = word_pool(rng, 30000, 2, 3);

  auto make_person = [&]() {
    const bool male = coin(rng, 0.8);
    std::string name = fmt::format("{} {} {}", given[zipf_like(rng, given.size(), 2.0)],
                                   given[zipf_like(rng, given.size(), 2.0)],
                                   family[zipf_like(rng, family.size(), 1.3)]);
    return Row{std::move(name), male ? "male" : "female",
               coin(rng, 0.6) ? std::to_string(1 + uniform(rng, 80)) : std::string(),
               fmt::format("{}-{:02}-{:02}", 2011 + uniform(rng, 5), 1 + uniform(rng, 12), 1 + uniform(rng, 28)),
               kGovernorates[zipf_like(rng, kGovernorates.size(), 1.5)], kCauses[uniform(rng, kCauses.size())]};
  };
  auto variant = [&](const Row& base) {
    Row r = base;
    typos(r[0], rng, uniform(rng, 3));
    if (coin(rng, 0.3)) r[2].clear();
    if (coin(rng, 0.2)) typo(r[3], rng);
    if (coin(rng, 0.2)) r[5] = kCauses[uniform(rng, kCauses.size())];
    return r;
  };

  std::vector<Row> rows;
  std::vector<std::uint32_t> ids;
  rows.reserve(record_count);
  std::uint32_t entity = 0;
  auto add_cluster = [&](std::size_t size) {
    const Row base = make_person();
    rows.push_back(base);
    ids.push_back(entity);
    for (std::size_t i = 1; i < size; ++i) {
      rows.push_back(variant(base));
      ids.push_back(entity);
    }
    ++entity;
  };
  for (std::size_t i = 0; i < plan.triples; ++i) add_cluster(3);
  for (std::size_t i = 0; i < plan.pairs; ++i) add_cluster(2);
  for (std::size_t i = 0; i < plan.singles; ++i) add_cluster(1);
  return assemble({"name", "sex", "age", "date_of_death", "governorate", "cause"}, std::move(rows), std::move(ids),
                  rng);
}

}  // namespace lshe
