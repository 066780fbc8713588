#include "lshe/estimator.hpp"

#include <stdexcept>

#include "lshe/union_find.hpp"

namespace lshe {

ComponentProfile::ComponentProfile(std::size_t vertex_count, std::map<std::size_t, std::uint64_t> counts)
    : vertex_count_(vertex_count) {
  std::uint64_t covered = 0;
  for (const auto& [size, n] : counts) {
    if (size == 0) throw std::invalid_argument("component size must be >= 1");
    if (n == 0) continue;
    counts_.emplace(size, n);
    covered += size * n;
  }
  if (covered != vertex_count) {
    throw std::invalid_argument("component sizes cover " + std::to_string(covered) + " of " +
                                std::to_string(vertex_count) + " vertices");
  }
}

std::uint64_t ComponentProfile::count(std::size_t size) const noexcept {
  auto it = counts_.find(size);
  return it == counts_.end() ? 0 : it->second;
}

std::uint64_t ComponentProfile::count_at_least(std::size_t size) const noexcept {
  std::uint64_t total = 0;
  for (auto it = counts_.lower_bound(size); it != counts_.end(); ++it) total += it->second;
  return total;
}

std::uint64_t ComponentProfile::component_count() const noexcept { return count_at_least(1); }

ComponentProfile component_profile(std::size_t vertex_count, std::span<const RecordPair> edges) {
  UnionFind uf(vertex_count);
  for (const RecordPair& e : edges) {
    if (e.first >= vertex_count || e.second >= vertex_count) {
      throw std::out_of_range("edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                              ") outside " + std::to_string(vertex_count) + " vertices");
    }
    uf.unite(e.first, e.second);
  }
  std::map<std::size_t, std::uint64_t> counts;
  for (std::uint32_t v = 0; v < vertex_count; ++v) {
    if (uf.find(v) == v) ++counts[uf.component_size(v)];
  }
  return ComponentProfile(vertex_count, std::move(counts));
}

}  // namespace lshe
