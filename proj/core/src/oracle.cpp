#include "lshe/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace lshe {

EntityIdOracle::EntityIdOracle(std::vector<std::uint32_t> entity_ids) : entity_ids_(std::move(entity_ids)) {
  std::unordered_set<std::uint32_t> distinct(entity_ids_.begin(), entity_ids_.end());
  entity_count_ = distinct.size();
}

Label EntityIdOracle::label(RecordPair pair) const {
  return entity_ids_.at(pair.first) == entity_ids_.at(pair.second) ? Label::match : Label::non_match;
}

PairListOracle::PairListOracle(LabeledPairs truth) : truth_(std::move(truth)) {}

Label PairListOracle::label(RecordPair pair) const {
  if (auto found = truth_.find(pair)) return *found;
  throw std::out_of_range("uncovered pair (" + std::to_string(pair.first) + "," +
                          std::to_string(pair.second) + ")");
}

EdgeQueryBudget::EdgeQueryBudget(const LabelOracle& oracle, std::uint64_t limit)
    : oracle_(oracle), limit_(limit) {
  memo_.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(limit, 1u << 22)));
}

std::optional<Label> EdgeQueryBudget::query(RecordPair pair) {
  if (auto it = memo_.find(pair.packed()); it != memo_.end()) return it->second;
  if (used_ == limit_) return std::nullopt;
  const Label l = oracle_.label(pair);
  memo_.emplace(pair.packed(), l);
  ++used_;
  return l;
}

}  // namespace lshe
