#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lshe/record.hpp"

namespace lshe {

// Answers match / non-match for a record pair. Implementations are pure:
// the same pair always gets the same label.
class LabelOracle {
 public:
  virtual ~LabelOracle() = default;
  virtual Label label(RecordPair pair) const = 0;
  virtual std::string_view name() const noexcept = 0;
};

// Match iff both records carry the same entity id. Never fails.
class EntityIdOracle final : public LabelOracle {
 public:
  explicit EntityIdOracle(std::vector<std::uint32_t> entity_ids);

  Label label(RecordPair pair) const override;
  std::string_view name() const noexcept override { return "truth:entity-id"; }

  std::span<const std::uint32_t> entity_ids() const noexcept { return entity_ids_; }
  std::size_t entity_count() const noexcept { return entity_count_; }

 private:
  std::vector<std::uint32_t> entity_ids_;
  std::size_t entity_count_ = 0;
};

// Answers from an explicit labeled pair list. Throws std::out_of_range
// ("uncovered pair") for a pair the list does not contain.
class PairListOracle final : public LabelOracle {
 public:
  explicit PairListOracle(LabeledPairs truth);

  Label label(RecordPair pair) const override;
  std::string_view name() const noexcept override { return "truth:pairs"; }

 private:
  LabeledPairs truth_;
};

// Caps the number of distinct pairs sent to an oracle. Repeated queries are
// answered from a memo and are free.
class EdgeQueryBudget {
 public:
  EdgeQueryBudget(const LabelOracle& oracle, std::uint64_t limit);

  // nullopt once the budget is spent and the pair has not been seen before.
  std::optional<Label> query(RecordPair pair);

  std::uint64_t used() const noexcept { return used_; }
  std::uint64_t limit() const noexcept { return limit_; }
  std::uint64_t remaining() const noexcept { return limit_ - used_; }
  bool exhausted() const noexcept { return used_ == limit_; }

 private:
  const LabelOracle& oracle_;
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
  std::unordered_map<std::uint64_t, Label> memo_;
};

}  // namespace lshe
