#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "pplab/env/state_codec.hpp"

namespace pplab::learners {

using env::StateKey;

// Sparse state-action value table. Storage is allocated one row (all
// `action_count` entries of a state) at a time, on first write; reads of
// absent states return exactly 0.0 and never allocate. Rows live in fixed-size
// blocks so row pointers stay valid as the table grows.
class QTable {
 public:
  explicit QTable(std::size_t action_count);

  QTable(QTable&&) noexcept = default;
  QTable& operator=(QTable&&) noexcept = default;

  std::size_t action_count() const noexcept { return action_count_; }
  std::size_t state_count() const noexcept { return index_.size(); }
  std::size_t entry_count() const noexcept { return index_.size() * action_count_; }

  double value(StateKey s, std::size_t action) const noexcept;

  // nullptr when the state has never been written.
  const double* find_row(StateKey s) const noexcept;

  // Row for `s`, inserting a zero row when absent.
  std::span<double> row_for_update(StateKey s);

  // Visits every stored row in an unspecified order.
  template <typename Fn>
  void for_each_row(Fn&& fn) const {
    for (const auto& [key, slot] : index_) fn(StateKey{key}, std::span<const double>(row_at(slot), action_count_));
  }

  // Stored states sorted by key; deterministic iteration for persistence.
  std::vector<StateKey> sorted_states() const;

  void clear();

 private:
  static constexpr std::size_t kRowsPerBlock = 4096;

  double* row_at(std::uint32_t slot) const noexcept {
    return blocks_[slot / kRowsPerBlock].get() + (slot % kRowsPerBlock) * action_count_;
  }

  std::size_t action_count_;
  absl::flat_hash_map<std::uint64_t, std::uint32_t> index_;
  std::vector<std::unique_ptr<double[]>> blocks_;
};

}  // namespace pplab::learners
