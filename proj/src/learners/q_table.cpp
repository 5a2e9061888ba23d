#include "pplab/learners/q_table.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace pplab::learners {

QTable::QTable(std::size_t action_count) : action_count_(action_count) {
  if (action_count == 0) throw std::invalid_argument("QTable: action_count must be positive");
}

double QTable::value(StateKey s, std::size_t action) const noexcept {
  const double* row = find_row(s);
  return row == nullptr ? 0.0 : row[action];
}

const double* QTable::find_row(StateKey s) const noexcept {
  auto it = index_.find(s.bits);
  return it == index_.end() ? nullptr : row_at(it->second);
}

std::span<double> QTable::row_for_update(StateKey s) {
  auto [it, inserted] = index_.try_emplace(s.bits, 0u);
  if (inserted) {
    const std::size_t slot = index_.size() - 1;
    if (slot > std::numeric_limits<std::uint32_t>::max()) {
      index_.erase(it);
      throw std::length_error("QTable: row capacity exhausted");
    }
    if (slot / kRowsPerBlock >= blocks_.size())
      blocks_.push_back(std::make_unique<double[]>(kRowsPerBlock * action_count_));
    it->second = static_cast<std::uint32_t>(slot);
  }
  return {row_at(it->second), action_count_};
}

std::vector<StateKey> QTable::sorted_states() const {
  std::vector<StateKey> keys;
  keys.reserve(index_.size());
  for (const auto& [key, slot] : index_) keys.push_back(StateKey{key});
  std::sort(keys.begin(), keys.end());
  return keys;
}

void QTable::clear() {
  index_.clear();
  blocks_.clear();
}

}  // namespace pplab::learners
