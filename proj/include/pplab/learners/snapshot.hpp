#pragma once

#include <iosfwd>
#include <string>

#include "pplab/learners/q_table.hpp"

namespace pplab::learners {

// Binary Q-table snapshot, little-endian:
//   magic "PPQT" | u32 format version | u32 descriptor length | descriptor
//   bytes | u64 action count | u64 entry count | entries
// where each entry is (u64 state key, u32 action index, f64 value), states
// in ascending key order. For debugging and warm starts only.
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  std::string descriptor;
  QTable table;
};

void write_snapshot(std::ostream& out, const QTable& table, const std::string& descriptor);

// Throws std::runtime_error on a malformed or truncated stream.
Snapshot read_snapshot(std::istream& in);

}  // namespace pplab::learners
