#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

#include "pplab/env/config.hpp"
#include "pplab/env/world.hpp"

namespace pplab::env {

// Packed joint-state key. Bit 63 is never set, so ~0 is free as a sentinel.
struct StateKey {
  std::uint64_t bits = 0;

  friend constexpr bool operator==(StateKey, StateKey) = default;
  friend constexpr auto operator<=>(StateKey, StateKey) = default;

  template <typename H>
  friend H AbslHashValue(H h, StateKey k) {
    return H::combine(std::move(h), k.bits);
  }
};

struct AgentKeyFields {
  Cell position;
  int stamina = 0;
  bool alive = false;

  friend bool operator==(const AgentKeyFields&, const AgentKeyFields&) = default;
};

// Mixed-width bit packing of every agent's (position, stamina, alive).
// Speed, team and timestep are condition constants or deliberately excluded.
// A dead agent packs as all-zero fields: once captured its last cell and
// stamina no longer influence the dynamics.
class StateCodec {
 public:
  explicit StateCodec(const GridConfig& config);

  StateKey encode(const WorldState& state) const noexcept;
  std::vector<AgentKeyFields> decode(StateKey key) const;

  int bits_per_agent() const noexcept { return position_bits_ + stamina_bits_ + 1; }
  int total_bits() const noexcept { return bits_per_agent() * agent_count_; }

 private:
  int width_;
  int agent_count_;
  int position_bits_;
  int stamina_bits_;
};

}  // namespace pplab::env

template <>
struct std::hash<pplab::env::StateKey> {
  std::size_t operator()(pplab::env::StateKey k) const noexcept {
    return std::hash<std::uint64_t>{}(k.bits);
  }
};
