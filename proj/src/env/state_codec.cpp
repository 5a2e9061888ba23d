#include "pplab/env/state_codec.hpp"

#include <bit>
#include <string>

namespace pplab::env {

namespace {

int bits_for(std::uint64_t distinct_values) {
  return distinct_values <= 1 ? 0 : static_cast<int>(std::bit_width(distinct_values - 1));
}

}  // namespace

StateCodec::StateCodec(const GridConfig& config)
    : width_(config.width),
      agent_count_(config.agent_count()),
      position_bits_(bits_for(static_cast<std::uint64_t>(config.width) * static_cast<std::uint64_t>(config.height))),
      stamina_bits_(bits_for(static_cast<std::uint64_t>(config.stamina_max) + 1)) {
  if (total_bits() > 63)
    throw ConfigError("grid", "joint state needs " + std::to_string(total_bits()) +
                                  " key bits; at most 63 are supported");
}

StateKey StateCodec::encode(const WorldState& state) const noexcept {
  std::uint64_t bits = 0;
  int shift = 0;
  for (const AgentState& a : state.agents) {
    if (a.alive) {
      const auto cell = static_cast<std::uint64_t>(a.position.y * width_ + a.position.x);
      const std::uint64_t packed = 1u | (static_cast<std::uint64_t>(a.stamina) << 1) |
                                   (cell << (1 + stamina_bits_));
      bits |= packed << shift;
    }
    shift += bits_per_agent();
  }
  return StateKey{bits};
}

std::vector<AgentKeyFields> StateCodec::decode(StateKey key) const {
  std::vector<AgentKeyFields> out(static_cast<std::size_t>(agent_count_));
  const std::uint64_t stamina_mask = (std::uint64_t{1} << stamina_bits_) - 1;
  const std::uint64_t cell_mask = (std::uint64_t{1} << position_bits_) - 1;
  std::uint64_t bits = key.bits;
  for (AgentKeyFields& f : out) {
    f.alive = (bits & 1u) != 0;
    f.stamina = static_cast<int>((bits >> 1) & stamina_mask);
    const auto cell = static_cast<int>((bits >> (1 + stamina_bits_)) & cell_mask);
    f.position = {cell % width_, cell / width_};
    bits >>= bits_per_agent();
  }
  return out;
}

}  // namespace pplab::env
