#pragma once

#include <span>
#include <utility>
#include <vector>

#include "pplab/env/config.hpp"
#include "pplab/env/world.hpp"
#include "pplab/random.hpp"

namespace pplab::env {

// gamma * phi_next - phi_prev
constexpr double shaping_reward(double phi_prev, double phi_next, double gamma) noexcept {
  return gamma * phi_next - phi_prev;
}

// Base (unshaped) rewards for one transition. `alive_before` holds each
// agent's alive flag at the start of the transition. Throws
// std::logic_error when no prey was alive, i.e. the episode had already ended.
std::vector<double> base_rewards(std::span<const Capture> captures,
                                 const std::vector<bool>& alive_before,
                                 const GridConfig& config);

struct TeamSpeeds {
  int predator = 1;
  int prey = 1;
};

// The predator-prey gridworld. Holds a validated configuration and the
// obstacle mask; the world state itself is a plain value passed in and out,
// so one GridWorld can drive any number of independent episodes.
class GridWorld {
 public:
  explicit GridWorld(GridConfig config);

  const GridConfig& config() const noexcept { return config_; }

  bool inside(Cell c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.x < config_.width && c.y < config_.height;
  }
  bool blocked(Cell c) const noexcept {
    return blocked_[static_cast<std::size_t>(c.y * config_.width + c.x)];
  }
  int free_cell_count() const noexcept { return static_cast<int>(free_cells_.size()); }

  // Places every agent on a distinct free cell, uniformly at random.
  // Placement consumes only `rng`.
  WorldState reset(Rng& rng, TeamSpeeds speeds = {}) const;

  // Shaping potential of `agent_id`: role sign times shaping_factor times
  // the distance to the nearest alive opponent (or the summed distance under
  // PotentialForm::SumOverOpponents). Zero when the agent is dead or no
  // opponent is alive.
  double potential(const WorldState& state, int agent_id) const;

  std::pair<bool, TerminalReason> is_terminal(const WorldState& state) const noexcept;

  // Advances one timestep. `actions` is indexed by agent id; entries for dead
  // agents are ignored. Throws std::invalid_argument on a size mismatch and
  // std::logic_error when `state` is already terminal.
  StepOutcome step(const WorldState& state, std::span<const Action> actions) const;

 private:
  GridConfig config_;
  std::vector<bool> blocked_;
  std::vector<Cell> free_cells_;
};

}  // namespace pplab::env
