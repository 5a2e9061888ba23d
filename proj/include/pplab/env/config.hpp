#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pplab/env/world.hpp"

namespace pplab {

// Raised for invalid user-supplied configuration (as opposed to programming
// errors, which surface as std::invalid_argument / std::logic_error).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace pplab

namespace pplab::env {

enum class TeamRewardMode { TeamSum, TeamMean };

// NearestOpponent follows the stated pursuit intent; SumOverOpponents is the
// literal weighted-sum potential, kept for sensitivity runs.
enum class PotentialForm { NearestOpponent, SumOverOpponents };

struct GridConfig {
  int width = 8;
  int height = 8;
  std::vector<Cell> obstacles;
  int n_predators = 2;
  int n_prey = 2;
  int max_timesteps = 200;

  int stamina_max = 5;
  int regen_on_stay = 1;
  // When false, movement is free and stamina stays pinned at stamina_max.
  bool stamina_enabled = true;

  double capture_reward = 100.0;
  double prey_capture_penalty = -100.0;
  double predator_step_cost = -5.0;

  double shaping_factor = 1.0;
  PotentialForm potential_form = PotentialForm::NearestOpponent;
  bool prey_shaping = true;

  double gamma = 0.9;
  TeamRewardMode team_reward_mode = TeamRewardMode::TeamMean;

  int agent_count() const noexcept { return n_predators + n_prey; }
  Team team_of(int agent_id) const noexcept {
    return agent_id < n_predators ? Team::Predator : Team::Prey;
  }

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

// Throws ConfigError naming the first violated constraint.
void validate(const GridConfig& config);

}  // namespace pplab::env
