#include "pplab/env/grid_world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pplab::env {

std::string_view to_string(Action a) noexcept {
  switch (a) {
    case Action::Up: return "UP";
    case Action::Down: return "DOWN";
    case Action::Left: return "LEFT";
    case Action::Right: return "RIGHT";
    case Action::Stay: return "STAY";
  }
  return "?";
}

void validate(const GridConfig& c) {
  if (c.width < 2) throw ConfigError("width", "must be >= 2");
  if (c.height < 2) throw ConfigError("height", "must be >= 2");
  for (const Cell& o : c.obstacles) {
    if (o.x < 0 || o.y < 0 || o.x >= c.width || o.y >= c.height)
      throw ConfigError("obstacles", "cell (" + std::to_string(o.x) + "," + std::to_string(o.y) +
                                         ") lies outside the grid");
  }
  std::vector<Cell> unique_obstacles = c.obstacles;
  std::sort(unique_obstacles.begin(), unique_obstacles.end());
  unique_obstacles.erase(std::unique(unique_obstacles.begin(), unique_obstacles.end()),
                         unique_obstacles.end());
  if (static_cast<int>(unique_obstacles.size()) >= c.width * c.height)
    throw ConfigError("obstacles", "must not cover every cell");
  if (c.n_predators < 1) throw ConfigError("n_predators", "must be >= 1");
  if (c.n_prey < 1) throw ConfigError("n_prey", "must be >= 1");
  if (c.max_timesteps < 1) throw ConfigError("max_timesteps", "must be >= 1");
  if (c.stamina_max < 1) throw ConfigError("stamina_max", "must be >= 1");
  if (c.regen_on_stay < 0) throw ConfigError("regen_on_stay", "must be >= 0");
  if (!(c.shaping_factor >= 0.0) || !std::isfinite(c.shaping_factor))
    throw ConfigError("shaping_factor", "must be finite and >= 0");
  if (!(c.gamma > 0.0 && c.gamma < 1.0)) throw ConfigError("gamma", "must satisfy 0 < gamma < 1");
  if (!std::isfinite(c.capture_reward)) throw ConfigError("capture_reward", "must be finite");
  if (!std::isfinite(c.prey_capture_penalty))
    throw ConfigError("prey_capture_penalty", "must be finite");
  if (!std::isfinite(c.predator_step_cost))
    throw ConfigError("predator_step_cost", "must be finite");
}

std::vector<double> base_rewards(std::span<const Capture> captures,
                                 const std::vector<bool>& alive_before, const GridConfig& config) {
  if (alive_before.size() != static_cast<std::size_t>(config.agent_count()))
    throw std::invalid_argument("base_rewards: alive flag count does not match agent count");
  const bool any_prey = std::any_of(alive_before.begin() + config.n_predators, alive_before.end(),
                                    [](bool a) { return a; });
  if (!any_prey) throw std::logic_error("base_rewards: no prey alive, episode already terminal");

  std::vector<double> reward(alive_before.size(), 0.0);
  for (int i = 0; i < config.n_predators; ++i)
    if (alive_before[static_cast<std::size_t>(i)]) reward[static_cast<std::size_t>(i)] = config.predator_step_cost;
  for (const Capture& cap : captures) {
    reward[static_cast<std::size_t>(cap.predator)] += config.capture_reward;
    reward[static_cast<std::size_t>(cap.prey)] += config.prey_capture_penalty;
  }
  return reward;
}

GridWorld::GridWorld(GridConfig config) : config_(std::move(config)) {
  validate(config_);
  blocked_.assign(static_cast<std::size_t>(config_.width * config_.height), false);
  for (const Cell& o : config_.obstacles)
    blocked_[static_cast<std::size_t>(o.y * config_.width + o.x)] = true;
  for (int y = 0; y < config_.height; ++y)
    for (int x = 0; x < config_.width; ++x)
      if (!blocked({x, y})) free_cells_.push_back({x, y});
  if (free_cell_count() < config_.agent_count())
    throw ConfigError("obstacles", "only " + std::to_string(free_cell_count()) +
                                       " free cells for " + std::to_string(config_.agent_count()) +
                                       " agents");
}

WorldState GridWorld::reset(Rng& rng, TeamSpeeds speeds) const {
  std::vector<Cell> cells = free_cells_;
  const int n = config_.agent_count();
  WorldState state;
  state.agents.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // partial Fisher-Yates: cells[i] becomes a uniform draw from the rest
    const auto j = static_cast<std::size_t>(i) + uniform_index(rng, cells.size() - static_cast<std::size_t>(i));
    std::swap(cells[static_cast<std::size_t>(i)], cells[j]);
    AgentState a;
    a.id = i;
    a.team = config_.team_of(i);
    a.position = cells[static_cast<std::size_t>(i)];
    a.stamina = config_.stamina_max;
    a.speed = a.team == Team::Predator ? speeds.predator : speeds.prey;
    a.alive = true;
    state.agents.push_back(a);
  }
  return state;
}

double GridWorld::potential(const WorldState& state, int agent_id) const {
  const AgentState& self = state.agents.at(static_cast<std::size_t>(agent_id));
  if (!self.alive || config_.shaping_factor == 0.0) return 0.0;
  int nearest = std::numeric_limits<int>::max();
  int total = 0;
  bool any = false;
  for (const AgentState& other : state.agents) {
    if (!other.alive || other.team == self.team) continue;
    const int d = manhattan_distance(self.position, other.position);
    nearest = std::min(nearest, d);
    total += d;
    any = true;
  }
  if (!any) return 0.0;
  const double distance =
      config_.potential_form == PotentialForm::NearestOpponent ? nearest : total;
  const double sign = self.team == Team::Predator ? -1.0 : 1.0;
  return sign * config_.shaping_factor * distance;
}

std::pair<bool, TerminalReason> GridWorld::is_terminal(const WorldState& state) const noexcept {
  const bool prey_alive = std::any_of(state.agents.begin(), state.agents.end(), [](const AgentState& a) {
    return a.team == Team::Prey && a.alive;
  });
  if (!prey_alive) return {true, TerminalReason::AllPreyCaptured};
  if (state.timestep >= config_.max_timesteps) return {true, TerminalReason::Timeout};
  return {false, TerminalReason::None};
}

StepOutcome GridWorld::step(const WorldState& state, std::span<const Action> actions) const {
  if (actions.size() != state.agents.size())
    throw std::invalid_argument("step: expected " + std::to_string(state.agents.size()) +
                                " actions, got " + std::to_string(actions.size()));
  if (is_terminal(state).first) throw std::logic_error("step: state is already terminal");

  StepOutcome out;
  out.next_state = state;
  out.next_state.timestep = state.timestep + 1;
  auto& agents = out.next_state.agents;

  int rounds = 0;
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (agents[i].alive && actions[i] != Action::Stay) rounds = std::max(rounds, agents[i].speed);

  // Round-robin micro-steps: every agent's first move, then every second move.
  for (int round = 0; round < rounds; ++round) {
    for (std::size_t i = 0; i < agents.size(); ++i) {
      AgentState& mover = agents[i];
      if (!mover.alive || actions[i] == Action::Stay || mover.speed <= round) continue;
      if (config_.stamina_enabled && mover.stamina == 0) continue;
      const Cell target = offset(mover.position, actions[i]);
      if (!inside(target) || blocked(target)) continue;

      AgentState* victim = nullptr;
      bool cancelled = false;
      for (AgentState& other : agents) {
        if (&other == &mover || !other.alive || other.position != target) continue;
        if (other.team == mover.team || mover.team == Team::Prey) {
          cancelled = true;
        } else {
          victim = &other;
        }
        break;
      }
      if (cancelled) continue;

      mover.position = target;
      if (config_.stamina_enabled) --mover.stamina;
      if (victim != nullptr) {
        victim->alive = false;
        out.captures.push_back({mover.id, victim->id});
      }
    }
  }

  if (config_.stamina_enabled) {
    for (std::size_t i = 0; i < agents.size(); ++i)
      if (agents[i].alive && actions[i] == Action::Stay)
        agents[i].stamina = std::min(config_.stamina_max, agents[i].stamina + config_.regen_on_stay);
  }

  std::vector<bool> alive_before(state.agents.size());
  for (std::size_t i = 0; i < state.agents.size(); ++i) alive_before[i] = state.agents[i].alive;
  out.base_reward = base_rewards(out.captures, alive_before, config_);

  out.shaping.assign(state.agents.size(), 0.0);
  for (std::size_t i = 0; i < state.agents.size(); ++i) {
    if (!state.agents[i].alive) continue;
    if (state.agents[i].team == Team::Prey && !config_.prey_shaping) continue;
    const int id = static_cast<int>(i);
    out.shaping[i] = shaping_reward(potential(state, id), potential(out.next_state, id), config_.gamma);
  }

  std::tie(out.terminal, out.reason) = is_terminal(out.next_state);
  return out;
}

}  // namespace pplab::env
