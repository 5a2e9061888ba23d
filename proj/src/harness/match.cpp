#include "pplab/harness/match.hpp"

#include <numeric>
#include <stdexcept>

namespace pplab::harness {

using env::Action;
using env::Team;
using learners::QTable;

namespace {

constexpr std::uint64_t kPlacementTag = 0x706c6163656d656eULL;
constexpr std::uint64_t kExplorationTag = 0x6578706c6f726521ULL;

std::vector<int> id_range(int first, int count) {
  std::vector<int> ids(static_cast<std::size_t>(count));
  std::iota(ids.begin(), ids.end(), first);
  return ids;
}

}  // namespace

Rng placement_stream(std::uint64_t seed, long episode) {
  return Rng(derive_seed({kPlacementTag, seed, static_cast<std::uint64_t>(episode)}));
}

Rng exploration_stream(const Condition& c) {
  return Rng(derive_seed({kExplorationTag, c.seed, pairing_index(c.pairing), regime_index(c.regime)}));
}

RoleLearner::RoleLearner(Paradigm paradigm, std::vector<int> member_ids)
    : paradigm_(paradigm),
      members_(std::move(member_ids)),
      space_(static_cast<int>(members_.size())) {
  if (paradigm_ == Paradigm::Iql) {
    for (std::size_t i = 0; i < members_.size(); ++i) tables_.emplace_back(env::kActionCount);
  } else {
    tables_.emplace_back(space_.size());
  }
}

std::uint32_t RoleLearner::alive_mask(const env::WorldState& state) const noexcept {
  std::uint32_t mask = 0;
  for (std::size_t m = 0; m < members_.size(); ++m)
    if (state.agents[static_cast<std::size_t>(members_[m])].alive) mask |= 1u << m;
  return mask;
}

std::size_t RoleLearner::select(env::StateKey s, const env::WorldState& state, double epsilon, Rng& rng,
                                std::span<Action> actions) const {
  if (paradigm_ == Paradigm::Iql) {
    for (std::size_t m = 0; m < members_.size(); ++m) {
      const auto id = static_cast<std::size_t>(members_[m]);
      actions[id] = state.agents[id].alive ? learners::iql_select(tables_[m], s, epsilon, rng) : Action::Stay;
    }
    return 0;
  }
  const std::size_t joint = learners::cql_select_joint(tables_[0], s, space_, alive_mask(state), epsilon, rng);
  for (std::size_t m = 0; m < members_.size(); ++m)
    actions[static_cast<std::size_t>(members_[m])] = space_.component(joint, static_cast<int>(m));
  return joint;
}

std::size_t RoleLearner::select_greedy(env::StateKey s, const env::WorldState& state, ExecutionMode mode,
                                       Rng& rng, std::span<Action> actions) const {
  if (paradigm_ == Paradigm::Cql && mode == ExecutionMode::Marginalized) {
    for (std::size_t m = 0; m < members_.size(); ++m) {
      const auto id = static_cast<std::size_t>(members_[m]);
      actions[id] = state.agents[id].alive
                        ? learners::marginal_greedy(tables_[0], s, space_, static_cast<int>(m), rng)
                        : Action::Stay;
    }
    return 0;
  }
  return select(s, state, 0.0, rng, actions);
}

Match::Match(const Condition& condition, const RunPlan& plan)
    : condition_(condition),
      params_(plan.learner),
      world_(plan.grid),
      codec_(plan.grid),
      predators_(condition.pairing.predator, id_range(0, plan.grid.n_predators)),
      prey_(condition.pairing.prey, id_range(plan.grid.n_predators, plan.grid.n_prey)),
      explore_(exploration_stream(condition)) {}

EpisodeMetrics Match::run_episode(double epsilon, Rng& placement_rng, const TransitionObserver& observer) {
  const env::GridConfig& cfg = world_.config();
  const auto n = static_cast<std::size_t>(cfg.agent_count());

  env::WorldState state = world_.reset(placement_rng, speeds_for(condition_.regime));
  env::StateKey key = codec_.encode(state);
  std::vector<Action> actions(n, Action::Stay);
  std::vector<double> fed(n, 0.0);
  double team_total[2] = {0.0, 0.0};

  EpisodeMetrics metrics;
  for (;;) {
    const std::size_t joint_pred = predators_.select(key, state, epsilon, explore_, actions);
    const std::size_t joint_prey = prey_.select(key, state, epsilon, explore_, actions);

    env::StepOutcome out = world_.step(state, actions);
    const env::StateKey next_key = codec_.encode(out.next_state);
    const bool all_captured = out.reason == env::TerminalReason::AllPreyCaptured;

    std::array<double, 2> team_reward = {0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const double r = state.agents[i].alive ? out.base_reward[i] + out.shaping[i] : 0.0;
      fed[i] = r;
      const auto team = static_cast<std::size_t>(state.agents[i].team);
      team_reward[team] += r;
      team_total[team] += r;
    }

    for (RoleLearner* role : {&predators_, &prey_}) {
      const auto members = role->members();
      if (role->paradigm_ == Paradigm::Iql) {
        for (std::size_t m = 0; m < members.size(); ++m) {
          const auto id = static_cast<std::size_t>(members[m]);
          if (!state.agents[id].alive) continue;
          // Timeouts truncate rather than terminate: the key carries no clock.
          const bool done = all_captured || !out.next_state.agents[id].alive;
          learners::iql_update(role->tables_[m], key, actions[id], fed[id], next_key, done, params_);
        }
      } else {
        const std::size_t joint = role == &predators_ ? joint_pred : joint_prey;
        const auto team = static_cast<std::size_t>(state.agents[static_cast<std::size_t>(members[0])].team);
        learners::cql_update(role->tables_[0], key, joint, team_reward[team], next_key,
                             role->alive_mask(out.next_state), all_captured, role->space_, params_);
      }
    }
    if (observer) {
      std::vector<double> agent_reward(n, 0.0);
      for (const RoleLearner* role : {&predators_, &prey_})
        if (role->paradigm() == Paradigm::Iql)
          for (int id : role->members()) agent_reward[static_cast<std::size_t>(id)] = fed[static_cast<std::size_t>(id)];
      std::array<double, 2> team_fed = {
          predators_.paradigm() == Paradigm::Cql ? team_reward[0] : 0.0,
          prey_.paradigm() == Paradigm::Cql ? team_reward[1] : 0.0};
      observer(TransitionRecord{state, actions, out, agent_reward, team_fed});
    }

    state = std::move(out.next_state);
    key = next_key;
    if (out.terminal) break;
  }

  metrics.length = state.timestep;
  const bool mean = cfg.team_reward_mode == env::TeamRewardMode::TeamMean;
  metrics.predator_reward = mean ? team_total[0] / cfg.n_predators : team_total[0];
  metrics.prey_reward = mean ? team_total[1] / cfg.n_prey : team_total[1];
  return metrics;
}

EpisodeMetrics Match::evaluate_episode(ExecutionMode mode, Rng& placement_rng) {
  const env::GridConfig& cfg = world_.config();
  env::WorldState state = world_.reset(placement_rng, speeds_for(condition_.regime));
  std::vector<Action> actions(static_cast<std::size_t>(cfg.agent_count()), Action::Stay);
  double team_total[2] = {0.0, 0.0};
  for (;;) {
    const env::StateKey key = codec_.encode(state);
    predators_.select_greedy(key, state, mode, explore_, actions);
    prey_.select_greedy(key, state, mode, explore_, actions);
    env::StepOutcome out = world_.step(state, actions);
    for (std::size_t i = 0; i < state.agents.size(); ++i)
      if (state.agents[i].alive)
        team_total[static_cast<std::size_t>(state.agents[i].team)] += out.base_reward[i] + out.shaping[i];
    state = std::move(out.next_state);
    if (out.terminal) break;
  }
  const bool mean = cfg.team_reward_mode == env::TeamRewardMode::TeamMean;
  return {state.timestep, mean ? team_total[0] / cfg.n_predators : team_total[0],
          mean ? team_total[1] / cfg.n_prey : team_total[1]};
}

}  // namespace pplab::harness
