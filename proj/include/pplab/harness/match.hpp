#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pplab/env/state_codec.hpp"
#include "pplab/harness/experiment.hpp"
#include "pplab/learners/q_table.hpp"

namespace pplab::harness {

// What one learner was fed for one transition.
struct TransitionRecord {
  const env::WorldState& state;
  std::span<const env::Action> actions;
  const env::StepOutcome& outcome;
  // Reward fed to each IQL agent's update, indexed by agent id (0 for agents
  // that are not updated).
  std::span<const double> agent_reward;
  // Scalar fed to each CQL team's update, indexed by env::Team (0 for IQL roles).
  std::array<double, 2> team_reward;
};

using TransitionObserver = std::function<void(const TransitionRecord&)>;

enum class ExecutionMode {
  // CQL teams act on the joint argmax, as during training.
  JointGreedy,
  // Each CQL member acts on the argmax of its marginalized action values.
  Marginalized,
};

// The learners of one role: an IQL team holds one width-5 table per member,
// a CQL team one width-5^k table over joint actions.
class RoleLearner {
 public:
  RoleLearner(Paradigm paradigm, std::vector<int> member_ids);

  Paradigm paradigm() const noexcept { return paradigm_; }
  std::span<const int> members() const noexcept { return members_; }
  const learners::JointActionSpace& joint_space() const noexcept { return space_; }
  const std::vector<learners::QTable>& tables() const noexcept { return tables_; }

  std::uint32_t alive_mask(const env::WorldState& state) const noexcept;

  // Writes one action per member into `actions` (indexed by agent id) and
  // returns the joint index chosen for a CQL team (0 for IQL).
  std::size_t select(env::StateKey s, const env::WorldState& state, double epsilon, Rng& rng,
                     std::span<env::Action> actions) const;

  std::size_t select_greedy(env::StateKey s, const env::WorldState& state, ExecutionMode mode, Rng& rng,
                            std::span<env::Action> actions) const;

 private:
  friend class Match;

  Paradigm paradigm_;
  std::vector<int> members_;
  learners::JointActionSpace space_;
  std::vector<learners::QTable> tables_;
};

// One training run's mutable state: world, codec, both roles' learners, and
// the run's exploration stream.
class Match {
 public:
  Match(const Condition& condition, const RunPlan& plan);

  const Condition& condition() const noexcept { return condition_; }
  const env::GridWorld& world() const noexcept { return world_; }
  const env::StateCodec& codec() const noexcept { return codec_; }
  const RoleLearner& predators() const noexcept { return predators_; }
  const RoleLearner& prey() const noexcept { return prey_; }
  Rng& exploration_rng() noexcept { return explore_; }

  // One epsilon-greedy training episode with learner updates. The initial
  // placement is drawn from `placement_rng`; all other randomness from the
  // exploration stream.
  EpisodeMetrics run_episode(double epsilon, Rng& placement_rng,
                             const TransitionObserver& observer = {});

  // Greedy episode without updates.
  EpisodeMetrics evaluate_episode(ExecutionMode mode, Rng& placement_rng);

 private:
  Condition condition_;
  learners::LearnerParams params_;
  env::GridWorld world_;
  env::StateCodec codec_;
  RoleLearner predators_;
  RoleLearner prey_;
  Rng explore_;
};

// Placement stream for one episode; depends on (seed, episode) only, so every
// condition sharing a seed sees the same initial states.
Rng placement_stream(std::uint64_t seed, long episode);

// Exploration stream for a whole run; local to (seed, pairing, regime).
Rng exploration_stream(const Condition& condition);

}  // namespace pplab::harness
