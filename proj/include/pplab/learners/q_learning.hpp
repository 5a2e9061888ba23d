#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pplab/env/world.hpp"
#include "pplab/learners/q_table.hpp"
#include "pplab/random.hpp"

namespace pplab::learners {

using env::Action;
using env::kActionCount;

struct LearnerParams {
  double alpha = 0.25;
  double gamma = 0.9;

  friend bool operator==(const LearnerParams&, const LearnerParams&) = default;
};

// Throws ConfigError when 0 < alpha <= 1 or 0 < gamma < 1 is violated.
void validate(const LearnerParams& params);

// Geometric decay from `start`, reaching `end` exactly at `decay_episodes`
// and held there afterwards.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.1;
  int decay_episodes = 23000;

  friend bool operator==(const EpsilonSchedule&, const EpsilonSchedule&) = default;
};

void validate(const EpsilonSchedule& schedule);

double epsilon_at(const EpsilonSchedule& schedule, long episode);

// Shared temporal-difference step: q += alpha * (target - q), where
// target = reward + gamma * bootstrap. Throws std::invalid_argument on
// non-finite inputs.
void td_update(double& q, double reward, double bootstrap, const LearnerParams& params);

// ---- Independent Q-learning: one table of width 5 per agent. ----

Action iql_select(const QTable& q, StateKey s, double epsilon, Rng& rng);

// A terminal transition bootstraps from 0.
void iql_update(QTable& q, StateKey s, Action a, double reward, StateKey s_next, bool terminal,
                const LearnerParams& params);

// ---- Centralized Q-learning: one table of width 5^k per team. ----

// Mixed-radix indexing of a team's joint action: member m's action is digit m
// (base 5, member 0 least significant). Members flagged dead in an alive mask
// are pinned to STAY; joint keys with any other action for a dead member are
// never selected, updated, or bootstrapped from.
class JointActionSpace {
 public:
  static constexpr int kMaxMembers = 6;

  explicit JointActionSpace(int members);

  int members() const noexcept { return members_; }
  std::size_t size() const noexcept { return size_; }
  std::uint32_t all_alive() const noexcept { return (1u << members_) - 1u; }

  std::size_t encode(std::span<const Action> joint) const;
  std::vector<Action> decode(std::size_t index) const;

  Action component(std::size_t index, int member) const noexcept {
    return env::action_from_index((index / radix_[static_cast<std::size_t>(member)]) % kActionCount);
  }

  // True when every dead member's component is STAY.
  bool consistent(std::size_t index, std::uint32_t alive_mask) const noexcept;

 private:
  int members_;
  std::size_t size_;
  std::array<std::size_t, kMaxMembers> radix_{};
};

// Joint epsilon-greedy. The exploratory draw is uniform over all 5^k keys
// with dead members' components then forced to STAY; the greedy branch
// searches the consistent keys only. Returns the joint index.
std::size_t cql_select_joint(const QTable& q, StateKey s, const JointActionSpace& space,
                             std::uint32_t alive_mask, double epsilon, Rng& rng);

// The bootstrap maximizes over joint keys consistent with `next_alive_mask`.
void cql_update(QTable& q, StateKey s, std::size_t joint, double team_reward, StateKey s_next,
                std::uint32_t next_alive_mask, bool terminal, const JointActionSpace& space,
                const LearnerParams& params);

// Per-member action values for decentralized execution: for each of
// `member`'s actions, the uniform mean of Q over all completions by the
// other members.
std::array<double, kActionCount> marginalize(const QTable& q, StateKey s,
                                             const JointActionSpace& space, int member);

// Greedy per-member action from the marginals, ties broken uniformly.
Action marginal_greedy(const QTable& q, StateKey s, const JointActionSpace& space, int member,
                       Rng& rng);

}  // namespace pplab::learners
