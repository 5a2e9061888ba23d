#include "pplab/learners/q_learning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pplab/env/config.hpp"

namespace pplab::learners {

void validate(const LearnerParams& p) {
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw ConfigError("alpha", "must satisfy 0 < alpha <= 1");
  if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw ConfigError("gamma", "must satisfy 0 < gamma < 1");
}

void validate(const EpsilonSchedule& s) {
  if (!(s.end > 0.0)) throw ConfigError("epsilon_end", "must be > 0");
  if (!(s.start >= s.end && s.start <= 1.0))
    throw ConfigError("epsilon_start", "must satisfy epsilon_end <= epsilon_start <= 1");
  if (s.decay_episodes < 1) throw ConfigError("epsilon_decay_episodes", "must be >= 1");
}

double epsilon_at(const EpsilonSchedule& s, long episode) {
  if (episode < 0) throw std::invalid_argument("epsilon_at: negative episode");
  if (episode >= s.decay_episodes) return s.end;
  const double fraction = static_cast<double>(episode) / static_cast<double>(s.decay_episodes);
  return std::max(s.end, s.start * std::pow(s.end / s.start, fraction));
}

void td_update(double& q, double reward, double bootstrap, const LearnerParams& params) {
  if (!std::isfinite(reward) || !std::isfinite(bootstrap) || !std::isfinite(q))
    throw std::invalid_argument("td_update: non-finite input");
  q += params.alpha * (reward + params.gamma * bootstrap - q);
}

namespace {

// Uniform choice among the maximizers of `row` over indices accepted by
// `admissible`. A null row reads as all zeros. Draws from `rng` only when
// there is more than one maximizer.
template <typename Admissible>
std::size_t greedy_index(const double* row, std::size_t n, Rng& rng, Admissible admissible) {
  double best = -INFINITY;
  std::size_t ties = 0;
  std::size_t first = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!admissible(i)) continue;
    const double v = row == nullptr ? 0.0 : row[i];
    if (v > best) {
      best = v;
      ties = 1;
      first = i;
    } else if (v == best) {
      ++ties;
    }
  }
  if (ties <= 1) return first;
  std::uint64_t pick = uniform_index(rng, ties);
  for (std::size_t i = first; i < n; ++i) {
    if (!admissible(i)) continue;
    const double v = row == nullptr ? 0.0 : row[i];
    if (v == best && pick-- == 0) return i;
  }
  return first;
}

template <typename Admissible>
double max_value(const double* row, std::size_t n, Admissible admissible) {
  if (row == nullptr) return 0.0;
  double best = -INFINITY;
  for (std::size_t i = 0; i < n; ++i)
    if (admissible(i)) best = std::max(best, row[i]);
  return best;
}

constexpr auto kAny = [](std::size_t) { return true; };

}  // namespace

Action iql_select(const QTable& q, StateKey s, double epsilon, Rng& rng) {
  if (q.action_count() != kActionCount) throw std::invalid_argument("iql_select: table width must be 5");
  if (uniform_unit(rng) < epsilon) return env::action_from_index(uniform_index(rng, kActionCount));
  return env::action_from_index(greedy_index(q.find_row(s), kActionCount, rng, kAny));
}

void iql_update(QTable& q, StateKey s, Action a, double reward, StateKey s_next, bool terminal,
                const LearnerParams& params) {
  const double bootstrap = terminal ? 0.0 : max_value(q.find_row(s_next), kActionCount, kAny);
  td_update(q.row_for_update(s)[env::index_of(a)], reward, bootstrap, params);
}

JointActionSpace::JointActionSpace(int members) : members_(members), size_(1) {
  if (members < 1 || members > kMaxMembers)
    throw std::invalid_argument("JointActionSpace: team size must be in [1, 6]");
  for (int m = 0; m < members; ++m) {
    radix_[static_cast<std::size_t>(m)] = size_;
    size_ *= kActionCount;
  }
}

std::size_t JointActionSpace::encode(std::span<const Action> joint) const {
  if (joint.size() != static_cast<std::size_t>(members_))
    throw std::invalid_argument("JointActionSpace::encode: wrong tuple length");
  std::size_t index = 0;
  for (int m = 0; m < members_; ++m) index += env::index_of(joint[static_cast<std::size_t>(m)]) * radix_[static_cast<std::size_t>(m)];
  return index;
}

std::vector<Action> JointActionSpace::decode(std::size_t index) const {
  if (index >= size_) throw std::out_of_range("JointActionSpace::decode: index out of range");
  std::vector<Action> joint(static_cast<std::size_t>(members_));
  for (int m = 0; m < members_; ++m) joint[static_cast<std::size_t>(m)] = component(index, m);
  return joint;
}

bool JointActionSpace::consistent(std::size_t index, std::uint32_t alive_mask) const noexcept {
  for (int m = 0; m < members_; ++m)
    if ((alive_mask & (1u << m)) == 0 && component(index, m) != Action::Stay) return false;
  return true;
}

std::size_t cql_select_joint(const QTable& q, StateKey s, const JointActionSpace& space,
                             std::uint32_t alive_mask, double epsilon, Rng& rng) {
  if (q.action_count() != space.size())
    throw std::invalid_argument("cql_select_joint: table width does not match joint space");
  const bool everyone_alive = alive_mask == space.all_alive();
  if (uniform_unit(rng) < epsilon) {
    const std::size_t index = uniform_index(rng, space.size());
    if (everyone_alive) return index;
    std::vector<Action> joint = space.decode(index);
    for (int m = 0; m < space.members(); ++m)
      if ((alive_mask & (1u << m)) == 0) joint[static_cast<std::size_t>(m)] = Action::Stay;
    return space.encode(joint);
  }
  const double* row = q.find_row(s);
  if (everyone_alive) return greedy_index(row, space.size(), rng, kAny);
  return greedy_index(row, space.size(), rng,
                      [&](std::size_t i) { return space.consistent(i, alive_mask); });
}

void cql_update(QTable& q, StateKey s, std::size_t joint, double team_reward, StateKey s_next,
                std::uint32_t next_alive_mask, bool terminal, const JointActionSpace& space,
                const LearnerParams& params) {
  if (q.action_count() != space.size())
    throw std::invalid_argument("cql_update: table width does not match joint space");
  if (joint >= space.size()) throw std::out_of_range("cql_update: joint index out of range");
  double bootstrap = 0.0;
  if (!terminal) {
    const double* next = q.find_row(s_next);
    bootstrap = next_alive_mask == space.all_alive()
                    ? max_value(next, space.size(), kAny)
                    : max_value(next, space.size(),
                                [&](std::size_t i) { return space.consistent(i, next_alive_mask); });
  }
  td_update(q.row_for_update(s)[joint], team_reward, bootstrap, params);
}

std::array<double, kActionCount> marginalize(const QTable& q, StateKey s,
                                             const JointActionSpace& space, int member) {
  if (member < 0 || member >= space.members())
    throw std::out_of_range("marginalize: member not in team");
  std::array<double, kActionCount> sum{};
  const double* row = q.find_row(s);
  if (row == nullptr) return sum;
  for (std::size_t i = 0; i < space.size(); ++i)
    sum[env::index_of(space.component(i, member))] += row[i];
  const double completions = static_cast<double>(space.size() / kActionCount);
  for (double& v : sum) v /= completions;
  return sum;
}

Action marginal_greedy(const QTable& q, StateKey s, const JointActionSpace& space, int member,
                       Rng& rng) {
  const auto marginals = marginalize(q, s, space, member);
  return env::action_from_index(greedy_index(marginals.data(), kActionCount, rng, kAny));
}

}  // namespace pplab::learners
