#include "pplab/harness/experiment.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace pplab::harness {

namespace {

std::string_view paradigm_id(Paradigm p) noexcept { return p == Paradigm::Iql ? "iql" : "cql"; }
std::string_view paradigm_label(Paradigm p) noexcept { return p == Paradigm::Iql ? "IQL" : "CQL"; }

}  // namespace

std::size_t pairing_index(Pairing p) noexcept {
  return static_cast<std::size_t>(std::find(kPairings.begin(), kPairings.end(), p) - kPairings.begin());
}

std::string pairing_id(Pairing p) {
  return std::string(paradigm_id(p.predator)) + "-" + std::string(paradigm_id(p.prey));
}

std::string pairing_label(Pairing p) {
  return std::string(paradigm_label(p.predator)) + "–" + std::string(paradigm_label(p.prey));
}

std::string_view regime_id(SpeedRegime r) noexcept {
  switch (r) {
    case SpeedRegime::EqualBase: return "base";
    case SpeedRegime::PredatorFast: return "pred-fast";
    case SpeedRegime::PreyFast: return "prey-fast";
  }
  return "?";
}

std::string_view regime_label(SpeedRegime r) noexcept {
  switch (r) {
    case SpeedRegime::EqualBase: return "Base speed";
    case SpeedRegime::PredatorFast: return "Predator fast";
    case SpeedRegime::PreyFast: return "Prey fast";
  }
  return "?";
}

std::optional<Pairing> parse_pairing(std::string_view id) {
  for (Pairing p : kPairings)
    if (pairing_id(p) == id) return p;
  return std::nullopt;
}

std::optional<SpeedRegime> parse_regime(std::string_view id) {
  for (SpeedRegime r : kRegimes)
    if (regime_id(r) == id) return r;
  return std::nullopt;
}

env::TeamSpeeds speeds_for(SpeedRegime regime) noexcept {
  switch (regime) {
    case SpeedRegime::EqualBase: return {1, 1};
    case SpeedRegime::PredatorFast: return {2, 1};
    case SpeedRegime::PreyFast: return {1, 2};
  }
  return {1, 1};
}

std::string condition_id(const Condition& c) {
  return pairing_id(c.pairing) + "/" + std::string(regime_id(c.regime)) + "/seed" + std::to_string(c.seed);
}

std::string_view metric_id(Metric m) noexcept {
  switch (m) {
    case Metric::EpisodeLength: return "episode_length";
    case Metric::PredatorReward: return "predator_reward";
    case Metric::PreyReward: return "prey_reward";
  }
  return "?";
}

std::string_view metric_label(Metric m) noexcept {
  switch (m) {
    case Metric::EpisodeLength: return "Episode Length";
    case Metric::PredatorReward: return "Predator Reward";
    case Metric::PreyReward: return "Prey Reward";
  }
  return "?";
}

double metric_value(const EpisodeMetrics& e, Metric m) noexcept {
  switch (m) {
    case Metric::EpisodeLength: return e.length;
    case Metric::PredatorReward: return e.predator_reward;
    case Metric::PreyReward: return e.prey_reward;
  }
  return 0.0;
}

void validate(const RunPlan& plan) {
  env::validate(plan.grid);
  learners::validate(plan.learner);
  learners::validate(plan.schedule);
  if (plan.episodes < 1) throw ConfigError("episodes", "must be >= 1");
  if (plan.window_size < 1) throw ConfigError("window_size", "must be >= 1");
  if (plan.window_size > plan.episodes) throw ConfigError("window_size", "must not exceed episodes");
  if (plan.seeds.empty()) throw ConfigError("seeds", "at least one seed is required");
  if (std::set<std::uint64_t>(plan.seeds.begin(), plan.seeds.end()).size() != plan.seeds.size())
    throw ConfigError("seeds", "seeds must be pairwise distinct");
  if (plan.learner.gamma != plan.grid.gamma)
    throw ConfigError("gamma", "learner and shaping discount must agree");
  if (plan.grid.n_predators > learners::JointActionSpace::kMaxMembers ||
      plan.grid.n_prey > learners::JointActionSpace::kMaxMembers)
    throw ConfigError("n_predators", "teams larger than 6 agents are not supported");
}

}  // namespace pplab::harness
