#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pplab/env/config.hpp"
#include "pplab/env/grid_world.hpp"
#include "pplab/learners/q_learning.hpp"

namespace pplab::harness {

enum class Paradigm : std::uint8_t { Iql, Cql };

// Predator paradigm first, prey paradigm second.
struct Pairing {
  Paradigm predator = Paradigm::Iql;
  Paradigm prey = Paradigm::Iql;

  friend constexpr bool operator==(Pairing, Pairing) = default;
};

enum class SpeedRegime : std::uint8_t { EqualBase, PredatorFast, PreyFast };

// Canonical orders; report rows and columns follow them.
inline constexpr std::array<Pairing, 4> kPairings = {{
    {Paradigm::Iql, Paradigm::Iql},
    {Paradigm::Iql, Paradigm::Cql},
    {Paradigm::Cql, Paradigm::Iql},
    {Paradigm::Cql, Paradigm::Cql},
}};
inline constexpr std::array<SpeedRegime, 3> kRegimes = {
    SpeedRegime::EqualBase, SpeedRegime::PredatorFast, SpeedRegime::PreyFast};

std::size_t pairing_index(Pairing p) noexcept;
constexpr std::size_t regime_index(SpeedRegime r) noexcept { return static_cast<std::size_t>(r); }

// "iql-cql" style identifiers (command line, file names).
std::string pairing_id(Pairing p);
// "IQL–CQL" style labels for tables.
std::string pairing_label(Pairing p);
std::string_view regime_id(SpeedRegime r) noexcept;
std::string_view regime_label(SpeedRegime r) noexcept;
std::optional<Pairing> parse_pairing(std::string_view id);
std::optional<SpeedRegime> parse_regime(std::string_view id);

env::TeamSpeeds speeds_for(SpeedRegime regime) noexcept;

struct Condition {
  Pairing pairing;
  SpeedRegime regime = SpeedRegime::EqualBase;
  std::uint64_t seed = 0;

  friend bool operator==(const Condition&, const Condition&) = default;
};

std::string condition_id(const Condition& c);

struct EpisodeMetrics {
  int length = 0;
  double predator_reward = 0.0;
  double prey_reward = 0.0;

  friend bool operator==(const EpisodeMetrics&, const EpisodeMetrics&) = default;
};

enum class Metric : std::uint8_t { EpisodeLength, PredatorReward, PreyReward };
inline constexpr std::array<Metric, 3> kMetrics = {Metric::EpisodeLength, Metric::PredatorReward,
                                                   Metric::PreyReward};
std::string_view metric_id(Metric m) noexcept;
std::string_view metric_label(Metric m) noexcept;

double metric_value(const EpisodeMetrics& e, Metric m) noexcept;

struct RunPlan {
  int episodes = 40000;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  int window_size = 10000;
  env::GridConfig grid;
  learners::LearnerParams learner;
  learners::EpsilonSchedule schedule;

  friend bool operator==(const RunPlan&, const RunPlan&) = default;
};

// Throws ConfigError naming the offending field.
void validate(const RunPlan& plan);

}  // namespace pplab::harness
