#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "pplab/harness/experiment.hpp"

namespace pplab::harness {

struct FinalWindow {
  double length = 0.0;
  double predator_reward = 0.0;
  double prey_reward = 0.0;

  double get(Metric m) const noexcept;

  friend bool operator==(const FinalWindow&, const FinalWindow&) = default;
};

struct SeedResult {
  Condition condition;
  std::vector<EpisodeMetrics> per_episode;
  FinalWindow final_window;
};

// Mean of the last min(window, series.size()) entries. Throws
// std::invalid_argument on an empty series or a zero window.
double final_window_mean(std::span<const double> series, std::size_t window);

FinalWindow summarize(std::span<const EpisodeMetrics> episodes, std::size_t window);

SeedResult run_training(const Condition& condition, const RunPlan& plan);

struct RunKey {
  std::size_t pairing = 0;  // index into kPairings
  SpeedRegime regime = SpeedRegime::EqualBase;
  std::uint64_t seed = 0;

  friend auto operator<=>(const RunKey& a, const RunKey& b) {
    return std::tie(a.regime, a.pairing, a.seed) <=> std::tie(b.regime, b.pairing, b.seed);
  }
  friend bool operator==(const RunKey&, const RunKey&) = default;
};

RunKey key_of(const Condition& c);

using MatrixResult = std::map<RunKey, SeedResult>;

struct MatrixOptions {
  std::vector<Pairing> pairings{kPairings.begin(), kPairings.end()};
  std::vector<SpeedRegime> regimes{kRegimes.begin(), kRegimes.end()};
  // 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;
  // Per-condition plan (e.g. with environment overrides); `plan` when empty.
  std::function<RunPlan(const Condition&)> plan_for;
  // Called once per finished run, serialized, in completion order.
  std::function<void(const SeedResult&)> on_run_done;
};

// Every selected (pairing, regime) for every plan seed. Each run owns its
// learners and random streams, so neither scheduling nor worker count
// affects any result.
MatrixResult run_matrix(const RunPlan& plan, const MatrixOptions& options = {});

// Runs in a caller-chosen order on the calling thread; for order-independence checks.
MatrixResult run_conditions(const RunPlan& plan, std::span<const Condition> order);

}  // namespace pplab::harness
