#include "pplab/harness/training.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "pplab/harness/match.hpp"

namespace pplab::harness {

double FinalWindow::get(Metric m) const noexcept {
  switch (m) {
    case Metric::EpisodeLength: return length;
    case Metric::PredatorReward: return predator_reward;
    case Metric::PreyReward: return prey_reward;
  }
  return 0.0;
}

double final_window_mean(std::span<const double> series, std::size_t window) {
  if (series.empty()) throw std::invalid_argument("final_window_mean: empty series");
  if (window == 0) throw std::invalid_argument("final_window_mean: zero window");
  const std::size_t n = std::min(window, series.size());
  double sum = 0.0;
  for (std::size_t i = series.size() - n; i < series.size(); ++i) sum += series[i];
  return sum / static_cast<double>(n);
}

FinalWindow summarize(std::span<const EpisodeMetrics> episodes, std::size_t window) {
  std::vector<double> series(episodes.size());
  FinalWindow fw;
  for (Metric m : kMetrics) {
    std::transform(episodes.begin(), episodes.end(), series.begin(),
                   [m](const EpisodeMetrics& e) { return metric_value(e, m); });
    const double mean = final_window_mean(series, window);
    switch (m) {
      case Metric::EpisodeLength: fw.length = mean; break;
      case Metric::PredatorReward: fw.predator_reward = mean; break;
      case Metric::PreyReward: fw.prey_reward = mean; break;
    }
  }
  return fw;
}

SeedResult run_training(const Condition& condition, const RunPlan& plan) {
  validate(plan);
  Match match(condition, plan);
  SeedResult result{condition, {}, {}};
  result.per_episode.reserve(static_cast<std::size_t>(plan.episodes));
  for (long e = 0; e < plan.episodes; ++e) {
    Rng placement = placement_stream(condition.seed, e);
    result.per_episode.push_back(match.run_episode(learners::epsilon_at(plan.schedule, e), placement));
  }
  result.final_window = summarize(result.per_episode, static_cast<std::size_t>(plan.window_size));
  return result;
}

RunKey key_of(const Condition& c) { return {pairing_index(c.pairing), c.regime, c.seed}; }

MatrixResult run_matrix(const RunPlan& plan, const MatrixOptions& options) {
  validate(plan);
  std::vector<Condition> jobs;
  for (SpeedRegime r : options.regimes)
    for (Pairing p : options.pairings)
      for (std::uint64_t seed : plan.seeds) jobs.push_back({p, r, seed});

  std::vector<SeedResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex report_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        results[j] = run_training(jobs[j], options.plan_for ? options.plan_for(jobs[j]) : plan);
        if (options.on_run_done) {
          std::lock_guard lock(report_mutex);
          options.on_run_done(results[j]);
        }
      } catch (...) {
        std::lock_guard lock(report_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };

  unsigned workers = options.workers != 0 ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(jobs.size(), 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  MatrixResult matrix;
  for (std::size_t j = 0; j < jobs.size(); ++j) matrix.emplace(key_of(jobs[j]), std::move(results[j]));
  return matrix;
}

MatrixResult run_conditions(const RunPlan& plan, std::span<const Condition> order) {
  MatrixResult matrix;
  for (const Condition& c : order) matrix.emplace(key_of(c), run_training(c, plan));
  return matrix;
}

}  // namespace pplab::harness
