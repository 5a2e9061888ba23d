// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any selected criterion fails.
//
//   pplab_acceptance            run criteria 1-10
//   pplab_acceptance 1 2 7      run the listed criteria

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "pplab/env/grid_world.hpp"
#include "pplab/env/state_codec.hpp"
#include "pplab/harness/training.hpp"
#include "pplab/io/archive.hpp"
#include "pplab/io/experiment_file.hpp"
#include "pplab/io/reports.hpp"
#include "pplab/learners/q_learning.hpp"
#include "pplab/learners/snapshot.hpp"
#include "pplab/stats/paired_tests.hpp"

using namespace pplab;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// ---- pinned tolerances and budgets ----
constexpr double kWilcoxonFloor = 0.001953125;
constexpr double kWilcoxonTol = 1e-12;
constexpr double kCliffTol = 0.0;
constexpr double kBruteForceTol = 1e-12;
constexpr double kQStarTol = 0.05;
constexpr double kTelescopeTol = 1e-9;
constexpr double kBudget1 = 1.0;
constexpr double kBudget2 = 1.0;
constexpr double kBudget3 = 30.0;
constexpr double kBudget4 = 60.0;
constexpr double kBudget5 = 60.0;
constexpr double kBudget6 = 10.0;
constexpr double kBudgetOrdering = 600.0;
constexpr double kBudgetMatrix = 1800.0;

constexpr int kReducedEpisodes = 10000;
constexpr int kReducedSeeds = 5;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Verdict with_budget(Verdict v, double elapsed, double budget) {
  v.detail += fmt::format("; {:.2f}s (budget {:.0f}s)", elapsed, budget);
  if (elapsed >= budget) v.pass = false;
  return v;
}

// ---- criterion 1 ----
Verdict wilcoxon_floor() {
  std::vector<double> x, y;
  for (int i = 0; i < 10; ++i) {
    x.push_back(100.0 + i);
    y.push_back(static_cast<double>(i));
  }
  const auto r = stats::wilcoxon_signed_rank_exact(x, y);
  const double err = std::abs(r.p_two_sided - kWilcoxonFloor);
  return {err <= kWilcoxonTol, fmt::format("p = {:.12g}, |error| = {:.3g}", r.p_two_sided, err)};
}

// ---- criterion 2 ----
Verdict cliff_separation() {
  const std::vector<double> x = {10, 11, 12, 13, 14, 15, 16, 17, 18, 19};
  const std::vector<double> y = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const double d = stats::cliffs_delta(x, y);
  return {std::abs(d - 1.0) <= kCliffTol, fmt::format("delta = {}", d)};
}

// ---- criterion 3 ----
// Exhaustive sign-flip enumerator with its own midrank computation.
double enumerate_p(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> mag, sign;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d == 0.0) continue;
    mag.push_back(std::abs(d));
    sign.push_back(d > 0 ? 1.0 : -1.0);
  }
  const std::size_t n = mag.size();
  if (n == 0) return 1.0;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return mag[a] < mag[b]; });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && mag[idx[j]] == mag[idx[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) rank[idx[k]] = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    i = j;
  }
  double w_plus = 0.0, total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += rank[i];
    if (sign[i] > 0) w_plus += rank[i];
  }
  const double stat = std::min(w_plus, total - w_plus);
  std::uint64_t hits = 0;
  const std::uint64_t all = std::uint64_t{1} << n;
  for (std::uint64_t m = 0; m < all; ++m) {
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if ((m >> i) & 1u) w += rank[i];
    if (w <= stat + 1e-9) ++hits;
  }
  return std::min(1.0, 2.0 * static_cast<double>(hits) / static_cast<double>(all));
}

Verdict wilcoxon_brute_force() {
  Rng gen(derive_seed({3, 2026}));
  double worst = 0.0;
  int with_ties = 0, with_zeros = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 3 + uniform_index(gen, 10);
    std::vector<double> x(n), y(n);
    // Half the samples are coarse integers (ties and zero differences),
    // half continuous.
    const bool coarse = t % 2 == 0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = coarse ? static_cast<double>(uniform_index(gen, 5)) : uniform_unit(gen) * 10.0;
      y[i] = coarse ? static_cast<double>(uniform_index(gen, 5)) : uniform_unit(gen) * 10.0;
    }
    std::set<double> mags;
    bool zero = false, tie = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = std::abs(x[i] - y[i]);
      if (d == 0.0) zero = true;
      else if (!mags.insert(d).second) tie = true;
    }
    with_ties += tie;
    with_zeros += zero;
    const double got = stats::wilcoxon_signed_rank_exact(x, y).p_two_sided;
    worst = std::max(worst, std::abs(got - enumerate_p(x, y)));
  }
  return {worst <= kBruteForceTol && with_ties > 0 && with_zeros > 0,
          fmt::format("200 samples ({} with ties, {} with zeros), max |error| = {:.3g}", with_ties, with_zeros, worst)};
}

// ---- criterion 4 ----
// Value iteration on the 3x3 single-predator task with a stationary prey,
// written against the task definition rather than the library's world.
struct TinyTask {
  static constexpr int kSide = 3;
  static constexpr double kGamma = 0.9;
  static constexpr double kStep = -5.0;
  static constexpr double kCapture = 100.0;

  // q[pred cell][prey cell][action]
  std::array<std::array<std::array<double, 5>, 9>, 9> q{};

  static int move(int cell, int action) {
    int x = cell % kSide, y = cell / kSide;
    switch (action) {
      case 0: y = std::max(0, y - 1); break;
      case 1: y = std::min(kSide - 1, y + 1); break;
      case 2: x = std::max(0, x - 1); break;
      case 3: x = std::min(kSide - 1, x + 1); break;
      default: break;
    }
    return y * kSide + x;
  }

  void solve() {
    for (int sweep = 0; sweep < 10000; ++sweep) {
      double change = 0.0;
      for (int p = 0; p < 9; ++p)
        for (int prey = 0; prey < 9; ++prey) {
          if (p == prey) continue;
          for (int a = 0; a < 5; ++a) {
            const int next = move(p, a);
            double target;
            if (next == prey) {
              target = kStep + kCapture;
            } else {
              const auto& row = q[static_cast<std::size_t>(next)][static_cast<std::size_t>(prey)];
              target = kStep + kGamma * *std::max_element(row.begin(), row.end());
            }
            double& cur = q[static_cast<std::size_t>(p)][static_cast<std::size_t>(prey)][static_cast<std::size_t>(a)];
            change = std::max(change, std::abs(target - cur));
            cur = target;
          }
        }
      if (change < 1e-14) return;
    }
  }
};

Verdict q_star_oracle() {
  env::GridConfig cfg;
  cfg.width = cfg.height = 3;
  cfg.n_predators = 1;
  cfg.n_prey = 1;
  cfg.stamina_enabled = false;
  cfg.shaping_factor = 0.0;
  const env::GridWorld world(cfg);
  const env::StateCodec codec(cfg);
  const learners::LearnerParams params{0.25, cfg.gamma};
  learners::QTable table(env::kActionCount);
  Rng rng(derive_seed({4, 50000}));
  const learners::EpsilonSchedule schedule;

  for (int episode = 0; episode < 50000; ++episode) {
    env::WorldState s = world.reset(rng);
    env::StateKey key = codec.encode(s);
    while (!world.is_terminal(s).first) {
      const env::Action a = learners::iql_select(table, key, learners::epsilon_at(schedule, episode), rng);
      const std::array<env::Action, 2> acts = {a, env::Action::Stay};
      env::StepOutcome out = world.step(s, acts);
      const env::StateKey next = codec.encode(out.next_state);
      learners::iql_update(table, key, a, out.base_reward[0] + out.shaping[0], next,
                           out.reason == env::TerminalReason::AllPreyCaptured, params);
      s = std::move(out.next_state);
      key = next;
    }
  }

  TinyTask oracle;
  oracle.solve();
  double worst = 0.0;
  std::size_t visited = 0;
  table.for_each_row([&](env::StateKey k, std::span<const double> row) {
    const auto f = codec.decode(k);
    const int p = f[0].position.y * 3 + f[0].position.x;
    const int prey = f[1].position.y * 3 + f[1].position.x;
    ++visited;
    for (std::size_t a = 0; a < row.size(); ++a) {
      const double e = std::abs(row[a] - oracle.q[static_cast<std::size_t>(p)][static_cast<std::size_t>(prey)][a]);
      worst = std::max(worst, e);
    }
  });
  return {worst < kQStarTol && visited == 72,
          fmt::format("{} visited states, max |Q - Q*| = {:.3g}", visited, worst)};
}

// ---- criterion 5 ----
Verdict telescoping() {
  const env::GridConfig cfg;
  const env::GridWorld world(cfg);
  Rng rng(derive_seed({5, 1000}));
  double worst = 0.0;
  const std::size_t n = static_cast<std::size_t>(cfg.agent_count());
  for (int episode = 0; episode < 1000; ++episode) {
    env::WorldState s = world.reset(rng);
    std::vector<double> sum(n, 0.0), discount(n, 1.0), phi0(n), phi_end(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) phi0[i] = world.potential(s, static_cast<int>(i));
    while (!world.is_terminal(s).first) {
      std::vector<env::Action> acts(n);
      for (env::Action& a : acts) a = env::action_from_index(uniform_index(rng, env::kActionCount));
      env::StepOutcome out = world.step(s, acts);
      for (std::size_t i = 0; i < n; ++i) {
        if (!s.agents[i].alive) continue;
        sum[i] += discount[i] * out.shaping[i];
        discount[i] *= cfg.gamma;
        phi_end[i] = world.potential(out.next_state, static_cast<int>(i));
      }
      s = std::move(out.next_state);
    }
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(sum[i] - (discount[i] * phi_end[i] - phi0[i])));
  }
  return {worst < kTelescopeTol, fmt::format("1000 episodes x 4 agents, max residual = {:.3g}", worst)};
}

// ---- criterion 6 ----
Verdict single_member_cql() {
  const learners::LearnerParams params;
  const learners::JointActionSpace one(1);
  learners::QTable iql(env::kActionCount), cql(one.size());
  Rng rng(derive_seed({6, 100000}));
  for (int t = 0; t < 100000; ++t) {
    const env::StateKey s{uniform_index(rng, 400)};
    const env::StateKey next{uniform_index(rng, 400)};
    const std::uint64_t a = uniform_index(rng, env::kActionCount);
    const double r = uniform_unit(rng) * 200.0 - 100.0;
    const bool terminal = uniform_index(rng, 20) == 0;
    learners::iql_update(iql, s, env::action_from_index(a), r, next, terminal, params);
    learners::cql_update(cql, s, a, r, next, one.all_alive(), terminal, one, params);
  }
  std::ostringstream a, b;
  learners::write_snapshot(a, iql, "table");
  learners::write_snapshot(b, cql, "table");
  return {a.str() == b.str() && iql.state_count() > 0,
          fmt::format("{} states, snapshots {}", iql.state_count(), a.str() == b.str() ? "bit-identical" : "differ")};
}

// ---- criteria 7, 8, 10 share reduced-scale runs ----
harness::RunPlan reduced_plan() {
  harness::RunPlan plan;
  plan.episodes = kReducedEpisodes;
  plan.window_size = kReducedEpisodes;
  plan.seeds.clear();
  for (int s = 0; s < kReducedSeeds; ++s) plan.seeds.push_back(static_cast<std::uint64_t>(s));
  return plan;
}

harness::MatrixResult run_reduced(harness::SpeedRegime regime) {
  harness::MatrixOptions opts;
  opts.regimes = {regime};
  return harness::run_matrix(reduced_plan(), opts);
}

std::array<double, 4> mean_over_seeds(const harness::MatrixResult& r, harness::SpeedRegime regime, harness::Metric m) {
  std::array<double, 4> sum{}, count{};
  for (const auto& [key, run] : r) {
    if (key.regime != regime) continue;
    sum[key.pairing] += run.final_window.get(m);
    count[key.pairing] += 1.0;
  }
  for (std::size_t p = 0; p < 4; ++p) sum[p] /= count[p];
  return sum;
}

Verdict base_ordering(const harness::MatrixResult& r) {
  using harness::Metric;
  const auto len = mean_over_seeds(r, harness::SpeedRegime::EqualBase, Metric::EpisodeLength);
  const auto pred = mean_over_seeds(r, harness::SpeedRegime::EqualBase, Metric::PredatorReward);
  // kPairings order: IQL-IQL, IQL-CQL, CQL-IQL, CQL-CQL
  const bool length_order = len[0] < len[3] && len[3] < len[1];
  const bool reward_order = pred[0] > pred[3];
  return {length_order && reward_order,
          fmt::format("length IQL–IQL {:.1f}, CQL–CQL {:.1f}, IQL–CQL {:.1f} (need ascending: {}); "
                      "predator reward IQL–IQL {:.1f} vs CQL–CQL {:.1f} (need greater: {})",
                      len[0], len[3], len[1], length_order ? "yes" : "no", pred[0], pred[3],
                      reward_order ? "yes" : "no")};
}

Verdict predator_fast_ordering(const harness::MatrixResult& r) {
  const auto len = mean_over_seeds(r, harness::SpeedRegime::PredatorFast, harness::Metric::EpisodeLength);
  const bool shortest = len[0] < len[1] && len[0] < len[2] && len[0] < len[3];
  return {shortest, fmt::format("length IQL–IQL {:.1f}, IQL–CQL {:.1f}, CQL–IQL {:.1f}, CQL–CQL {:.1f}", len[0], len[1],
                                len[2], len[3])};
}

std::map<std::string, std::string> archive_files(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    files[fs::relative(e.path(), dir).generic_string()] = buf.str();
  }
  return files;
}

Verdict archive_determinism(const harness::MatrixResult& first) {
  io::ExperimentFile cfg;
  cfg.plan = reduced_plan();
  const fs::path root = fs::temp_directory_path() / "pplab_acceptance_determinism";
  fs::remove_all(root);
  // The second execution runs on a different worker count.
  harness::MatrixOptions opts;
  opts.regimes = {harness::SpeedRegime::EqualBase};
  opts.workers = 2;
  const harness::MatrixResult second = harness::run_matrix(cfg.plan, opts);
  io::write_archive(root / "a", cfg, first);
  io::write_archive(root / "b", cfg, second);
  const auto a = archive_files(root / "a");
  const auto b = archive_files(root / "b");
  std::size_t bytes = 0;
  for (const auto& [name, content] : a) bytes += content.size();
  fs::remove_all(root);
  return {a == b && a.size() == 22, fmt::format("{} files, {} bytes, {}", a.size(), bytes, a == b ? "identical" : "differ")};
}

// ---- criterion 9 ----
Verdict full_matrix() {
  const harness::RunPlan plan;
  harness::MatrixOptions opts;
  std::size_t done = 0;
  const auto t0 = Clock::now();
  opts.on_run_done = [&](const harness::SeedResult& r) {
    ++done;
    std::cerr << fmt::format("  [{}/120] {} {:.0f}s\n", done, harness::condition_id(r.condition), seconds_since(t0));
  };
  const harness::MatrixResult r = harness::run_matrix(plan, opts);
  const auto regimes = io::regimes_present(r);
  const io::Report summary = io::emit_summary(r, regimes);

  // Shape: 3 regime tables x 4 pairing rows x 3 metric columns.
  std::size_t tables = 0, rows = 0;
  std::set<std::string> metrics;
  std::istringstream csv(summary.csv);
  std::string line;
  std::getline(csv, line);
  std::set<std::string> table_ids, row_ids;
  while (std::getline(csv, line)) {
    std::stringstream ls(line);
    std::string regime, pairing, metric;
    std::getline(ls, regime, ',');
    std::getline(ls, pairing, ',');
    std::getline(ls, metric, ',');
    table_ids.insert(regime);
    row_ids.insert(regime + "/" + pairing);
    metrics.insert(metric);
  }
  tables = table_ids.size();
  rows = row_ids.size();
  bool full = r.size() == 120;
  for (const auto& [key, run] : r) full = full && run.per_episode.size() == 40000;
  std::cout << summary.text;
  return {full && tables == 3 && rows == 12 && metrics.size() == 3,
          fmt::format("{} runs, summary {} tables x {} rows x {} metrics", r.size(), tables, rows / std::max<std::size_t>(tables, 1),
                      metrics.size())};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int c = std::atoi(argv[i]);
    if (c < 1 || c > 10) {
      std::cerr << "usage: pplab_acceptance [criterion 1-10 ...]\n";
      return 2;
    }
    selected.insert(c);
  }
  if (selected.empty())
    for (int c = 1; c <= 10; ++c) selected.insert(c);

  int failures = 0;
  auto report = [&](int c, const std::string& name, const Verdict& v) {
    std::cout << fmt::format("{} criterion {}: {}: {}", v.pass ? "PASS" : "FAIL", c, name, v.detail) << std::endl;
    if (!v.pass) ++failures;
  };
  auto timed = [&](int c, const std::string& name, double budget, const std::function<Verdict()>& fn) {
    if (!selected.contains(c)) return;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    report(c, name, with_budget(v, seconds_since(t0), budget));
  };

  timed(1, "exact Wilcoxon floor at n = 10", kBudget1, wilcoxon_floor);
  timed(2, "Cliff's delta under full separation", kBudget2, cliff_separation);
  timed(3, "Wilcoxon matches exhaustive enumeration", kBudget3, wilcoxon_brute_force);
  timed(4, "Q-learning converges to value-iteration Q*", kBudget4, q_star_oracle);
  timed(5, "shaping telescopes over random episodes", kBudget5, telescoping);
  timed(6, "one-member CQL equals IQL", kBudget6, single_member_cql);

  harness::MatrixResult base;
  double base_seconds = 0.0;
  if (selected.contains(7) || selected.contains(10)) {
    const auto t0 = Clock::now();
    try {
      base = run_reduced(harness::SpeedRegime::EqualBase);
    } catch (const std::exception& e) {
      std::cerr << "reduced base run failed: " << e.what() << "\n";
    }
    base_seconds = seconds_since(t0);
  }
  if (selected.contains(7)) {
    Verdict v = base.empty() ? Verdict{false, "no results"} : base_ordering(base);
    report(7, "base-regime ordering at 10k episodes x 5 seeds", with_budget(v, base_seconds, kBudgetOrdering));
  }
  timed(8, "predator-fast ordering at 10k episodes x 5 seeds", kBudgetOrdering,
        [] { return predator_fast_ordering(run_reduced(harness::SpeedRegime::PredatorFast)); });
  timed(9, "full 120-run matrix and summary shape", kBudgetMatrix, full_matrix);
  if (selected.contains(10)) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = base.empty() ? Verdict{false, "no results"} : archive_determinism(base);
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    report(10, "byte-identical archives across executions", with_budget(v, seconds_since(t0) + base_seconds, 2 * kBudgetOrdering));
  }

  std::cout << fmt::format("{} of {} selected criteria passed", selected.size() - static_cast<std::size_t>(failures),
                           selected.size())
            << std::endl;
  return failures == 0 ? 0 : 1;
}
