// pplab: run the predator-prey experiment matrix and analyse the results.
//
//   pplab validate [--config FILE]
//   pplab run      [--config FILE] [--out DIR] [--episodes N] [--seeds N]
//                  [--regime R] [--pairing P] [--workers N]
//   pplab report   [--config FILE] [--out DIR] [--regime R]
//   pplab curves   [--config FILE] [--out DIR] [--stride N] [--window N]
//
// Exit codes: 0 success, 1 usage error, 2 configuration error, 3 runtime error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pplab/harness/training.hpp"
#include "pplab/io/archive.hpp"
#include "pplab/io/experiment_file.hpp"
#include "pplab/io/reports.hpp"

namespace fs = std::filesystem;
using namespace pplab;

namespace {

constexpr int kUsageError = 1;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

struct Options {
  std::string config_path;
  std::string out;
  std::optional<int> episodes;
  std::optional<int> seeds;
  std::optional<int> stride;
  std::optional<int> window;
  std::optional<unsigned> workers;
  std::string regime = "all";
  std::string pairing = "all";
};

io::ExperimentFile load(const Options& o) {
  io::ExperimentFile file = o.config_path.empty() ? io::parse_config("") : io::load_config(o.config_path);
  if (o.episodes) {
    if (*o.episodes < 1) throw ConfigError("--episodes", "must be >= 1");
    file.plan.episodes = *o.episodes;
    file.plan.window_size = std::min(file.plan.window_size, *o.episodes);
  }
  if (o.seeds) {
    if (*o.seeds < 1) throw ConfigError("--seeds", "must be >= 1");
    file.plan.seeds.clear();
    for (int s = 0; s < *o.seeds; ++s) file.plan.seeds.push_back(static_cast<std::uint64_t>(s));
  }
  if (o.stride) {
    if (*o.stride < 1) throw ConfigError("--stride", "must be >= 1");
    file.curve_stride = *o.stride;
  }
  if (o.window) {
    if (*o.window < 1) throw ConfigError("--window", "must be >= 1");
    file.curve_window = *o.window;
  }
  if (o.workers) file.workers = *o.workers;
  if (!o.out.empty()) file.output_dir = o.out;
  harness::validate(file.plan);
  return file;
}

std::vector<harness::SpeedRegime> selected_regimes(const std::string& id) {
  if (id == "all") return {harness::kRegimes.begin(), harness::kRegimes.end()};
  return {*harness::parse_regime(id)};
}

std::vector<harness::Pairing> selected_pairings(const std::string& id) {
  if (id == "all") return {harness::kPairings.begin(), harness::kPairings.end()};
  return {*harness::parse_pairing(id)};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write '" + path.string() + "'");
}

int cmd_validate(const Options& o) {
  const io::ExperimentFile file = load(o);
  std::cout << io::serialize(file);
  std::cout << "# digest: " << io::config_digest(file) << "\n";
  return 0;
}

int cmd_run(const Options& o) {
  const io::ExperimentFile file = load(o);
  harness::MatrixOptions options;
  options.regimes = selected_regimes(o.regime);
  options.pairings = selected_pairings(o.pairing);
  options.workers = file.workers;
  options.plan_for = [&file](const harness::Condition& c) { return file.plan_for(c); };
  const std::size_t total = options.regimes.size() * options.pairings.size() * file.plan.seeds.size();
  std::size_t done = 0;
  options.on_run_done = [&](const harness::SeedResult& r) {
    ++done;
    std::cerr << fmt::format("[{}/{}] {} length={:.2f} predator={:.2f} prey={:.2f}\n", done, total,
                             harness::condition_id(r.condition), r.final_window.length,
                             r.final_window.predator_reward, r.final_window.prey_reward);
  };
  const harness::MatrixResult results = harness::run_matrix(file.plan, options);
  io::write_archive(file.output_dir, file, results);
  std::cout << "archive written to " << file.output_dir << "\n";
  return 0;
}

int cmd_report(const Options& o) {
  const fs::path dir = load(o).output_dir;
  if (!fs::exists(dir / "manifest.json"))
    throw std::runtime_error("no archive at '" + (dir / "manifest.json").string() + "'; run `pplab run` first");
  const io::Archive archive = io::read_archive(dir);
  std::vector<harness::SpeedRegime> regimes = io::regimes_present(archive.results);
  if (o.regime != "all") regimes = selected_regimes(o.regime);

  const io::Report summary = io::emit_summary(archive.results, regimes);
  write_text(dir / "summary.txt", summary.text);
  write_text(dir / "summary.csv", summary.csv);
  std::cout << summary.text;

  const io::Report stats = io::emit_stats_report(archive.results, regimes);
  write_text(dir / "stats.txt", stats.text);
  write_text(dir / "stats.csv", stats.csv);
  std::cout << stats.text;
  return 0;
}

int cmd_curves(const Options& o) {
  const io::ExperimentFile file = load(o);
  const fs::path dir = file.output_dir;
  if (!fs::exists(dir / "manifest.json"))
    throw std::runtime_error("no archive at '" + (dir / "manifest.json").string() + "'; run `pplab run` first");
  const io::Archive archive = io::read_archive(dir);
  const int stride = o.stride ? *o.stride : archive.config.curve_stride;
  const int window = o.window ? *o.window : archive.config.curve_window;
  for (const fs::path& p : io::emit_curves(archive.results, stride, window, dir / "curves"))
    std::cout << p.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predator-prey IQL/CQL experiment lab"};
  app.require_subcommand(1);
  Options o;

  const std::vector<std::string> regimes = {"base", "pred-fast", "prey-fast", "all"};
  const std::vector<std::string> pairings = {"iql-iql", "iql-cql", "cql-iql", "cql-cql", "all"};

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "Experiment document (YAML)")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Archive directory (overrides output_dir)");
  };

  CLI::App* validate = app.add_subcommand("validate", "Parse and validate a configuration");
  common(validate);

  CLI::App* run = app.add_subcommand("run", "Train every selected condition and write an archive");
  common(run);
  run->add_option("--episodes", o.episodes, "Episodes per run");
  run->add_option("--seeds", o.seeds, "Use seeds 0..N-1");
  run->add_option("--stride", o.stride, "Curve down-sampling stride recorded in the archive");
  run->add_option("--workers", o.workers, "Parallel runs (0 = all cores)");
  run->add_option("--regime", o.regime, "Speed regime")->check(CLI::IsMember(regimes));
  run->add_option("--pairing", o.pairing, "Predator-prey learner pairing")->check(CLI::IsMember(pairings));

  CLI::App* report = app.add_subcommand("report", "Summary tables and paired statistics from an archive");
  common(report);
  report->add_option("--regime", o.regime, "Speed regime")->check(CLI::IsMember(regimes));

  CLI::App* curves = app.add_subcommand("curves", "Learning-curve CSVs from an archive");
  common(curves);
  curves->add_option("--stride", o.stride, "Emit every N-th episode");
  curves->add_option("--window", o.window, "Rolling-mean window in episodes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*run) return cmd_run(o);
    if (*report) return cmd_report(o);
    if (*curves) return cmd_curves(o);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kUsageError;
}
