#include "pplab/io/archive.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

namespace pplab::io {

namespace fs = std::filesystem;
using harness::Condition;
using harness::EpisodeMetrics;
using nlohmann::json;

namespace {

std::string timestamp_now() {
  std::time_t t;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(t));
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing archive file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string series_csv(const std::vector<EpisodeMetrics>& episodes) {
  std::string out = "episode,length,predator_reward,prey_reward\n";
  for (std::size_t e = 0; e < episodes.size(); ++e)
    out += fmt::format("{},{},{},{}\n", e + 1, episodes[e].length, episodes[e].predator_reward,
                       episodes[e].prey_reward);
  return out;
}

std::vector<EpisodeMetrics> parse_series(const std::string& text, const fs::path& path) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "episode,length,predator_reward,prey_reward")
    throw std::runtime_error("unexpected header in '" + path.string() + "'");
  std::vector<EpisodeMetrics> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    EpisodeMetrics m;
    char* end = nullptr;
    const char* p = line.c_str();
    const long episode = std::strtol(p, &end, 10);
    if (*end != ',' || episode != static_cast<long>(out.size()) + 1)
      throw std::runtime_error("malformed row " + std::to_string(out.size() + 1) + " in '" + path.string() + "'");
    m.length = static_cast<int>(std::strtol(end + 1, &end, 10));
    if (*end != ',') throw std::runtime_error("malformed row in '" + path.string() + "'");
    m.predator_reward = std::strtod(end + 1, &end);
    if (*end != ',') throw std::runtime_error("malformed row in '" + path.string() + "'");
    m.prey_reward = std::strtod(end + 1, &end);
    if (*end != '\0') throw std::runtime_error("malformed row in '" + path.string() + "'");
    out.push_back(m);
  }
  return out;
}

}  // namespace

std::string run_file_name(const Condition& c) {
  return fmt::format("{}_{}_seed{}.csv", harness::pairing_id(c.pairing), harness::regime_id(c.regime), c.seed);
}

void write_archive(const fs::path& dir, const ExperimentFile& config, const harness::MatrixResult& results,
                   const std::string& created) {
  fs::create_directories(dir / "runs");
  json runs = json::array();
  for (const auto& [key, run] : results) {
    const std::string file = "runs/" + run_file_name(run.condition);
    write_file(dir / file, series_csv(run.per_episode));
    runs.push_back({{"pairing", harness::pairing_id(run.condition.pairing)},
                    {"regime", harness::regime_id(run.condition.regime)},
                    {"seed", run.condition.seed},
                    {"episodes", run.per_episode.size()},
                    {"file", file}});
  }
  json manifest = {{"tool", kToolName},
                   {"version", kToolVersion},
                   {"config_digest", config_digest(config)},
                   {"created", created.empty() ? timestamp_now() : created},
                   {"runs", runs}};
  write_file(dir / "config.yaml", serialize(config));
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

Archive read_archive(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed '" + manifest_path.string() + "': " + e.what());
  }
  Archive archive;
  archive.config = parse_config(read_file(dir / "config.yaml"));
  if (manifest.value("config_digest", "") != config_digest(archive.config))
    throw std::runtime_error("config digest mismatch between manifest.json and config.yaml in '" + dir.string() + "'");

  const auto window = static_cast<std::size_t>(archive.config.plan.window_size);
  for (const json& entry : manifest.at("runs")) {
    Condition c;
    const auto pairing = harness::parse_pairing(entry.at("pairing").get<std::string>());
    const auto regime = harness::parse_regime(entry.at("regime").get<std::string>());
    if (!pairing || !regime) throw std::runtime_error("manifest names an unknown condition");
    c.pairing = *pairing;
    c.regime = *regime;
    c.seed = entry.at("seed").get<std::uint64_t>();
    const fs::path path = dir / entry.at("file").get<std::string>();
    harness::SeedResult run{c, parse_series(read_file(path), path), {}};
    if (run.per_episode.empty()) throw std::runtime_error("empty run file '" + path.string() + "'");
    run.final_window = harness::summarize(run.per_episode, window);
    archive.results.emplace(harness::key_of(c), std::move(run));
  }
  return archive;
}

}  // namespace pplab::io
