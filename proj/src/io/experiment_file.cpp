#include "pplab/io/experiment_file.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <openssl/sha.h>
#include <yaml-cpp/yaml.h>

namespace pplab::io {

using harness::Condition;
using harness::RunPlan;

namespace {

template <typename T>
T scalar(const YAML::Node& node, const std::string& key, const char* expected) {
  if (!node.IsScalar()) throw ConfigError(key, std::string("expected ") + expected);
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(key, std::string("expected ") + expected + ", got '" + node.Scalar() + "'");
  }
}

int integer(const YAML::Node& n, const std::string& key) { return scalar<int>(n, key, "an integer"); }
double real(const YAML::Node& n, const std::string& key) { return scalar<double>(n, key, "a number"); }
bool boolean(const YAML::Node& n, const std::string& key) { return scalar<bool>(n, key, "true or false"); }

using GridSetter = std::function<void(env::GridConfig&, const YAML::Node&, const std::string&)>;

// Environment keys that may also appear inside per-condition overrides.
const std::map<std::string, GridSetter, std::less<>>& overridable_grid_keys() {
  static const std::map<std::string, GridSetter, std::less<>> keys = {
      {"max_timesteps", [](env::GridConfig& g, const YAML::Node& n, const std::string& k) { g.max_timesteps = integer(n, k); }},
      {"stamina_max", [](env::GridConfig& g, const YAML::Node& n, const std::string& k) { g.stamina_max = integer(n, k); }},
      {"regen_on_stay", [](env::GridConfig& g, const YAML::Node& n, const std::string& k) { g.regen_on_stay = integer(n, k); }},
      {"stamina_enabled", [](env::GridConfig& g, const YAML::Node& n, const std::string& k) { g.stamina_enabled = boolean(n, k); }},
      {"capture_reward", [](env::GridConfig& g, const YAML::Node& n, const std::string& k) { g.capture_reward = real(n, k); }},
      {"prey_capture_penalty", [](env::GridConfig& g, const YAML::Node& n, const std::string& k) { g.prey_capture_penalty = real(n, k); }},
      {"predator_step_cost", [](env::GridConfig& g, const YAML::Node& n, const std::string& k) { g.predator_step_cost = real(n, k); }},
      {"shaping_factor", [](env::GridConfig& g, const YAML::Node& n, const std::string& k) { g.shaping_factor = real(n, k); }},
      {"prey_shaping", [](env::GridConfig& g, const YAML::Node& n, const std::string& k) { g.prey_shaping = boolean(n, k); }},
      {"potential_form",
       [](env::GridConfig& g, const YAML::Node& n, const std::string& k) {
         const auto v = scalar<std::string>(n, k, "nearest or sum");
         if (v == "nearest") g.potential_form = env::PotentialForm::NearestOpponent;
         else if (v == "sum") g.potential_form = env::PotentialForm::SumOverOpponents;
         else throw ConfigError(k, "expected nearest or sum, got '" + v + "'");
       }},
      {"team_reward_mode",
       [](env::GridConfig& g, const YAML::Node& n, const std::string& k) {
         const auto v = scalar<std::string>(n, k, "mean or sum");
         if (v == "mean") g.team_reward_mode = env::TeamRewardMode::TeamMean;
         else if (v == "sum") g.team_reward_mode = env::TeamRewardMode::TeamSum;
         else throw ConfigError(k, "expected mean or sum, got '" + v + "'");
       }},
      {"obstacles",
       [](env::GridConfig& g, const YAML::Node& n, const std::string& k) {
         if (!n.IsSequence()) throw ConfigError(k, "expected a list of [x, y] pairs");
         g.obstacles.clear();
         for (const YAML::Node& cell : n) {
           if (!cell.IsSequence() || cell.size() != 2) throw ConfigError(k, "expected a list of [x, y] pairs");
           g.obstacles.push_back({integer(cell[0], k), integer(cell[1], k)});
         }
       }},
  };
  return keys;
}

std::string yaml_text(const YAML::Node& n) {
  YAML::Emitter out;
  out << YAML::Flow << n;
  return out.c_str();
}

ConditionOverride parse_override(const std::string& selector, const YAML::Node& body) {
  const std::string key = "overrides." + selector;
  ConditionOverride o;
  const auto slash = selector.find('/');
  const std::string first = selector.substr(0, slash);
  const std::string second = slash == std::string::npos ? "" : selector.substr(slash + 1);
  if (slash == std::string::npos) {
    if (auto p = harness::parse_pairing(first)) o.pairing = p;
    else if (auto r = harness::parse_regime(first)) o.regime = r;
    else throw ConfigError(key, "selector must name a pairing, a regime, or pairing/regime");
  } else {
    o.pairing = harness::parse_pairing(first);
    o.regime = harness::parse_regime(second);
    if (!o.pairing || !o.regime) throw ConfigError(key, "selector must be <pairing>/<regime>");
  }
  if (!body.IsMap()) throw ConfigError(key, "expected a mapping of environment settings");
  for (const auto& kv : body) {
    const auto name = kv.first.as<std::string>();
    if (!overridable_grid_keys().contains(name))
      throw ConfigError(key + "." + name, "not an overridable environment setting");
    o.settings.emplace_back(name, yaml_text(kv.second));
  }
  return o;
}

}  // namespace

bool ConditionOverride::matches(const Condition& c) const noexcept {
  return (!pairing || *pairing == c.pairing) && (!regime || *regime == c.regime);
}

std::string ConditionOverride::selector() const {
  if (pairing && regime) return harness::pairing_id(*pairing) + "/" + std::string(harness::regime_id(*regime));
  if (pairing) return harness::pairing_id(*pairing);
  return std::string(harness::regime_id(*regime));
}

RunPlan ExperimentFile::plan_for(const Condition& condition) const {
  RunPlan out = plan;
  for (const ConditionOverride& o : overrides) {
    if (!o.matches(condition)) continue;
    for (const auto& [name, text] : o.settings)
      overridable_grid_keys().at(name)(out.grid, YAML::Load(text), "overrides." + o.selector() + "." + name);
  }
  return out;
}

ExperimentFile parse_config(std::string_view text) {
  YAML::Node doc;
  try {
    doc = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("document", std::string("malformed YAML: ") + e.what());
  }
  ExperimentFile file;
  if (doc.IsNull()) {
    harness::validate(file.plan);
    return file;
  }
  if (!doc.IsMap()) throw ConfigError("document", "expected a mapping of settings");

  RunPlan& plan = file.plan;
  bool window_given = false;
  for (const auto& kv : doc) {
    const auto key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (auto it = overridable_grid_keys().find(key); it != overridable_grid_keys().end()) {
      it->second(plan.grid, v, key);
    } else if (key == "width") {
      plan.grid.width = integer(v, key);
    } else if (key == "height") {
      plan.grid.height = integer(v, key);
    } else if (key == "n_predators") {
      plan.grid.n_predators = integer(v, key);
    } else if (key == "n_prey") {
      plan.grid.n_prey = integer(v, key);
    } else if (key == "gamma") {
      plan.grid.gamma = plan.learner.gamma = real(v, key);
    } else if (key == "alpha") {
      plan.learner.alpha = real(v, key);
    } else if (key == "epsilon_start") {
      plan.schedule.start = real(v, key);
    } else if (key == "epsilon_end") {
      plan.schedule.end = real(v, key);
    } else if (key == "epsilon_decay_episodes") {
      plan.schedule.decay_episodes = integer(v, key);
    } else if (key == "episodes") {
      plan.episodes = integer(v, key);
    } else if (key == "window_size") {
      plan.window_size = integer(v, key);
      window_given = true;
    } else if (key == "seeds") {
      plan.seeds.clear();
      if (v.IsSequence()) {
        for (const YAML::Node& s : v) plan.seeds.push_back(scalar<std::uint64_t>(s, key, "non-negative integers"));
      } else {
        const int count = integer(v, key);
        if (count < 1) throw ConfigError(key, "seed count must be >= 1");
        for (int s = 0; s < count; ++s) plan.seeds.push_back(static_cast<std::uint64_t>(s));
      }
    } else if (key == "output_dir") {
      file.output_dir = scalar<std::string>(v, key, "a path");
    } else if (key == "curve_stride") {
      file.curve_stride = integer(v, key);
      if (file.curve_stride < 1) throw ConfigError(key, "must be >= 1");
    } else if (key == "curve_window") {
      file.curve_window = integer(v, key);
      if (file.curve_window < 1) throw ConfigError(key, "must be >= 1");
    } else if (key == "workers") {
      const int w = integer(v, key);
      if (w < 0) throw ConfigError(key, "must be >= 0 (0 = all cores)");
      file.workers = static_cast<unsigned>(w);
    } else if (key == "overrides") {
      if (!v.IsMap()) throw ConfigError(key, "expected a mapping of selector -> settings");
      for (const auto& o : v) file.overrides.push_back(parse_override(o.first.as<std::string>(), o.second));
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  if (!window_given) plan.window_size = std::min(plan.window_size, plan.episodes);

  harness::validate(plan);
  for (harness::Pairing p : harness::kPairings)
    for (harness::SpeedRegime r : harness::kRegimes) harness::validate(file.plan_for({p, r, 0}));
  return file;
}

ExperimentFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize(const ExperimentFile& file) {
  const RunPlan& p = file.plan;
  const env::GridConfig& g = p.grid;
  std::string out;
  auto line = [&out](std::string_view key, const auto& value) { out += fmt::format("{}: {}\n", key, value); };
  auto boolean_text = [](bool b) { return b ? "true" : "false"; };

  line("width", g.width);
  line("height", g.height);
  std::vector<std::string> cells;
  for (const env::Cell& c : g.obstacles) cells.push_back(fmt::format("[{}, {}]", c.x, c.y));
  line("obstacles", fmt::format("[{}]", fmt::join(cells, ", ")));
  line("n_predators", g.n_predators);
  line("n_prey", g.n_prey);
  line("max_timesteps", g.max_timesteps);
  line("stamina_max", g.stamina_max);
  line("regen_on_stay", g.regen_on_stay);
  line("stamina_enabled", boolean_text(g.stamina_enabled));
  line("capture_reward", g.capture_reward);
  line("prey_capture_penalty", g.prey_capture_penalty);
  line("predator_step_cost", g.predator_step_cost);
  line("shaping_factor", g.shaping_factor);
  line("potential_form", g.potential_form == env::PotentialForm::NearestOpponent ? "nearest" : "sum");
  line("prey_shaping", boolean_text(g.prey_shaping));
  line("team_reward_mode", g.team_reward_mode == env::TeamRewardMode::TeamMean ? "mean" : "sum");
  line("gamma", g.gamma);
  line("alpha", p.learner.alpha);
  line("epsilon_start", p.schedule.start);
  line("epsilon_end", p.schedule.end);
  line("epsilon_decay_episodes", p.schedule.decay_episodes);
  line("episodes", p.episodes);
  line("window_size", p.window_size);
  line("seeds", fmt::format("[{}]", fmt::join(p.seeds, ", ")));
  line("output_dir", yaml_text(YAML::Node(file.output_dir)));
  line("curve_stride", file.curve_stride);
  line("curve_window", file.curve_window);
  line("workers", file.workers);
  if (file.overrides.empty()) {
    out += "overrides: {}\n";
  } else {
    out += "overrides:\n";
    for (const ConditionOverride& o : file.overrides) {
      out += fmt::format("  {}:\n", o.selector());
      for (const auto& [k, v] : o.settings) out += fmt::format("    {}: {}\n", k, v);
    }
  }
  return out;
}

std::string config_digest(const ExperimentFile& file) {
  const std::string text = serialize(file);
  unsigned char hash[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(text.data()), text.size(), hash);
  std::string hex;
  for (unsigned char b : hash) hex += fmt::format("{:02x}", b);
  return hex;
}

}  // namespace pplab::io
