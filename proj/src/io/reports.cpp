#include "pplab/io/reports.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace pplab::io {

namespace fs = std::filesystem;
using harness::kMetrics;
using harness::kPairings;
using harness::MatrixResult;
using harness::Metric;
using harness::SpeedRegime;

namespace {

// Seed-level final-window values for one (regime, pairing), ordered by seed.
std::vector<const harness::SeedResult*> runs_of(const MatrixResult& results, SpeedRegime regime,
                                                std::size_t pairing) {
  std::vector<const harness::SeedResult*> out;
  for (const auto& [key, run] : results)
    if (key.regime == regime && key.pairing == pairing) out.push_back(&run);
  return out;
}

std::string pad(const std::string& s, std::size_t width) {
  // Display width: count code points, not bytes ("±", "–" are multi-byte).
  std::size_t cols = 0;
  for (unsigned char c : s) cols += (c & 0xC0) != 0x80;
  return cols >= width ? s : s + std::string(width - cols, ' ');
}

}  // namespace

MeanSd mean_sd(const std::vector<double>& values) {
  MeanSd m;
  m.n = values.size();
  if (values.empty()) return {NAN, NAN, 0};
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(m.n);
  if (m.n < 2) {
    m.sd = NAN;
    return m;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.sd = std::sqrt(ss / static_cast<double>(m.n - 1));
  return m;
}

std::string format_mean_sd(const MeanSd& m) {
  if (m.n == 0) return "—";
  const std::string sd = std::isnan(m.sd) ? "n/a" : fmt::format("{:.1f}", m.sd);
  // -0.0 would print as "-0.0"
  const double mean = m.mean == 0.0 ? 0.0 : m.mean;
  return fmt::format("{:.1f} ± {}", mean, sd);
}

std::vector<SpeedRegime> regimes_present(const MatrixResult& results) {
  std::set<SpeedRegime> seen;
  for (const auto& [key, run] : results) seen.insert(key.regime);
  return {seen.begin(), seen.end()};
}

Report emit_summary(const MatrixResult& results, const std::vector<SpeedRegime>& regimes) {
  Report r;
  r.csv = "regime,pairing,metric,n_seeds,mean,sd\n";
  for (SpeedRegime regime : regimes) {
    r.text += fmt::format("{} regime: final-window means across seeds (mean ± SD)\n", harness::regime_label(regime));
    r.text += pad("Configuration", 16);
    for (Metric m : kMetrics) r.text += pad(std::string(harness::metric_label(m)), 20);
    r.text += "\n";
    for (std::size_t p = 0; p < kPairings.size(); ++p) {
      const auto runs = runs_of(results, regime, p);
      r.text += pad(harness::pairing_label(kPairings[p]), 16);
      for (Metric m : kMetrics) {
        std::vector<double> values;
        for (const auto* run : runs) values.push_back(run->final_window.get(m));
        const MeanSd stat = mean_sd(values);
        r.text += pad(format_mean_sd(stat), 20);
        if (!values.empty())
          r.csv += fmt::format("{},{},{},{},{},{}\n", harness::regime_id(regime), harness::pairing_id(kPairings[p]),
                               harness::metric_id(m), stat.n, stat.mean, std::isnan(stat.sd) ? std::string() : fmt::format("{}", stat.sd));
      }
      r.text += "\n";
    }
    r.text += "\n";
  }
  return r;
}

std::vector<stats::PairedTest> stats_tests(const MatrixResult& results, const std::vector<SpeedRegime>& regimes) {
  if (results.empty()) throw std::runtime_error("no results to analyse");
  std::vector<std::string> missing;
  for (SpeedRegime regime : regimes) {
    std::set<std::uint64_t> all_seeds;
    for (const auto& [key, run] : results)
      if (key.regime == regime) all_seeds.insert(key.seed);
    if (all_seeds.empty()) missing.push_back(std::string(harness::regime_id(regime)) + "/*");
    for (std::size_t p = 0; p < kPairings.size(); ++p)
      for (std::uint64_t seed : all_seeds)
        if (!results.contains({p, regime, seed}))
          missing.push_back(harness::condition_id({kPairings[p], regime, seed}));
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw std::runtime_error("incomplete results; missing runs: " + list);
  }

  std::vector<stats::PairedTest> tests;
  for (SpeedRegime regime : regimes) {
    for (Metric m : kMetrics) {
      std::vector<stats::ConfigSamples> configs;
      for (std::size_t p = 0; p < kPairings.size(); ++p) {
        stats::ConfigSamples c;
        c.label = harness::pairing_id(kPairings[p]);
        for (const auto* run : runs_of(results, regime, p)) {
          c.seeds.push_back(run->condition.seed);
          c.values.push_back(run->final_window.get(m));
        }
        configs.push_back(std::move(c));
      }
      auto family = stats::compare_configs(configs, harness::regime_id(regime), harness::metric_id(m));
      tests.insert(tests.end(), family.begin(), family.end());
    }
  }
  return tests;
}

Report emit_stats_report(const MatrixResult& results, const std::vector<SpeedRegime>& regimes) {
  const auto tests = stats_tests(results, regimes);
  std::size_t n = 0;
  for (const auto& [key, run] : results)
    if (key.pairing == 0 && key.regime == regimes.front()) ++n;

  Report r;
  r.csv = "regime,metric,config_a,config_b,n,p_raw,p_adjusted,delta,magnitude,reject,degenerate\n";
  std::string family;
  for (const stats::PairedTest& t : tests) {
    const std::string this_family = t.regime + " / " + t.metric;
    if (this_family != family) {
      r.text += fmt::format("{}{} (Wilcoxon signed-rank, exact; Holm-corrected within family)\n",
                            family.empty() ? "" : "\n", this_family);
      r.text += fmt::format("  {:<20}{:>12}{:>12}{:>9}  {:<12}{}\n", "comparison", "p_raw", "p_holm", "delta", "magnitude",
                            "reject@0.05");
      family = this_family;
    }
    r.text += fmt::format("  {:<20}{:>12.5f}{:>12.5f}{:>9.3f}  {:<12}{}{}\n", t.config_a + " vs " + t.config_b, t.p_raw,
                          t.p_adjusted, t.delta, stats::cliffs_delta_magnitude(t.delta), t.reject ? "yes" : "no",
                          t.degenerate ? " (all differences zero)" : "");
    r.csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", t.regime, t.metric, t.config_a, t.config_b, n, t.p_raw,
                         t.p_adjusted, t.delta, stats::cliffs_delta_magnitude(t.delta), t.reject ? 1 : 0,
                         t.degenerate ? 1 : 0);
  }
  return r;
}

std::vector<fs::path> emit_curves(const MatrixResult& results, int stride, int window, const fs::path& dir) {
  if (results.empty()) throw std::runtime_error("no results to plot");
  if (stride < 1 || window < 1) throw std::invalid_argument("emit_curves: stride and window must be >= 1");
  fs::create_directories(dir);
  std::vector<fs::path> written;
  for (SpeedRegime regime : regimes_present(results)) {
    std::vector<std::size_t> pairings;
    for (std::size_t p = 0; p < kPairings.size(); ++p)
      if (!runs_of(results, regime, p).empty()) pairings.push_back(p);

    for (Metric m : kMetrics) {
      // Cross-seed mean of each run's trailing rolling mean, per pairing,
      // evaluated at the emitted rows only.
      std::size_t length = SIZE_MAX;
      for (std::size_t p : pairings)
        for (const auto* run : runs_of(results, regime, p)) length = std::min(length, run->per_episode.size());
      std::vector<std::size_t> rows;
      for (std::size_t e = static_cast<std::size_t>(stride) - 1; e < length; e += static_cast<std::size_t>(stride))
        rows.push_back(e);

      std::vector<std::vector<double>> columns;
      for (std::size_t p : pairings) {
        const auto runs = runs_of(results, regime, p);
        std::vector<double> column(rows.size(), 0.0);
        for (std::size_t r = 0; r < rows.size(); ++r) {
          const std::size_t e = rows[r];
          const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(window), e + 1);
          double across = 0.0;
          for (const auto* run : runs) {
            double sum = 0.0;
            for (std::size_t k = e + 1 - w; k <= e; ++k) sum += harness::metric_value(run->per_episode[k], m);
            across += sum / static_cast<double>(w);
          }
          column[r] = across / static_cast<double>(runs.size());
        }
        columns.push_back(std::move(column));
      }

      std::string csv = "episode";
      for (std::size_t p : pairings) csv += "," + harness::pairing_id(kPairings[p]);
      csv += "\n";
      for (std::size_t r = 0; r < rows.size(); ++r) {
        csv += fmt::format("{}", rows[r] + 1);
        for (const auto& column : columns) csv += fmt::format(",{}", column[r]);
        csv += "\n";
      }
      const fs::path path = dir / fmt::format("curves_{}_{}.csv", harness::regime_id(regime), harness::metric_id(m));
      std::ofstream out(path, std::ios::binary);
      if (!out || !(out << csv)) throw std::runtime_error("cannot write '" + path.string() + "'");
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace pplab::io
