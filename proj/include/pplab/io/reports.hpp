#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pplab/harness/training.hpp"
#include "pplab/stats/paired_tests.hpp"

namespace pplab::io {

struct Report {
  std::string text;
  std::string csv;
};

// Sample mean and standard deviation (n - 1 denominator; NaN for n < 2).
struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};
MeanSd mean_sd(const std::vector<double>& values);

// "25.0 ± 7.1"; one decimal; "n/a" stands in for an undefined SD.
std::string format_mean_sd(const MeanSd& m);

// Regimes with at least one run in `results`, canonical order.
std::vector<harness::SpeedRegime> regimes_present(const harness::MatrixResult& results);

// Per regime: one row per pairing (canonical order), one "mean ± sd" column
// per metric, computed across seeds from the seed-level final-window means.
// Missing pairings appear as rows of "—". CSV columns:
// regime,pairing,metric,n_seeds,mean,sd
Report emit_summary(const harness::MatrixResult& results, const std::vector<harness::SpeedRegime>& regimes);

// The six Holm-corrected pairwise tests per (regime, metric). Throws
// std::runtime_error naming the missing cells when a requested regime lacks
// a pairing or the pairings' seed sets differ, and when `results` is empty.
std::vector<stats::PairedTest> stats_tests(const harness::MatrixResult& results,
                                           const std::vector<harness::SpeedRegime>& regimes);

// CSV columns: regime,metric,config_a,config_b,n,p_raw,p_adjusted,delta,magnitude,reject,degenerate
Report emit_stats_report(const harness::MatrixResult& results, const std::vector<harness::SpeedRegime>& regimes);

// Writes curves_<regime>_<metric>.csv into `dir` for every regime present:
// header "episode,<pairing ids>", one row per stride-th episode, each cell the
// cross-seed mean of the trailing rolling mean over `window` episodes.
// Returns the written paths.
std::vector<std::filesystem::path> emit_curves(const harness::MatrixResult& results, int stride, int window,
                                               const std::filesystem::path& dir);

}  // namespace pplab::io
