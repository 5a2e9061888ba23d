#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "pplab/harness/training.hpp"
#include "pplab/io/experiment_file.hpp"

namespace pplab::io {

inline constexpr const char* kToolName = "pplab";
inline constexpr const char* kToolVersion = "1.0.0";

// On-disk layout of a results archive:
//   <dir>/manifest.json   tool, version, config digest, creation time, run list
//   <dir>/config.yaml     canonical experiment document
//   <dir>/runs/<pairing>_<regime>_seed<N>.csv
//                         episode,length,predator_reward,prey_reward
// Metric payloads are written at full round-trip precision, so identical
// configuration and seeds give byte-identical files.
struct Archive {
  ExperimentFile config;
  harness::MatrixResult results;
};

// `created` is an ISO-8601 UTC timestamp; when empty, SOURCE_DATE_EPOCH is
// honoured if set, else the current time is used.
void write_archive(const std::filesystem::path& dir, const ExperimentFile& config,
                   const harness::MatrixResult& results, const std::string& created = {});

// Throws std::runtime_error naming the missing or malformed file.
Archive read_archive(const std::filesystem::path& dir);

std::string run_file_name(const harness::Condition& c);

}  // namespace pplab::io
