#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "pdc/run_config.hpp"

namespace pdc {

std::string version();

struct RunRow {
  double sweep_value = 0.0;
  SchmidtResult result;
  double beta = 0.0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
};

struct RunOptions {
  bool record_timing = false;  // wall_ms stays 0 otherwise, keeping reruns byte-identical
  std::function<void(const RunRow&)> on_row;
};

struct RunSummary {
  std::filesystem::path csv;
  std::filesystem::path metadata;
  std::size_t resumed = 0;  // rows found complete from an earlier run
  std::size_t computed = 0;
};

inline constexpr const char* kCsvHeader = "sweep_value,K,K_err,N_rel,B_rel,method,dimension,beta,npwpa_ok,seed,wall_ms";

/// Seed used at sweep point `index`.
std::uint64_t point_seed(const RunConfig& config, std::size_t index);

std::string csv_row(const RunRow& row);

/// Evaluates every sweep point in order, appending rows to config.csv and keeping
/// `<csv>.meta.json` current. An existing CSV is resumed when its metadata records
/// the same config; any other existing output is refused.
RunSummary run_sweep(const RunConfig& config, const RunOptions& options = {});

/// Path of the sidecar metadata for a CSV.
std::filesystem::path metadata_path(const std::filesystem::path& csv);

/// Path of the 1D·2D product table written next to joint-cutoff analytic sweeps.
std::filesystem::path factorized_path(const std::filesystem::path& csv);

}  // namespace pdc
