#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ompsd/model.hpp"
#include "ompsd/pipelines.hpp"

namespace ompsd {

struct MethodSpec {
  MethodKind method;
  std::size_t E = 0;  // ignored on an E axis
};

/// Sweep over the OMP budget at a fixed noise level; every method runs at
/// every E.
struct EAxis {
  double snr_db = 18.0;
  std::vector<std::size_t> values;
};

/// Sweep over 1/sigma^2 in dB; each method keeps its own E.
struct SnrAxis {
  std::vector<double> values;
};

using SweepAxis = std::variant<EAxis, SnrAxis>;

struct SweepConfig {
  std::size_t L = 256;
  std::size_t K = 128;
  std::size_t s = 20;
  std::vector<MethodSpec> methods;
  SweepAxis sweep_axis = SnrAxis{};
  std::size_t trials = 2000;
  std::uint64_t master_seed = 1;
  std::string output_path = "sweep.csv";
  std::size_t threads = 0;  // 0: hardware concurrency
};

/// Throws ConfigError describing the first violated invariant.
void validate(const SweepConfig& cfg);

struct SweepRecord {
  std::string method;
  std::size_t E = 0;
  double snr_db = 0.0;
  std::size_t trials = 0;
  std::size_t symbol_errors = 0;
  std::size_t positions = 0;
  double ser = 0.0;
  double mean_sd_nodes = 0.0;
  double mean_output_sparsity = 0.0;
  std::size_t discarded_trials = 0;

  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

/// Side channel of a sweep that does not go to CSV.
struct RecordDiagnostics {
  DecodeTally sd;                       // summed; dimensions not retained
  std::size_t sd_decodes_min = 0;       // per-trial decode count range
  std::size_t sd_decodes_max = 0;
  bool sd_dimensions_consistent = true; // per-trial dimension lists match `expected_dimensions`
  std::vector<std::size_t> expected_dimensions;
  std::size_t omp_iterations_min = 0;
  std::size_t omp_iterations_max = 0;
  double max_residual_defect = 0.0;
  std::size_t defect_trials = 0;        // trials with a recorded defect
  std::size_t defect_above_1e6 = 0;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<RecordDiagnostics> diagnostics;  // parallel to records
  // trial_errors[r][t]: symbol errors of record r in trial t.
  std::vector<std::vector<std::uint32_t>> trial_errors;
  std::size_t discarded_trials = 0;
};

/// Runs every configured method on every grid point for cfg.trials trials.
///
/// Trial t draws one BaseDraw from a child seed of (master_seed, t, attempt)
/// and evaluates every grid point and method on it, so all comparisons,
/// across methods, E and SNR alike, are paired. Trials hitting RankDeficient
/// are redrawn with the next attempt index and counted. Records are ordered
/// grid point major, method minor. The result does not depend on the thread
/// count.
SweepResult run_sweep(const SweepConfig& cfg);

/// CSV header, no trailing newline.
inline constexpr const char* kCsvHeader =
    "method,E,snr_db,trials,symbol_errors,positions,ser,mean_sd_nodes,mean_output_sparsity,discarded_trials";

/// ser with 10 significant digits in fixed notation (0 -> 0.000000000).
std::string format_ser(double ser);

std::string to_csv(std::span<const SweepRecord> records);
/// Throws IoError.
void write_csv(std::span<const SweepRecord> records, const std::filesystem::path& path);

/// Inverse of to_csv. Throws IoError on a malformed header or row.
std::vector<SweepRecord> parse_csv(const std::string& text);
std::vector<SweepRecord> read_csv(const std::filesystem::path& path);

/// Builds a config from JSON text with the SweepConfig field names. Throws
/// ConfigError.
SweepConfig config_from_json(const std::string& json_text);

/// Reads and parses a JSON config file. Throws IoError if it cannot be read,
/// ConfigError if it is invalid.
SweepConfig load_config(const std::filesystem::path& path);

/// Applies `key=value` overrides (dotted keys address nested fields; values
/// are JSON, bare words are taken as strings) to JSON config text.
std::string apply_overrides(const std::string& json_text, std::span<const std::string> overrides);

}  // namespace ompsd
