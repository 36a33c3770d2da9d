#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fflab/search.hpp"
#include "fflab/verify.hpp"

namespace fflab {

// One batch run: which driver, which moduli/sizes, how to search, where to
// write. Config files are key=value lines; command-line flags override them.
struct ExperimentConfig {
  std::string kind;  // sumprod | incidence | distance | kakeya | verify-all
  std::vector<std::uint32_t> qs;
  std::vector<std::uint32_t> sizes;
  SearchMode mode = SearchMode::Exhaustive;
  std::uint32_t trials = 1;
  std::uint64_t seed = 0;
  std::string out_dir = "results";
  std::string format = "json";        // csv: canonical file only; json: + mirror
  std::string generator = "uniform";  // incidence instance source
  bool exclude_zero = false;          // distance statistic variant
};

// Applies one key=value pair; BadConfig for unknown keys or bad values.
void apply_config_pair(ExperimentConfig& cfg, const std::string& key,
                       const std::string& value);

// key=value per line, # comments. Does not validate completeness.
void read_config_file(std::istream& is, ExperimentConfig& cfg);

// FNV-1a over the canonical serialization of everything that affects output
// bytes (the output directory does not).
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct RunManifest {
  std::uint64_t cfg_hash = 0;
  std::string artifact_version;
  std::vector<std::string> provenance;  // one entry per result row
  double wall_seconds = 0;              // excluded from replay comparison
};

struct RunOutcome {
  RunManifest manifest;
  bool ok = true;                   // false when a verify suite reported violations
  std::vector<SuiteResult> suites;  // filled for verify-all
  std::vector<std::string> files;   // result files written (relative to out_dir)
};

// Dispatches to the module drivers, writes <kind>.csv (+ .json mirror) and
// manifest.json under cfg.out_dir. Rows are computed cell-by-cell (optionally
// in parallel, FFLAB_WORKERS) and written in canonical order, so bytes never
// depend on scheduling. BadConfig on invalid configs.
RunOutcome run_experiment(const ExperimentConfig& cfg);

// Writes one self-contained matplotlib script per result kind found in dir.
// MissingResults when no known CSV is present.
std::vector<std::string> emit_plots(const std::string& results_dir);

}  // namespace fflab
