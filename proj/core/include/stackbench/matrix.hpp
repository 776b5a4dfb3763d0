#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stackbench/data.hpp"
#include "stackbench/harness.hpp"
#include "stackbench/scoring.hpp"

namespace stackbench {

struct DatasetSpec {
  DatasetConfig config;
  // Load groups from JSONL instead of generating them.
  std::optional<std::filesystem::path> file;
};

struct SolverSpec {
  std::string label;   // cohort name, unique within a matrix
  std::string solver;  // registry name
};

// cell_mean: average each metric over groups, then normalize once per cell.
// per_group: normalize within each group, then average the per-group scores.
enum class NormalizationScope { cell_mean, per_group };
std::string_view scope_key(NormalizationScope s);
NormalizationScope scope_from_key(std::string_view key);

struct OutputOptions {
  bool csv{true};
  bool json{true};
  bool md{true};
  bool svg{false};
  bool logs{true};
};

struct MatrixConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<Setting> settings;
  std::vector<SolverSpec> solvers;
  int groups{30};
  std::uint64_t master_seed{0};
  int threads{1};
  HarnessConfig harness;
  std::map<Setting, WeightVector> weights;  // overrides of setting_weights()
  NormalizationScope scope{NormalizationScope::cell_mean};
  std::filesystem::path out_dir;
  OutputOptions outputs;

  WeightVector weights_for(Setting s) const;
  // Throws ConfigError.
  void validate() const;
};

// Per-dataset master seed; sequences depend only on it and the group index.
std::uint64_t dataset_seed(std::uint64_t master, const std::string& dataset);
std::vector<ItemSequence> dataset_groups(const DatasetSpec& spec, std::uint64_t master, int groups);

struct EpisodeSummary {
  std::string solver;
  int group{0};
  std::string sequence_hash;
  Termination termination{Termination::exhausted};
  std::string diagnostic;
  MetricVector metrics;
};

struct CellResult {
  std::string dataset;
  Setting setting{Setting::math_pack};
  std::vector<EpisodeSummary> episodes;  // solver-major, group order
  ScoreReport report;
  // Failed episodes per solver label; they are excluded from the means.
  std::map<std::string, int> failures;
};

struct MatrixResult {
  std::vector<CellResult> cells;  // dataset-major, then setting
};

// Aggregates one (dataset, setting) cell. `solvers` fixes the cohort order.
CellResult score_cell(const std::string& dataset, Setting setting,
                      const std::vector<std::string>& solvers,
                      std::vector<EpisodeSummary> episodes, const WeightVector& weights,
                      NormalizationScope scope);

// Runs every (dataset, setting, solver, group) episode on `threads` workers,
// writing per-episode logs and manifest.json under out_dir/logs when enabled.
// Results do not depend on the worker count.
MatrixResult run_matrix(const MatrixConfig& config);

// Rebuilds the matrix result from a log directory written by run_matrix.
// With `check`, every recomputed metric must equal the logged one; a
// mismatch throws InputError.
MatrixResult rescore_logs(const std::filesystem::path& log_dir, bool check = true);

}  // namespace stackbench
