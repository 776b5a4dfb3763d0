#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stackbench/data.hpp"
#include "stackbench/execution.hpp"
#include "stackbench/physics.hpp"
#include "stackbench/scoring.hpp"
#include "stackbench/solvers.hpp"

namespace stackbench {

// wall: monotonic clock around the solver call. modeled: WorkMeter units ×
// seconds_per_work, which makes whole runs reproducible byte for byte.
enum class TimingMode { wall, modeled };
std::string_view timing_key(TimingMode m);
TimingMode timing_from_key(std::string_view key);

struct HarnessConfig {
  SolverConfig solver;
  SettleConfig settle;
  ExecutionConfig execution;
  TimingMode timing{TimingMode::wall};
  double seconds_per_work{1e-8};
  bool record_waypoints{false};
};

enum class Termination {
  exhausted,
  no_feasible,
  collapse,            // an earlier box moved past the collapse threshold
  over_height,         // a box ended above the container
  deviation_exceeded,  // only the new box missed its target by more than the threshold
  solver_error,        // the solver threw or returned an invalid placement
};
std::string_view termination_key(Termination t);
Termination termination_from_key(std::string_view key);

struct SettleStep {
  double v_bar_lin{0.0};
  double v_bar_ang{0.0};
  double static_stability{1.0};
  double new_offset{0.0};
  double prior_max_offset{0.0};
  bool collapse_event{false};
};

struct TrajectoryStep {
  double length{0.0};
  std::int64_t plan_cost{0};
  std::vector<Vec3> waypoints;  // empty unless recorded
};

struct StepLog {
  std::size_t index{0};
  std::string item_id;
  Vec3 item_dims;
  double decision_seconds{0.0};
  std::uint64_t work_units{0};
  std::optional<Placement> placement;  // nullopt: solver found nothing
  bool committed{false};
  std::optional<SettleStep> settle;
  std::optional<TrajectoryStep> trajectory;
};

struct EpisodeLog {
  std::string dataset;
  std::string solver;
  Setting setting{Setting::math_pack};
  int group{0};
  std::uint64_t seed{0};
  std::string sequence_hash;
  Container container;
  double dangerous_threshold{0.0};
  std::vector<StepLog> steps;
  std::vector<double> final_offsets;  // per committed box, after the last settle
  Termination termination{Termination::exhausted};
  std::string diagnostic;

  bool failed() const { return termination == Termination::solver_error; }
  std::size_t committed() const;
};

struct EpisodeResult {
  EpisodeLog log;
  MetricVector metrics;
};

// Identification copied into the log.
struct EpisodeMeta {
  std::string dataset;
  std::string solver_label;
};

// Precondition: `sequence` is nonempty (ContractViolation otherwise).
EpisodeResult run_episode(Setting setting, const Solver& solver, const ItemSequence& sequence,
                          const Container& container, const HarnessConfig& config,
                          const EpisodeMeta& meta = {});

// The setting's MetricVector, rebuilt from the log alone.
MetricVector metrics_from_log(const EpisodeLog& log);

// JSONL: an "episode" header line, one "step" line per solver call, and an
// "end" line with the termination, final offsets and metrics.
void write_episode_log(std::ostream& out, const EpisodeLog& log, const MetricVector& metrics);
struct LoadedEpisode {
  EpisodeLog log;
  MetricVector reported;
};
LoadedEpisode read_episode_log(std::istream& in);

// Setting gating, termination consistency and metric recomputation; returns
// the problems found (empty for a clean log).
std::vector<std::string> validate_episode(const LoadedEpisode& ep);

}  // namespace stackbench
