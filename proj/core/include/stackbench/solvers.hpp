#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stackbench/geometry.hpp"

namespace stackbench {

// Container plus everything committed so far. The heightmap is always the
// replay of `placements()`; the EMS cache, once built, is kept equal to
// compute_ems() of the heightmap.
class PackState {
 public:
  explicit PackState(Container container);
  PackState(Container container, Heightmap heightmap);

  const Container& container() const { return container_; }
  const Heightmap& heightmap() const { return heightmap_; }
  std::span<const Placement> placements() const { return placements_; }

  const std::vector<Ems>& ems() const;
  void warm_ems() const { (void)ems(); }
  bool ems_cached() const { return ems_.has_value(); }

  // Applies the placement at its drop height. Throws ContractViolation when
  // the placement leaves the container.
  void commit(const Placement& placement);

  double elapsed_decision_seconds() const { return elapsed_decision_seconds_; }
  void add_decision_seconds(double s) { elapsed_decision_seconds_ += s; }

 private:
  Container container_;
  Heightmap heightmap_;
  std::vector<Placement> placements_;
  mutable std::optional<std::vector<Ems>> ems_;
  double elapsed_decision_seconds_{0.0};
};

// HM height term. footprint_sum: sum of current heights under the footprint.
// volume_increase: cells filled by the box plus the void trapped beneath it.
enum class HmObjective { footprint_sum, volume_increase };

struct SolverConfig {
  double min_support{kDefaultMinSupport};
  OrientationSet orientations{OrientationSet::yaw};
  // BR: score = fill_weight * fill_ratio + lambda * residual fit count.
  double br_lambda{1.0};
  double br_fill_weight{1.0};
  // SDF: mean truncated distance (normalized by truncation) + rotation
  // penalty * orientation index + height weight * rest z in meters.
  int sdf_truncation_cells{5};
  double sdf_rotation_penalty{0.01};
  double sdf_height_weight{1.0};
  HmObjective hm_objective{HmObjective::footprint_sum};
};

// Candidate evaluations performed by a solver call; the deterministic
// decision-time proxy.
struct WorkMeter {
  std::uint64_t units{0};
  void add(std::uint64_t n) { units += n; }
};

struct Proposal {
  Placement placement;
  double score{0.0};  // solver-internal; lower is better unless noted by the solver
  std::string solver_name;
};

class Solver {
 public:
  virtual ~Solver() = default;
  virtual std::string_view name() const = 0;
  // nullopt means no feasible placement exists for `item` in `state`.
  virtual std::optional<Proposal> propose(const PackState& state, const ItemSpec& item,
                                          WorkMeter* meter = nullptr) const = 0;
};

// Canonical registry names, in table order.
std::span<const std::string_view> solver_names();
// Throws ConfigError for an unknown name.
std::unique_ptr<Solver> make_solver(std::string_view name, const SolverConfig& config = {});

// PackE heuristic positions: first fit, floor building, column building and
// extreme points, filtered by check_feasible. Deduplicated on
// (x, y, oriented cell dims), keeping the lower orientation index.
std::vector<Placement> packe_candidates(const PackState& state, const ItemSpec& item,
                                        const SolverConfig& config = {});

struct PackeRuleSets {
  std::vector<std::pair<int, int>> first_fit;
  std::vector<std::pair<int, int>> floor_building;
  std::vector<std::pair<int, int>> column_building;
  std::vector<std::pair<int, int>> extreme_points;
};
// Raw (unfiltered) cell positions per rule.
PackeRuleSets packe_rule_positions(const PackState& state);

// Exposed-surface change (cells²) from raising footprint
// [x, x+fx) × [y, y+fy) to `top`: newly covered tops plus the net change in
// vertical faces between neighbouring columns.
std::int64_t surface_increase(const Heightmap& hm, int x, int y, int fx, int fy, int top);

// Truncated Manhattan distance from each cell to the nearest cell with height
// above `level` or to the container wall, row-major.
std::vector<int> truncated_distance_field(const Heightmap& hm, int level, int truncation);

}  // namespace stackbench
