#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stackbench/geometry.hpp"

namespace stackbench {

// Execution proxy for the robot arm: a pick, lift, traverse, descend path over the
// stack instead of sampling-based motion planning.
struct ExecutionConfig {
  double clearance{0.10};
  // Staging point: centred on the container's -y side, `pick_standoff` beyond
  // the wall and `pick_height` above the lid.
  double pick_standoff{0.30};
  double pick_height{0.20};
  // Dangerous if plan_cost > factor × container footprint cell count.
  double dangerous_threshold_factor{0.25};
};

struct PickPose {
  Vec3 position;
};

PickPose default_pick_pose(const Container& c, const ExecutionConfig& config = {});
double dangerous_threshold(const Container& c, const ExecutionConfig& config = {});

struct Trajectory {
  std::vector<Vec3> waypoints;
  double length{0.0};
  std::int64_t plan_cost{0};
};

double polyline_length(std::span<const Vec3> waypoints);

// Grid cells swept by the carried footprint while traversing from above the
// pick point to above the placement (cells whose centres lie in the swept hull).
std::vector<std::pair<int, int>> corridor_cells(const Heightmap& hm, const PickPose& pick,
                                               const Placement& placement);

// Path: pick → (pick xy, safe z) → (target xy, safe z) → placement top centre,
// safe z = max(corridor stack height, placement top) + clearance. plan_cost is
// the corridor cell count. Plan against the heightmap before the placement.
Trajectory plan_trajectory(const Heightmap& hm, const Container& c, const PickPose& pick,
                           const Placement& placement, double clearance);

// Metric reducers; nullopt when there is nothing to average.
std::optional<double> trajectory_length_metric(std::span<const Trajectory> trajectories);
std::optional<double> collapsed_placement_rate(std::int64_t n_collapsed, std::int64_t n_feasible);
std::optional<double> dangerous_operation_rate(std::span<const std::int64_t> plan_costs,
                                               double threshold);

}  // namespace stackbench
