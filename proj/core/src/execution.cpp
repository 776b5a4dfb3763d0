#include "stackbench/execution.hpp"

#include <algorithm>
#include <cmath>

#include "stackbench/hull.hpp"

namespace stackbench {

PickPose default_pick_pose(const Container& c, const ExecutionConfig& config) {
  return {{0.5 * c.dims.x, -config.pick_standoff, c.dims.z + config.pick_height}};
}

double dangerous_threshold(const Container& c, const ExecutionConfig& config) {
  return config.dangerous_threshold_factor * static_cast<double>(c.nx()) * c.ny();
}

double polyline_length(std::span<const Vec3> waypoints) {
  double len = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    len += (waypoints[i] - waypoints[i - 1]).norm();
  }
  return len;
}

std::vector<std::pair<int, int>> corridor_cells(const Heightmap& hm, const PickPose& pick,
                                               const Placement& placement) {
  const double cs = hm.cell_size();
  const double hx = 0.5 * placement.oriented_dims.x;
  const double hy = 0.5 * placement.oriented_dims.y;
  const Vec3 target = placement.top_center();
  const Point2 ends[2] = {{pick.position.x, pick.position.y}, {target.x, target.y}};

  std::vector<Point2> pts;
  for (const Point2& e : ends) {
    pts.insert(pts.end(), {{e.x - hx, e.y - hy}, {e.x + hx, e.y - hy},
                           {e.x + hx, e.y + hy}, {e.x - hx, e.y + hy}});
  }
  double x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
  for (const Point2& p : pts) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const std::vector<Point2> hull = convex_hull(std::move(pts));

  const int i0 = std::max(0, static_cast<int>(std::floor(x0 / cs)));
  const int i1 = std::min(hm.nx() - 1, static_cast<int>(std::ceil(x1 / cs)));
  const int j0 = std::max(0, static_cast<int>(std::floor(y0 / cs)));
  const int j1 = std::min(hm.ny() - 1, static_cast<int>(std::ceil(y1 / cs)));

  std::vector<std::pair<int, int>> cells;
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      if (point_in_convex(hull, {(i + 0.5) * cs, (j + 0.5) * cs})) cells.emplace_back(i, j);
    }
  }
  return cells;
}

Trajectory plan_trajectory(const Heightmap& hm, const Container& c, const PickPose& pick,
                           const Placement& placement, double clearance) {
  (void)c;
  const auto corridor = corridor_cells(hm, pick, placement);
  double stack = 0.0;
  for (const auto& [i, j] : corridor) stack = std::max(stack, hm.height(i, j));

  const Vec3 target = placement.top_center();
  const double safe_z = std::max(stack, target.z) + clearance;

  Trajectory t;
  t.waypoints = {pick.position,
                 {pick.position.x, pick.position.y, safe_z},
                 {target.x, target.y, safe_z},
                 target};
  t.length = polyline_length(t.waypoints);
  t.plan_cost = static_cast<std::int64_t>(corridor.size());
  return t;
}

std::optional<double> trajectory_length_metric(std::span<const Trajectory> trajectories) {
  if (trajectories.empty()) return std::nullopt;
  double sum = 0.0;
  for (const Trajectory& t : trajectories) sum += t.length;
  return sum / static_cast<double>(trajectories.size());
}

std::optional<double> collapsed_placement_rate(std::int64_t n_collapsed, std::int64_t n_feasible) {
  if (n_feasible <= 0) return std::nullopt;
  if (n_collapsed < 0 || n_collapsed > n_feasible) {
    throw ContractViolation("collapsed count outside [0, feasible]");
  }
  return static_cast<double>(n_collapsed) / static_cast<double>(n_feasible);
}

std::optional<double> dangerous_operation_rate(std::span<const std::int64_t> plan_costs,
                                               double threshold) {
  if (!(threshold > 0.0)) throw ContractViolation("dangerous threshold must be positive");
  if (plan_costs.empty()) return std::nullopt;
  const auto n = std::count_if(plan_costs.begin(), plan_costs.end(),
                               [&](std::int64_t cost) { return static_cast<double>(cost) > threshold; });
  return static_cast<double>(n) / static_cast<double>(plan_costs.size());
}

}  // namespace stackbench
