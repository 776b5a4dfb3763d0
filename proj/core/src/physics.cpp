#include "stackbench/physics.hpp"

#include <algorithm>
#include <cmath>

#include "stackbench/hull.hpp"

namespace stackbench {

namespace {

constexpr double kMinContactArea = 1e-12;
// COM inside the hull up to rounding counts as supported.
constexpr double kSupportSlack = 1e-9;

Rect2 footprint(const RigidBoxState& b) {
  return {b.actual_pose.x, b.actual_pose.y, b.actual_pose.x + b.dims.x,
          b.actual_pose.y + b.dims.y};
}

Point2 centroid(std::span<const Point2> pts) {
  Point2 c;
  for (const Point2& p : pts) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= static_cast<double>(pts.size());
  c.y /= static_cast<double>(pts.size());
  return c;
}

struct StepMotion {
  double linear{0.0};
  double angular{0.0};
};

// One relaxation update for box k against boxes [0, k).
StepMotion relax(std::vector<RigidBoxState>& boxes, std::size_t k, const SettleConfig& cfg) {
  RigidBoxState& b = boxes[k];
  const Vec3 before = b.actual_pose;
  const Rect2 fp = footprint(b);

  double rest = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    if (intersect(fp, footprint(boxes[j])).area() > kMinContactArea) {
      rest = std::max(rest, boxes[j].actual_pose.z + boxes[j].dims.z);
    }
  }
  // Stacked tops are sums of cell multiples; ignore rounding-level gaps.
  if (std::abs(rest - b.actual_pose.z) > cfg.height_tolerance) b.actual_pose.z = rest;
  rest = b.actual_pose.z;

  StepMotion motion;
  if (rest > cfg.height_tolerance && k > 0) {
    std::vector<Point2> corners;
    for (std::size_t j = 0; j < k; ++j) {
      const RigidBoxState& s = boxes[j];
      if (std::abs(s.actual_pose.z + s.dims.z - rest) > cfg.height_tolerance) continue;
      const Rect2 patch = intersect(fp, footprint(s));
      if (patch.area() <= kMinContactArea) continue;
      corners.insert(corners.end(), {{patch.x0, patch.y0}, {patch.x1, patch.y0},
                                     {patch.x1, patch.y1}, {patch.x0, patch.y1}});
    }
    const std::vector<Point2> hull = convex_hull(std::move(corners));
    if (hull.empty()) return {(b.actual_pose - before).norm() / cfg.tick, 0.0};
    const Point2 com{b.actual_pose.x + 0.5 * b.dims.x, b.actual_pose.y + 0.5 * b.dims.y};
    const HullQuery q = query_hull(hull, com);
    const double deficit = cfg.com_margin - q.signed_depth;
    if (deficit > kSupportSlack) {
      const Point2 goal = q.signed_depth < 0.0 ? q.nearest : centroid(hull);
      const double gx = goal.x - com.x;
      const double gy = goal.y - com.y;
      const double len = std::hypot(gx, gy);
      if (len > 0.0) {
        const double step = std::min(cfg.slide_rate, deficit);
        b.actual_pose.x += gx / len * step;
        b.actual_pose.y += gy / len * step;
      }
      motion.angular = cfg.angular_gain * deficit;
    }
  }
  motion.linear = (b.actual_pose - before).norm() / cfg.tick;
  return motion;
}

}  // namespace

StabilitySample SettleReport::sample(VelocityAggregate aggregate) const {
  StabilitySample s;
  if (boxes.empty()) return s;
  for (const RigidBoxState& b : boxes) {
    if (aggregate == VelocityAggregate::mean) {
      s.v_bar_lin += b.lin_vel_max;
      s.v_bar_ang += b.ang_vel_max;
    } else {
      s.v_bar_lin = std::max(s.v_bar_lin, b.lin_vel_max);
      s.v_bar_ang = std::max(s.v_bar_ang, b.ang_vel_max);
    }
  }
  if (aggregate == VelocityAggregate::mean) {
    s.v_bar_lin /= static_cast<double>(boxes.size());
    s.v_bar_ang /= static_cast<double>(boxes.size());
  }
  return s;
}

SettleReport settle(std::span<const Placement> placements, const Container& c,
                    const SettleConfig& config, std::span<const Vec3> initial) {
  if (initial.size() > placements.size()) {
    throw ContractViolation("more initial poses than placements");
  }
  const double cs = c.cell_size;
  SettleReport report;
  report.boxes.reserve(placements.size());
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const Placement& p = placements[i];
    const CellBox cells = p.cells(cs);
    RigidBoxState b;
    b.item_id = p.item_id;
    b.target_pose = {cells.x * cs, cells.y * cs, cells.z * cs};
    b.actual_pose = i < initial.size() ? initial[i] : b.target_pose;
    b.dims = {cells.dx * cs, cells.dy * cs, cells.dz * cs};
    report.boxes.push_back(std::move(b));
  }

  // Once a full tick passes without motion the model is at its fixed point,
  // and every later tick is identical, so the loop may stop early.
  for (int step = 0; step < config.steps; ++step) {
    bool moved = false;
    for (std::size_t k = 0; k < report.boxes.size(); ++k) {
      const StepMotion m = relax(report.boxes, k, config);
      RigidBoxState& b = report.boxes[k];
      b.lin_vel_max = std::max(b.lin_vel_max, m.linear);
      b.ang_vel_max = std::max(b.ang_vel_max, m.angular);
      moved = moved || m.linear > 0.0 || m.angular > 0.0;
    }
    if (!moved) break;
  }
  report.steps_run = config.steps;
  for (const RigidBoxState& b : report.boxes) {
    report.max_offset = std::max(report.max_offset, b.offset());
  }
  report.collapsed = report.max_offset > c.collapse_threshold;
  return report;
}

SettleReport settle(std::span<const Placement> placements, const Container& c, int steps) {
  SettleConfig config;
  config.steps = steps;
  return settle(placements, c, config);
}

double static_stability(const StabilitySample& sample) {
  if (!(sample.v_bar_lin >= 0.0) || !(sample.v_bar_ang >= 0.0)) {
    throw ContractViolation("stability velocities must be non-negative");
  }
  const double r_lin = std::clamp(1.0 - std::pow(sample.v_bar_lin, 0.4), 0.0, 1.0);
  const double r_ang = std::clamp(1.0 - std::pow(sample.v_bar_ang, 0.3), 0.0, 1.0);
  return 0.5 * r_lin + 0.5 * r_ang;
}

std::optional<double> local_stability(const SettleReport& report) {
  if (report.boxes.empty()) return std::nullopt;
  double sum = 0.0;
  for (const RigidBoxState& b : report.boxes) sum += b.offset();
  return sum / static_cast<double>(report.boxes.size());
}

bool detect_collapse(const SettleReport& report, double threshold) {
  if (!(threshold > 0.0)) throw ContractViolation("collapse threshold must be positive");
  return std::any_of(report.boxes.begin(), report.boxes.end(),
                     [&](const RigidBoxState& b) { return b.offset() > threshold; });
}

}  // namespace stackbench
