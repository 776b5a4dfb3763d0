#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stackbench/geometry.hpp"

namespace stackbench {

enum class VelocityAggregate {
  mean,  // v̄ = mean over boxes of each box's max velocity
  max,   // overall maximum across boxes
};

// Quasi-static settling model. Each tick, boxes are visited in placement
// order: a box drops (or is pushed up) onto the highest earlier box under it,
// then, if its centre of mass lies outside the convex hull of its contact
// patches, it slides toward the hull by at most `slide_rate`.
struct SettleConfig {
  int steps{200};
  double tick{1.0 / 240.0};
  double slide_rate{0.002};       // m per tick
  double angular_gain{10.0};      // rad/s per m of lever arm outside support
  double com_margin{0.0};         // required inset of the COM inside the hull, m
  double height_tolerance{kHeightTolerance};
  VelocityAggregate aggregate{VelocityAggregate::mean};
};

struct RigidBoxState {
  std::string item_id;
  Vec3 target_pose;  // min corner as planned
  Vec3 actual_pose;  // min corner after settling
  Vec3 dims;         // grid-snapped oriented dims
  double lin_vel_max{0.0};
  double ang_vel_max{0.0};

  double offset() const { return (actual_pose - target_pose).norm(); }
};

struct StabilitySample {
  double v_bar_lin{0.0};
  double v_bar_ang{0.0};
};

struct SettleReport {
  std::vector<RigidBoxState> boxes;
  int steps_run{0};
  bool collapsed{false};
  double max_offset{0.0};

  StabilitySample sample(VelocityAggregate aggregate = VelocityAggregate::mean) const;
};

// Settles `placements` from their target poses. `initial` may carry
// already-settled poses for a prefix of the list (the remaining boxes start
// at their targets).
SettleReport settle(std::span<const Placement> placements, const Container& c,
                    const SettleConfig& config, std::span<const Vec3> initial = {});
SettleReport settle(std::span<const Placement> placements, const Container& c, int steps);

// 0.5 (1 - v̄_lin^0.4) + 0.5 (1 - v̄_ang^0.3), each term clamped to [0, 1].
// Throws ContractViolation for negative input.
double static_stability(const StabilitySample& sample);

// Mean target-to-actual distance; nullopt for an empty report.
std::optional<double> local_stability(const SettleReport& report);

// True iff some box moved farther than `threshold`.
bool detect_collapse(const SettleReport& report, double threshold);

}  // namespace stackbench
