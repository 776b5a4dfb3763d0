#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace stackbench {

// Bad user configuration (unknown names, weights that do not sum to 1, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data (dataset files, logs, non-finite metric values).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Vec3 {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  friend bool operator==(const Vec3&, const Vec3&) = default;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
};

// Axis-aligned box on the voxel grid, [x, x+dx) × [y, y+dy) × [z, z+dz), in cells.
struct CellBox {
  int x{0};
  int y{0};
  int z{0};
  int dx{0};
  int dy{0};
  int dz{0};

  friend auto operator<=>(const CellBox&, const CellBox&) = default;

  std::int64_t volume() const {
    return static_cast<std::int64_t>(dx) * dy * dz;
  }
  bool contains(const CellBox& o) const {
    return x <= o.x && y <= o.y && z <= o.z && o.x + o.dx <= x + dx &&
           o.y + o.dy <= y + dy && o.z + o.dz <= z + dz;
  }
  bool overlaps(const CellBox& o) const {
    return x < o.x + o.dx && o.x < x + dx && y < o.y + o.dy && o.y < y + dy &&
           z < o.z + o.dz && o.z < z + dz;
  }
};

}  // namespace stackbench
