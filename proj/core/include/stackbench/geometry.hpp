#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stackbench/types.hpp"

namespace stackbench {

inline constexpr double kDefaultCellSize = 0.01;
inline constexpr double kDefaultMinSupport = 0.6;
// Heights are integer cell counts, so the "within ε_h of rest height" test is
// exact equality; the constant is kept for the continuous physics model.
inline constexpr double kHeightTolerance = 1e-6;

// Number of grid cells needed to cover `meters`, snapped up.
int cells_up(double meters, double cell_size);

struct ItemSpec {
  std::string id;
  Vec3 dims;  // (length, width, height), meters
  std::uint64_t seq_index{0};
  std::optional<double> timestamp;

  double volume() const { return dims.x * dims.y * dims.z; }
};

// Throws InputError unless all dims are strictly positive and finite.
void validate_item(const ItemSpec& item);

struct Container {
  Vec3 dims;  // (L, W, H), meters
  double collapse_threshold{0.05};
  double cell_size{kDefaultCellSize};

  int nx() const;
  int ny() const;
  int nz() const;
  double volume() const { return dims.x * dims.y * dims.z; }

  // Throws ConfigError on a violated invariant.
  void validate() const;
};

// One of the six axis-aligned permutations: oriented[k] = dims[perm[k]].
class Orientation {
 public:
  constexpr Orientation() = default;
  constexpr explicit Orientation(std::array<std::uint8_t, 3> perm) : perm_(perm) {}

  Vec3 apply(const Vec3& dims) const {
    return {dims[perm_[0]], dims[perm_[1]], dims[perm_[2]]};
  }
  const std::array<std::uint8_t, 3>& perm() const { return perm_; }
  // Position in the canonical identity-first list, 0..5.
  int index() const;
  bool is_upright() const { return perm_[2] == 2; }

  friend bool operator==(const Orientation&, const Orientation&) = default;

 private:
  std::array<std::uint8_t, 3> perm_{0, 1, 2};
};

enum class OrientationSet { yaw, all };

// Canonical search order. The yaw set is the first two entries of the full set.
std::span<const Orientation> orientations(OrientationSet set);
Orientation orientation_from_index(int index);

struct Placement {
  std::string item_id;
  Vec3 min_corner;      // meters
  Vec3 oriented_dims;   // true continuous dims after orientation, meters
  Orientation orientation;

  // Grid footprint: min corner rounded to cells, dims snapped up.
  CellBox cells(double cell_size) const;
  Vec3 top_center() const {
    return {min_corner.x + 0.5 * oriented_dims.x, min_corner.y + 0.5 * oriented_dims.y,
            min_corner.z + oriented_dims.z};
  }
};

// Builds a placement anchored at grid cell (cx, cy, cz).
Placement make_placement(const ItemSpec& item, Orientation o, int cx, int cy, int cz,
                         double cell_size);

class Heightmap {
 public:
  Heightmap() = default;
  Heightmap(int nx, int ny, double cell_size);
  static Heightmap for_container(const Container& c);
  // Heights in meters, row-major (index = y * nx + x). Each value must be a
  // whole number of cells.
  static Heightmap from_meters(int nx, int ny, double cell_size, std::span<const double> heights);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double cell_size() const { return cell_size_; }

  int at(int x, int y) const { return cells_[index(x, y)]; }
  void set(int x, int y, int h) { cells_[index(x, y)] = h; }
  double height(int x, int y) const { return at(x, y) * cell_size_; }
  bool in_bounds(int x, int y, int fx, int fy) const {
    return x >= 0 && y >= 0 && fx > 0 && fy > 0 && x + fx <= nx_ && y + fy <= ny_;
  }

  std::span<const int> cells() const { return cells_; }
  int max_cells() const;

  friend bool operator==(const Heightmap&, const Heightmap&) = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * nx_ + x; }

  int nx_{0};
  int ny_{0};
  double cell_size_{kDefaultCellSize};
  std::vector<int> cells_;
};

// Max height over footprint [x, x+fx) × [y, y+fy); throws std::out_of_range.
int footprint_height_cells(const Heightmap& hm, int x, int y, int fx, int fy);
double footprint_height(const Heightmap& hm, int x, int y, int fx, int fy);

// Fraction of footprint cells at the rest height. Floor contact gives 1.0.
double support_ratio(const Heightmap& hm, const Placement& placement);
double support_ratio_cells(const Heightmap& hm, int x, int y, int fx, int fy, int rest);

bool check_feasible(const Heightmap& hm, const Container& c, const Placement& placement,
                    double min_support);

// Footprint cells become rest + dz. Throws ContractViolation if the footprint
// leaves the grid; height against the container is check_feasible's job.
Heightmap apply_placement(const Heightmap& hm, const Placement& placement);
// In-place variant on a cell footprint; `top` is the new column height.
void raise_footprint(Heightmap& hm, int x, int y, int fx, int fy, int top);

double occupied_heightmap_volume(const Heightmap& hm);

// Empty maximal space above the heightmap, in cells.
struct Ems {
  CellBox box;

  Vec3 min_corner(double cell_size) const {
    return {box.x * cell_size, box.y * cell_size, box.z * cell_size};
  }
  Vec3 dims(double cell_size) const {
    return {box.dx * cell_size, box.dy * cell_size, box.dz * cell_size};
  }
  bool fits(int fx, int fy, int fz) const {
    return fx <= box.dx && fy <= box.dy && fz <= box.dz;
  }

  friend auto operator<=>(const Ems&, const Ems&) = default;
};

// All maximal empty boxes of the free space above the heightmap, sorted by
// (z, y, x, dz, dy, dx).
std::vector<Ems> compute_ems(const Heightmap& hm, const Container& c);

// EMS set after raising footprint [x, x+fx) × [y, y+fy) to `top`, derived from
// the set before. Equals compute_ems() of the updated heightmap.
std::vector<Ems> update_ems(std::span<const Ems> before, int x, int y, int fx, int fy, int top,
                            int nz);

void sort_ems(std::vector<Ems>& ems);

}  // namespace stackbench
