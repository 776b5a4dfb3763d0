#include "stackbench/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stackbench {

namespace {

constexpr std::array<Orientation, 6> kOrientations{
    Orientation{{0, 1, 2}}, Orientation{{1, 0, 2}}, Orientation{{0, 2, 1}},
    Orientation{{2, 0, 1}}, Orientation{{1, 2, 0}}, Orientation{{2, 1, 0}},
};

// Snapping slack; dims like 0.3 m at 0.01 m cells divide to 29.999999999999996.
constexpr double kSnapSlack = 1e-9;

}  // namespace

int cells_up(double meters, double cell_size) {
  return static_cast<int>(std::ceil(meters / cell_size - kSnapSlack));
}

void validate_item(const ItemSpec& item) {
  for (int k = 0; k < 3; ++k) {
    const double d = item.dims[k];
    if (!std::isfinite(d) || d <= 0.0) {
      throw InputError("item '" + item.id + "' has non-positive or non-finite dimension");
    }
  }
}

int Container::nx() const { return static_cast<int>(std::lround(dims.x / cell_size)); }
int Container::ny() const { return static_cast<int>(std::lround(dims.y / cell_size)); }
int Container::nz() const {
  return static_cast<int>(std::floor(dims.z / cell_size + kSnapSlack));
}

void Container::validate() const {
  if (!(dims.x > 0 && dims.y > 0 && dims.z > 0)) {
    throw ConfigError("container dims must be positive");
  }
  if (!(collapse_threshold > 0)) throw ConfigError("collapse_threshold must be positive");
  if (!(cell_size > 0) || cell_size > std::min(dims.x, dims.y)) {
    throw ConfigError("cell_size must be positive and no larger than min(L, W)");
  }
  if (nx() < 1 || ny() < 1 || nz() < 1) throw ConfigError("container grid is empty");
}

int Orientation::index() const {
  for (int i = 0; i < 6; ++i) {
    if (kOrientations[i] == *this) return i;
  }
  throw ContractViolation("orientation is not a permutation");
}

std::span<const Orientation> orientations(OrientationSet set) {
  return set == OrientationSet::all ? std::span<const Orientation>(kOrientations)
                                    : std::span<const Orientation>(kOrientations.data(), 2);
}

Orientation orientation_from_index(int index) {
  if (index < 0 || index >= 6) throw InputError("orientation index out of range");
  return kOrientations[index];
}

CellBox Placement::cells(double cell_size) const {
  return {static_cast<int>(std::lround(min_corner.x / cell_size)),
          static_cast<int>(std::lround(min_corner.y / cell_size)),
          static_cast<int>(std::lround(min_corner.z / cell_size)),
          cells_up(oriented_dims.x, cell_size),
          cells_up(oriented_dims.y, cell_size),
          cells_up(oriented_dims.z, cell_size)};
}

Placement make_placement(const ItemSpec& item, Orientation o, int cx, int cy, int cz,
                         double cell_size) {
  return {item.id, {cx * cell_size, cy * cell_size, cz * cell_size}, o.apply(item.dims), o};
}

Heightmap::Heightmap(int nx, int ny, double cell_size)
    : nx_(nx), ny_(ny), cell_size_(cell_size),
      cells_(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0) {
  if (nx < 1 || ny < 1 || !(cell_size > 0)) {
    throw ContractViolation("heightmap needs a positive grid");
  }
}

Heightmap Heightmap::for_container(const Container& c) {
  return Heightmap(c.nx(), c.ny(), c.cell_size);
}

Heightmap Heightmap::from_meters(int nx, int ny, double cell_size,
                                 std::span<const double> heights) {
  Heightmap hm(nx, ny, cell_size);
  if (heights.size() != hm.cells_.size()) {
    throw ContractViolation("heightmap value count does not match grid");
  }
  for (std::size_t i = 0; i < heights.size(); ++i) {
    const double cells = heights[i] / cell_size;
    const double rounded = std::round(cells);
    if (heights[i] < 0 || std::abs(cells - rounded) > 1e-6) {
      throw ContractViolation("heightmap value is not a whole number of cells");
    }
    hm.cells_[i] = static_cast<int>(rounded);
  }
  return hm;
}

int Heightmap::max_cells() const {
  return cells_.empty() ? 0 : *std::max_element(cells_.begin(), cells_.end());
}

int footprint_height_cells(const Heightmap& hm, int x, int y, int fx, int fy) {
  if (!hm.in_bounds(x, y, fx, fy)) throw std::out_of_range("footprint outside heightmap");
  int best = 0;
  for (int j = y; j < y + fy; ++j) {
    for (int i = x; i < x + fx; ++i) best = std::max(best, hm.at(i, j));
  }
  return best;
}

double footprint_height(const Heightmap& hm, int x, int y, int fx, int fy) {
  return footprint_height_cells(hm, x, y, fx, fy) * hm.cell_size();
}

double support_ratio_cells(const Heightmap& hm, int x, int y, int fx, int fy, int rest) {
  if (!hm.in_bounds(x, y, fx, fy)) throw std::out_of_range("footprint outside heightmap");
  if (rest == 0) return 1.0;
  int on = 0;
  for (int j = y; j < y + fy; ++j) {
    for (int i = x; i < x + fx; ++i) on += hm.at(i, j) == rest ? 1 : 0;
  }
  return static_cast<double>(on) / (static_cast<double>(fx) * fy);
}

double support_ratio(const Heightmap& hm, const Placement& placement) {
  const CellBox b = placement.cells(hm.cell_size());
  const int rest = footprint_height_cells(hm, b.x, b.y, b.dx, b.dy);
  return support_ratio_cells(hm, b.x, b.y, b.dx, b.dy, rest);
}

bool check_feasible(const Heightmap& hm, const Container& c, const Placement& placement,
                    double min_support) {
  const CellBox b = placement.cells(hm.cell_size());
  if (!hm.in_bounds(b.x, b.y, b.dx, b.dy) || b.dz <= 0) return false;
  const int rest = footprint_height_cells(hm, b.x, b.y, b.dx, b.dy);
  if (rest + b.dz > c.nz()) return false;
  return support_ratio_cells(hm, b.x, b.y, b.dx, b.dy, rest) >= min_support;
}

void raise_footprint(Heightmap& hm, int x, int y, int fx, int fy, int top) {
  for (int j = y; j < y + fy; ++j) {
    for (int i = x; i < x + fx; ++i) hm.set(i, j, top);
  }
}

Heightmap apply_placement(const Heightmap& hm, const Placement& placement) {
  const CellBox b = placement.cells(hm.cell_size());
  if (!hm.in_bounds(b.x, b.y, b.dx, b.dy) || b.dz <= 0) {
    throw ContractViolation("placement '" + placement.item_id + "' is out of bounds");
  }
  Heightmap out = hm;
  const int rest = footprint_height_cells(hm, b.x, b.y, b.dx, b.dy);
  raise_footprint(out, b.x, b.y, b.dx, b.dy, rest + b.dz);
  return out;
}

double occupied_heightmap_volume(const Heightmap& hm) {
  const auto cells = hm.cells();
  const std::int64_t total = std::accumulate(cells.begin(), cells.end(), std::int64_t{0});
  const double cs = hm.cell_size();
  return static_cast<double>(total) * cs * cs * cs;
}

}  // namespace stackbench
