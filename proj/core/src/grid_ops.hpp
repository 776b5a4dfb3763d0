#pragma once

// Internal helpers shared by the solver implementations.

#include <cstdint>
#include <memory>
#include <vector>

#include "stackbench/geometry.hpp"
#include "stackbench/solvers.hpp"

namespace stackbench::detail {

// Max of every fx × fy window. Result is (nx-fx+1) × (ny-fy+1), row-major.
std::vector<int> window_max(const Heightmap& hm, int fx, int fy);

// (nx+1) × (ny+1) summed-area table of arbitrary per-cell values.
class SumTable {
 public:
  SumTable() = default;
  SumTable(int nx, int ny, const std::vector<int>& values);

  std::int64_t sum(int x, int y, int fx, int fy) const {
    return get(x + fx, y + fy) - get(x, y + fy) - get(x + fx, y) + get(x, y);
  }

 private:
  std::int64_t get(int x, int y) const {
    return sums_[static_cast<std::size_t>(y) * (nx_ + 1) + x];
  }

  int nx_{0};
  std::vector<std::int64_t> sums_;
};

struct CellDims {
  int fx;
  int fy;
  int fz;
};

inline CellDims oriented_cells(const ItemSpec& item, Orientation o, double cs) {
  const Vec3 d = o.apply(item.dims);
  return {cells_up(d.x, cs), cells_up(d.y, cs), cells_up(d.z, cs)};
}

// Ordering key shared by all solvers: score, then (y, x, orientation index).
struct RankedCandidate {
  double score;
  int y;
  int x;
  int orientation;
  int z;

  bool operator<(const RankedCandidate& o) const {
    if (score != o.score) return score < o.score;
    if (y != o.y) return y < o.y;
    if (x != o.x) return x < o.x;
    return orientation < o.orientation;
  }
};

std::unique_ptr<Solver> make_dbl(const SolverConfig& config);
std::unique_ptr<Solver> make_hm(const SolverConfig& config);
std::unique_ptr<Solver> make_sdf(const SolverConfig& config);
std::unique_ptr<Solver> make_lsah(const SolverConfig& config);
std::unique_ptr<Solver> make_macs(const SolverConfig& config);
std::unique_ptr<Solver> make_onlinebph(const SolverConfig& config);
std::unique_ptr<Solver> make_br(const SolverConfig& config);
std::unique_ptr<Solver> make_packe_h(const SolverConfig& config);

}  // namespace stackbench::detail
