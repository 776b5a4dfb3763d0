// Grid-scan solvers: every cell position × orientation is scored and the
// best candidate that passes the support check wins.

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

#include "grid_ops.hpp"

namespace stackbench {

namespace detail {

std::vector<int> window_max(const Heightmap& hm, int fx, int fy) {
  const int nx = hm.nx();
  const int ny = hm.ny();
  const int wx = nx - fx + 1;
  const int wy = ny - fy + 1;
  if (wx <= 0 || wy <= 0) return {};

  // Rows first, then columns; monotone deque per line.
  std::vector<int> rows(static_cast<std::size_t>(wx) * ny);
  std::deque<int> dq;
  for (int y = 0; y < ny; ++y) {
    dq.clear();
    for (int x = 0; x < nx; ++x) {
      while (!dq.empty() && hm.at(dq.back(), y) <= hm.at(x, y)) dq.pop_back();
      dq.push_back(x);
      if (dq.front() <= x - fx) dq.pop_front();
      if (x >= fx - 1) rows[static_cast<std::size_t>(y) * wx + (x - fx + 1)] = hm.at(dq.front(), y);
    }
  }
  std::vector<int> out(static_cast<std::size_t>(wx) * wy);
  for (int x = 0; x < wx; ++x) {
    dq.clear();
    auto row_at = [&](int y) { return rows[static_cast<std::size_t>(y) * wx + x]; };
    for (int y = 0; y < ny; ++y) {
      while (!dq.empty() && row_at(dq.back()) <= row_at(y)) dq.pop_back();
      dq.push_back(y);
      if (dq.front() <= y - fy) dq.pop_front();
      if (y >= fy - 1) out[static_cast<std::size_t>(y - fy + 1) * wx + x] = row_at(dq.front());
    }
  }
  return out;
}

SumTable::SumTable(int nx, int ny, const std::vector<int>& values)
    : nx_(nx), sums_(static_cast<std::size_t>(nx + 1) * (ny + 1), 0) {
  for (int y = 0; y < ny; ++y) {
    std::int64_t row = 0;
    for (int x = 0; x < nx; ++x) {
      row += values[static_cast<std::size_t>(y) * nx + x];
      sums_[static_cast<std::size_t>(y + 1) * (nx + 1) + x + 1] =
          sums_[static_cast<std::size_t>(y) * (nx + 1) + x + 1] + row;
    }
  }
}

}  // namespace detail

std::vector<int> truncated_distance_field(const Heightmap& hm, int level, int truncation) {
  const int nx = hm.nx();
  const int ny = hm.ny();
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<int> d(static_cast<std::size_t>(nx) * ny);
  auto at = [&](int x, int y) -> int& { return d[static_cast<std::size_t>(y) * nx + x]; };

  // Cells outside the grid count as occupied, so a wall neighbour is at 1.
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      int v = hm.at(x, y) > level ? 0 : inf;
      if (v != 0) {
        v = std::min(v, x == 0 ? 1 : at(x - 1, y) + 1);
        v = std::min(v, y == 0 ? 1 : at(x, y - 1) + 1);
      }
      at(x, y) = v;
    }
  }
  for (int y = ny - 1; y >= 0; --y) {
    for (int x = nx - 1; x >= 0; --x) {
      int v = at(x, y);
      v = std::min(v, x == nx - 1 ? 1 : at(x + 1, y) + 1);
      v = std::min(v, y == ny - 1 ? 1 : at(x, y + 1) + 1);
      at(x, y) = std::min(v, truncation);
    }
  }
  return d;
}

namespace {

using detail::CellDims;
using detail::RankedCandidate;

// Per-call scoring context; built once per item so it may cache tables.
class ItemScorer {
 public:
  virtual ~ItemScorer() = default;
  virtual double score(int orientation, int x, int y, int z, const CellDims& d) = 0;
};

// Scores every in-height (x, y, orientation), then walks candidates best
// first until one passes the support check.
class GridSolver : public Solver {
 public:
  GridSolver(std::string name, SolverConfig config)
      : name_(std::move(name)), config_(config) {}

  std::string_view name() const override { return name_; }

  std::optional<Proposal> propose(const PackState& state, const ItemSpec& item,
                                  WorkMeter* meter) const override {
    const Container& c = state.container();
    const Heightmap& hm = state.heightmap();
    const double cs = c.cell_size;
    const int nz = c.nz();
    const std::unique_ptr<ItemScorer> scorer = make_scorer(state);

    std::vector<RankedCandidate> ranked;
    std::uint64_t work = 0;
    for (const Orientation& o : orientations(config_.orientations)) {
      const CellDims d = detail::oriented_cells(item, o, cs);
      if (d.fx > hm.nx() || d.fy > hm.ny() || d.fz > nz) continue;
      const std::vector<int> rest = detail::window_max(hm, d.fx, d.fy);
      const int wx = hm.nx() - d.fx + 1;
      const int wy = hm.ny() - d.fy + 1;
      for (int y = 0; y < wy; ++y) {
        for (int x = 0; x < wx; ++x) {
          const int z = rest[static_cast<std::size_t>(y) * wx + x];
          if (z + d.fz > nz) continue;
          ranked.push_back({scorer->score(o.index(), x, y, z, d), y, x, o.index(), z});
        }
      }
      work += static_cast<std::uint64_t>(wx) * wy;
    }
    std::sort(ranked.begin(), ranked.end());

    std::optional<Proposal> best;
    for (const RankedCandidate& r : ranked) {
      const Orientation o = orientation_from_index(r.orientation);
      const CellDims d = detail::oriented_cells(item, o, cs);
      work += static_cast<std::uint64_t>(d.fx) * d.fy;
      if (support_ratio_cells(hm, r.x, r.y, d.fx, d.fy, r.z) >= config_.min_support) {
        best = Proposal{make_placement(item, o, r.x, r.y, r.z, cs), r.score, name_};
        break;
      }
    }
    if (meter) meter->add(work);
    return best;
  }

 protected:
  virtual std::unique_ptr<ItemScorer> make_scorer(const PackState& state) const = 0;
  const SolverConfig& config() const { return config_; }

 private:
  std::string name_;
  SolverConfig config_;
};

// Deep-bottom-left: i + j + 100 z, z in cells.
class DblSolver final : public GridSolver {
 public:
  explicit DblSolver(const SolverConfig& config) : GridSolver("dbl", config) {}

 protected:
  struct Scorer final : ItemScorer {
    double score(int, int x, int y, int z, const CellDims&) override {
      return static_cast<double>(x) + y + 100.0 * z;
    }
  };
  std::unique_ptr<ItemScorer> make_scorer(const PackState&) const override {
    return std::make_unique<Scorer>();
  }
};

// Heightmap minimization: i + j + 100 × height term, in cells. The default
// term is the sum of current heights under the footprint; the alternative is
// the occupied-volume increase, fx·fy·(z + fz) minus that sum.
class HmSolver final : public GridSolver {
 public:
  explicit HmSolver(const SolverConfig& config) : GridSolver("hm", config) {}

 protected:
  struct Scorer final : ItemScorer {
    Scorer(const Heightmap& hm, HmObjective objective)
        : sums(hm.nx(), hm.ny(), std::vector<int>(hm.cells().begin(), hm.cells().end())),
          objective(objective) {}
    double score(int, int x, int y, int z, const CellDims& d) override {
      const auto under = static_cast<double>(sums.sum(x, y, d.fx, d.fy));
      const double term = objective == HmObjective::footprint_sum
                              ? under
                              : static_cast<double>(d.fx) * d.fy * (z + d.fz) - under;
      return static_cast<double>(x) + y + 100.0 * term;
    }
    detail::SumTable sums;
    HmObjective objective;
  };
  std::unique_ptr<ItemScorer> make_scorer(const PackState& state) const override {
    return std::make_unique<Scorer>(state.heightmap(), config().hm_objective);
  }
};

// Signed-distance packing: mean truncated distance to occupied space over the
// footprint (normalized to [0, 1]) + rotation penalty + height in meters.
class SdfSolver final : public GridSolver {
 public:
  explicit SdfSolver(const SolverConfig& config) : GridSolver("sdf", config) {}

 protected:
  struct Scorer final : ItemScorer {
    Scorer(const Heightmap& hm, const SolverConfig& cfg) : hm(hm), cfg(cfg) {}

    double score(int orientation, int x, int y, int z, const CellDims& d) override {
      const double area = static_cast<double>(d.fx) * d.fy;
      const double mean = static_cast<double>(field_at(z).sum(x, y, d.fx, d.fy)) / area;
      return mean / cfg.sdf_truncation_cells + cfg.sdf_rotation_penalty * orientation +
             cfg.sdf_height_weight * (z * hm.cell_size());
    }

    // One distance field per rest level, built on first use.
    const detail::SumTable& field_at(int level) {
      auto it = fields.find(level);
      if (it == fields.end()) {
        const auto dist = truncated_distance_field(hm, level, cfg.sdf_truncation_cells);
        it = fields.emplace(level, detail::SumTable(hm.nx(), hm.ny(), dist)).first;
      }
      return it->second;
    }

    const Heightmap& hm;
    const SolverConfig& cfg;
    std::map<int, detail::SumTable> fields;
  };
  std::unique_ptr<ItemScorer> make_scorer(const PackState& state) const override {
    return std::make_unique<Scorer>(state.heightmap(), config());
  }
};

}  // namespace

namespace detail {

std::unique_ptr<Solver> make_dbl(const SolverConfig& config) {
  return std::make_unique<DblSolver>(config);
}
std::unique_ptr<Solver> make_hm(const SolverConfig& config) {
  return std::make_unique<HmSolver>(config);
}
std::unique_ptr<Solver> make_sdf(const SolverConfig& config) {
  return std::make_unique<SdfSolver>(config);
}

}  // namespace detail

}  // namespace stackbench
