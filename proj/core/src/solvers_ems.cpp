// EMS-anchored solvers: candidates sit at the min corner of an empty maximal
// space that the oriented item fits inside.

#include <algorithm>
#include <cstdlib>
#include <set>
#include <tuple>

#include "grid_ops.hpp"

namespace stackbench {

std::int64_t surface_increase(const Heightmap& hm, int x, int y, int fx, int fy, int top) {
  std::int64_t delta = 0;
  auto inside = [&](int i, int j) { return i >= x && i < x + fx && j >= y && j < y + fy; };
  for (int j = y; j < y + fy; ++j) {
    for (int i = x; i < x + fx; ++i) {
      const int h = hm.at(i, j);
      if (h == 0) delta += 1;
      // Each neighbour pair once: look right and up only for interior pairs,
      // all four directions for pairs leaving the footprint.
      constexpr int kDirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (const auto& dir : kDirs) {
        const int ni = i + dir[0];
        const int nj = j + dir[1];
        if (ni < 0 || nj < 0 || ni >= hm.nx() || nj >= hm.ny()) continue;
        const int nh = hm.at(ni, nj);
        if (inside(ni, nj)) {
          if (dir[0] == 1 || dir[1] == 1) delta -= std::abs(h - nh);
        } else {
          delta += std::abs(top - nh) - std::abs(h - nh);
        }
      }
    }
  }
  return delta;
}

namespace {

using detail::CellDims;
using detail::RankedCandidate;

struct EmsCandidate {
  std::size_t ems_index;
  int orientation;
  int x;
  int y;
  int z;
  CellDims dims;
};

// Every (EMS, orientation) pair whose oriented box fits the space and passes
// check_feasible at the space's min corner, in EMS order then orientation order.
std::vector<EmsCandidate> ems_candidates(const PackState& state, const ItemSpec& item,
                                         OrientationSet set, double min_support,
                                         std::uint64_t& work) {
  const Heightmap& hm = state.heightmap();
  const double cs = state.container().cell_size;
  const int nz = state.container().nz();
  const auto& ems = state.ems();
  std::vector<EmsCandidate> out;
  for (std::size_t k = 0; k < ems.size(); ++k) {
    const CellBox& e = ems[k].box;
    for (const Orientation& o : orientations(set)) {
      const CellDims d = detail::oriented_cells(item, o, cs);
      if (!ems[k].fits(d.fx, d.fy, d.fz)) continue;
      const int rest = footprint_height_cells(hm, e.x, e.y, d.fx, d.fy);
      work += static_cast<std::uint64_t>(d.fx) * d.fy;
      if (rest + d.fz > nz) continue;
      if (support_ratio_cells(hm, e.x, e.y, d.fx, d.fy, rest) < min_support) continue;
      out.push_back({k, o.index(), e.x, e.y, rest, d});
    }
  }
  return out;
}

// Keeps the first candidate per (x, y, orientation).
std::vector<EmsCandidate> unique_positions(std::vector<EmsCandidate> in) {
  std::set<std::tuple<int, int, int>> seen;
  std::vector<EmsCandidate> out;
  for (const auto& c : in) {
    if (seen.emplace(c.x, c.y, c.orientation).second) out.push_back(c);
  }
  return out;
}

Proposal to_proposal(const ItemSpec& item, const EmsCandidate& c, double score, double cs,
                     std::string_view name) {
  return {make_placement(item, orientation_from_index(c.orientation), c.x, c.y, c.z, cs),
          score, std::string(name)};
}

// Lowest ranked() key wins; ranked() returns the solver's lower-is-better score.
template <typename ScoreFn>
std::optional<Proposal> pick_best(const ItemSpec& item, const std::vector<EmsCandidate>& cands,
                                  double cs, std::string_view name, ScoreFn&& score) {
  std::optional<RankedCandidate> best;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& c = cands[i];
    const RankedCandidate r{score(c), c.y, c.x, c.orientation, c.z};
    if (!best || r < *best) {
      best = r;
      best_index = i;
    }
  }
  if (!best) return std::nullopt;
  return to_proposal(item, cands[best_index], best->score, cs, name);
}

double total_volume(const std::vector<Ems>& ems) {
  double v = 0.0;
  for (const Ems& e : ems) v += static_cast<double>(e.box.volume());
  return v;
}

// Least surface area: minimal increase in exposed terrain area, all six
// orientations.
class LsahSolver final : public Solver {
 public:
  explicit LsahSolver(const SolverConfig& config) : config_(config) {}
  std::string_view name() const override { return "lsah"; }

  std::optional<Proposal> propose(const PackState& state, const ItemSpec& item,
                                  WorkMeter* meter) const override {
    std::uint64_t work = 0;
    const auto cands = unique_positions(
        ems_candidates(state, item, OrientationSet::all, config_.min_support, work));
    const Heightmap& hm = state.heightmap();
    auto best = pick_best(item, cands, state.container().cell_size, name(),
                          [&](const EmsCandidate& c) {
                            work += static_cast<std::uint64_t>(c.dims.fx) * c.dims.fy;
                            return static_cast<double>(surface_increase(
                                hm, c.x, c.y, c.dims.fx, c.dims.fy, c.z + c.dims.fz));
                          });
    if (meter) meter->add(work);
    return best;
  }

 private:
  SolverConfig config_;
};

// Maximize accessible convex space: the placement leaving the largest summed
// EMS volume (voxels). Score is the negated volume.
class MacsSolver final : public Solver {
 public:
  explicit MacsSolver(const SolverConfig& config) : config_(config) {}
  std::string_view name() const override { return "macs"; }

  std::optional<Proposal> propose(const PackState& state, const ItemSpec& item,
                                  WorkMeter* meter) const override {
    std::uint64_t work = 0;
    const auto cands = unique_positions(
        ems_candidates(state, item, config_.orientations, config_.min_support, work));
    const auto& ems = state.ems();
    const int nz = state.container().nz();
    auto best = pick_best(item, cands, state.container().cell_size, name(),
                          [&](const EmsCandidate& c) {
                            const auto after = update_ems(ems, c.x, c.y, c.dims.fx, c.dims.fy,
                                                          c.z + c.dims.fz, nz);
                            work += ems.size() + after.size();
                            return -total_volume(after);
                          });
    if (meter) meter->add(work);
    return best;
  }

 private:
  SolverConfig config_;
};

// Online bin-packing heuristic: spaces by depth (z, then y, then x), first
// feasible fit. Score is the candidate's rank.
class OnlineBphSolver final : public Solver {
 public:
  explicit OnlineBphSolver(const SolverConfig& config) : config_(config) {}
  std::string_view name() const override { return "onlinebph"; }

  std::optional<Proposal> propose(const PackState& state, const ItemSpec& item,
                                  WorkMeter* meter) const override {
    const Heightmap& hm = state.heightmap();
    const double cs = state.container().cell_size;
    const int nz = state.container().nz();
    std::vector<Ems> ems = state.ems();
    std::stable_sort(ems.begin(), ems.end(), [](const Ems& a, const Ems& b) {
      return std::tie(a.box.z, a.box.y, a.box.x) < std::tie(b.box.z, b.box.y, b.box.x);
    });
    std::uint64_t work = 0;
    std::optional<Proposal> out;
    for (std::size_t k = 0; k < ems.size() && !out; ++k) {
      const CellBox& e = ems[k].box;
      for (const Orientation& o : orientations(config_.orientations)) {
        const CellDims d = detail::oriented_cells(item, o, cs);
        if (!ems[k].fits(d.fx, d.fy, d.fz)) continue;
        work += static_cast<std::uint64_t>(d.fx) * d.fy;
        const int rest = footprint_height_cells(hm, e.x, e.y, d.fx, d.fy);
        if (rest + d.fz > nz) continue;
        if (support_ratio_cells(hm, e.x, e.y, d.fx, d.fy, rest) < config_.min_support) continue;
        out = Proposal{make_placement(item, o, e.x, e.y, rest, cs), static_cast<double>(k),
                       std::string(name())};
        break;
      }
    }
    if (meter) meter->add(work);
    return out;
  }

 private:
  SolverConfig config_;
};

// Bin regularity: fill ratio of the chosen space plus λ × the number of spaces
// left afterwards that could still take the same item. Score is negated.
class BrSolver final : public Solver {
 public:
  explicit BrSolver(const SolverConfig& config) : config_(config) {}
  std::string_view name() const override { return "br"; }

  std::optional<Proposal> propose(const PackState& state, const ItemSpec& item,
                                  WorkMeter* meter) const override {
    std::uint64_t work = 0;
    const auto cands =
        ems_candidates(state, item, config_.orientations, config_.min_support, work);
    const auto& ems = state.ems();
    const double cs = state.container().cell_size;
    const int nz = state.container().nz();

    std::vector<CellDims> reference;
    for (const Orientation& o : orientations(config_.orientations)) {
      reference.push_back(detail::oriented_cells(item, o, cs));
    }
    auto best = pick_best(item, cands, cs, name(), [&](const EmsCandidate& c) {
      const CellBox& space = ems[c.ems_index].box;
      const double fill = static_cast<double>(c.dims.fx) * c.dims.fy * c.dims.fz /
                          static_cast<double>(space.volume());
      const auto after = update_ems(ems, c.x, c.y, c.dims.fx, c.dims.fy, c.z + c.dims.fz, nz);
      int admits = 0;
      for (const Ems& e : after) {
        const bool any = std::any_of(reference.begin(), reference.end(), [&](const CellDims& d) {
          return e.fits(d.fx, d.fy, d.fz);
        });
        admits += any ? 1 : 0;
      }
      work += ems.size() + after.size();
      return -(config_.br_fill_weight * fill + config_.br_lambda * admits);
    });
    if (meter) meter->add(work);
    return best;
  }

 private:
  SolverConfig config_;
};

}  // namespace

namespace detail {

std::unique_ptr<Solver> make_lsah(const SolverConfig& config) {
  return std::make_unique<LsahSolver>(config);
}
std::unique_ptr<Solver> make_macs(const SolverConfig& config) {
  return std::make_unique<MacsSolver>(config);
}
std::unique_ptr<Solver> make_onlinebph(const SolverConfig& config) {
  return std::make_unique<OnlineBphSolver>(config);
}
std::unique_ptr<Solver> make_br(const SolverConfig& config) {
  return std::make_unique<BrSolver>(config);
}

}  // namespace detail

}  // namespace stackbench
