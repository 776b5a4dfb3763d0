#include <algorithm>
#include <set>
#include <tuple>

#include "grid_ops.hpp"

namespace stackbench {

PackeRuleSets packe_rule_positions(const PackState& state) {
  const Heightmap& hm = state.heightmap();
  const double cs = state.container().cell_size;
  PackeRuleSets rules;

  int lo_x = 0, lo_y = 0, hi_x = 0, hi_y = 0;
  bool found_empty = false;
  for (int y = 0; y < hm.ny(); ++y) {
    for (int x = 0; x < hm.nx(); ++x) {
      const int h = hm.at(x, y);
      if (!found_empty && h == 0) {
        rules.first_fit.emplace_back(x, y);
        found_empty = true;
      }
      if (h < hm.at(lo_x, lo_y)) std::tie(lo_x, lo_y) = std::tie(x, y);
      if (h > hm.at(hi_x, hi_y)) std::tie(hi_x, hi_y) = std::tie(x, y);
    }
  }
  rules.floor_building.emplace_back(lo_x, lo_y);
  rules.column_building.emplace_back(hi_x, hi_y);

  for (const Placement& p : state.placements()) {
    const CellBox b = p.cells(cs);
    rules.extreme_points.emplace_back(b.x + b.dx, b.y);
    rules.extreme_points.emplace_back(b.x, b.y + b.dy);
  }
  return rules;
}

std::vector<Placement> packe_candidates(const PackState& state, const ItemSpec& item,
                                        const SolverConfig& config) {
  const Heightmap& hm = state.heightmap();
  const Container& c = state.container();
  const PackeRuleSets rules = packe_rule_positions(state);

  std::vector<std::pair<int, int>> positions;
  for (const auto* set : {&rules.first_fit, &rules.floor_building, &rules.column_building,
                          &rules.extreme_points}) {
    positions.insert(positions.end(), set->begin(), set->end());
  }

  std::set<std::tuple<int, int, int, int, int>> seen;
  std::vector<Placement> out;
  for (const auto& [x, y] : positions) {
    for (const Orientation& o : orientations(config.orientations)) {
      const detail::CellDims d = detail::oriented_cells(item, o, c.cell_size);
      if (!hm.in_bounds(x, y, d.fx, d.fy)) continue;
      if (!seen.emplace(x, y, d.fx, d.fy, d.fz).second) continue;
      const int rest = footprint_height_cells(hm, x, y, d.fx, d.fy);
      Placement p = make_placement(item, o, x, y, rest, c.cell_size);
      if (check_feasible(hm, c, p, config.min_support)) out.push_back(std::move(p));
    }
  }
  return out;
}

namespace {

// PackE candidate generation with a DBL selection head in place of the
// learned policy.
class PackeHSolver final : public Solver {
 public:
  explicit PackeHSolver(const SolverConfig& config) : config_(config) {}
  std::string_view name() const override { return "packe_h"; }

  std::optional<Proposal> propose(const PackState& state, const ItemSpec& item,
                                  WorkMeter* meter) const override {
    const double cs = state.container().cell_size;
    const auto cands = packe_candidates(state, item, config_);
    std::optional<detail::RankedCandidate> best;
    const Placement* chosen = nullptr;
    for (const Placement& p : cands) {
      const CellBox b = p.cells(cs);
      const detail::RankedCandidate r{static_cast<double>(b.x) + b.y + 100.0 * b.z, b.y, b.x,
                                      p.orientation.index(), b.z};
      if (!best || r < *best) {
        best = r;
        chosen = &p;
      }
    }
    if (meter) meter->add(static_cast<std::uint64_t>(state.heightmap().cells().size()) +
                          cands.size());
    if (!chosen) return std::nullopt;
    return Proposal{*chosen, best->score, std::string(name())};
  }

 private:
  SolverConfig config_;
};

}  // namespace

namespace detail {

std::unique_ptr<Solver> make_packe_h(const SolverConfig& config) {
  return std::make_unique<PackeHSolver>(config);
}

}  // namespace detail

}  // namespace stackbench
