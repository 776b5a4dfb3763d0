#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace stackbench;

namespace {

constexpr double kCs = 0.1;

Container grid_container(int nx, int ny, int nz) {
  return Container{{nx * kCs, ny * kCs, nz * kCs}, 0.05, kCs};
}

ItemSpec item(double l, double w, double h, const std::string& id = "it") { return {id, {l, w, h}}; }

CellBox cells_of(const Proposal& p) { return p.placement.cells(kCs); }

void expect_matches(const std::optional<Proposal>& got, const std::optional<oracle::Choice>& want,
                    const std::string& ctx) {
  ASSERT_EQ(got.has_value(), want.has_value()) << ctx;
  if (!got) return;
  const CellBox b = cells_of(*got);
  EXPECT_EQ(b.x, want->x) << ctx;
  EXPECT_EQ(b.y, want->y) << ctx;
  EXPECT_EQ(b.z, want->z) << ctx;
  EXPECT_EQ(got->placement.orientation.index(), want->o) << ctx;
  EXPECT_EQ(got->score, want->score) << ctx;
}

ItemSpec random_item(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> d(0.05, 0.45);
  return item(d(rng), d(rng), d(rng), "r" + std::to_string(k));
}

}  // namespace

TEST(Registry, CanonicalNames) {
  const std::vector<std::string_view> want{"dbl", "hm", "lsah", "macs", "onlinebph", "br", "sdf", "packe_h"};
  const auto names = solver_names();
  EXPECT_EQ(std::vector<std::string_view>(names.begin(), names.end()), want);
  for (auto n : names) EXPECT_EQ(make_solver(n)->name(), n);
  EXPECT_THROW(make_solver("pct"), ConfigError);
}

TEST(AllSolvers, EmptyContainerPicksOrigin) {
  const PackState st(grid_container(6, 6, 6));
  for (auto n : solver_names()) {
    const auto p = make_solver(n)->propose(st, item(0.2, 0.3, 0.2));
    ASSERT_TRUE(p) << n;
    const CellBox b = cells_of(*p);
    EXPECT_EQ(std::tie(b.x, b.y, b.z), std::make_tuple(0, 0, 0)) << n;
  }
}

TEST(AllSolvers, OversizedItemIsInfeasible) {
  const PackState st(grid_container(4, 4, 4));
  for (auto n : solver_names()) {
    EXPECT_FALSE(make_solver(n)->propose(st, item(0.5, 0.5, 0.5))) << n;
    // Monotone termination: asking again gives the same answer.
    EXPECT_FALSE(make_solver(n)->propose(st, item(0.5, 0.5, 0.5))) << n;
  }
}

TEST(AllSolvers, ProposalsFeasibleAndDeterministic) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 40; ++t) {
    const PackState st = oracle::random_state(rng, 8, 8, 10, kCs, 6);
    const ItemSpec it = random_item(rng, t);
    for (auto n : solver_names()) {
      const auto s = make_solver(n);
      const auto a = s->propose(st, it);
      const auto b = s->propose(st, it);
      ASSERT_EQ(a.has_value(), b.has_value()) << n;
      if (!a) continue;
      EXPECT_TRUE(check_feasible(st.heightmap(), st.container(), a->placement, kDefaultMinSupport)) << n;
      EXPECT_EQ(a->placement.min_corner, b->placement.min_corner) << n;
      EXPECT_EQ(a->placement.orientation, b->placement.orientation) << n;
      EXPECT_EQ(a->score, b->score) << n;
      EXPECT_EQ(a->solver_name, n);
      // Drop placement: z equals the rest height.
      const CellBox c = cells_of(*a);
      EXPECT_EQ(c.z, footprint_height_cells(st.heightmap(), c.x, c.y, c.dx, c.dy)) << n;
    }
  }
}

TEST(AllSolvers, EmsSolversAnchorAtEmsCorners) {
  std::mt19937_64 rng(78);
  for (int t = 0; t < 40; ++t) {
    const PackState st = oracle::random_state(rng, 8, 8, 10, kCs, 6);
    const ItemSpec it = random_item(rng, t);
    const auto ems = compute_ems(st.heightmap(), st.container());
    for (auto n : {"lsah", "macs", "onlinebph", "br"}) {
      const auto p = make_solver(n)->propose(st, it);
      if (!p) continue;
      const CellBox b = cells_of(*p);
      EXPECT_TRUE(std::any_of(ems.begin(), ems.end(), [&](const Ems& e) {
        // The item drops to its rest height, never above the space it came from.
        return e.box.x == b.x && e.box.y == b.y && b.z <= e.box.z && e.fits(b.dx, b.dy, b.dz);
      })) << n;
    }
  }
}

TEST(Dbl, CornerBlockMatchesExhaustiveScan) {
  const Container c = grid_container(6, 6, 6);
  Heightmap hm = Heightmap::for_container(c);
  raise_footprint(hm, 0, 0, 2, 2, 2);
  const PackState st(c, hm);
  const ItemSpec it = item(0.2, 0.2, 0.2);
  const auto p = make_solver("dbl")->propose(st, it);
  expect_matches(p, oracle::grid_argmin(oracle::Rule::dbl, hm, c.nz(), it.dims, 2), "corner");
  EXPECT_EQ(cells_of(*p).x + cells_of(*p).y, 2);
}

TEST(Hm, PocketBeatsFlatGround) {
  const Container c = grid_container(6, 6, 8);
  Heightmap hm = Heightmap::for_container(c);
  raise_footprint(hm, 0, 0, 6, 6, 2);
  raise_footprint(hm, 3, 3, 2, 2, 0);
  const PackState st(c, hm);
  const ItemSpec it = item(0.2, 0.2, 0.2);
  const auto p = make_solver("hm")->propose(st, it);
  ASSERT_TRUE(p);
  EXPECT_EQ(cells_of(*p), (CellBox{3, 3, 0, 2, 2, 2}));
  expect_matches(p, oracle::grid_argmin(oracle::Rule::hm, hm, c.nz(), it.dims, 2), "pocket");
}

TEST(Hm, EqualScoresBreakTiesByRowThenColumn) {
  // Two pockets with equal x + y: (1, 3) and (3, 1). Lower y wins.
  const Container c = grid_container(6, 6, 8);
  Heightmap hm = Heightmap::for_container(c);
  raise_footprint(hm, 0, 0, 6, 6, 3);
  hm.set(1, 3, 0);
  hm.set(3, 1, 0);
  const PackState st(c, hm);
  const auto p = make_solver("hm")->propose(st, item(0.1, 0.1, 0.1));
  ASSERT_TRUE(p);
  EXPECT_EQ(cells_of(*p).x, 3);
  EXPECT_EQ(cells_of(*p).y, 1);
}

TEST(Sdf, FlushBeatsIsolatedAtEqualHeight) {
  const Container c = grid_container(8, 8, 8);
  Heightmap hm = Heightmap::for_container(c);
  raise_footprint(hm, 0, 3, 3, 2, 4);
  const int level = 0;
  const auto field = truncated_distance_field(hm, level, 5);
  const auto want = oracle::distance_field(hm, level, 5);
  EXPECT_EQ(field, want);
  // Candidate flush against the block versus one in the open at z = 0.
  auto mean = [&](int x, int y) {
    double s = 0;
    for (int j = y; j < y + 2; ++j)
      for (int i = x; i < x + 2; ++i) s += field[j * 8 + i];
    return s / 4;
  };
  EXPECT_LT(mean(3, 3), mean(4, 3));
  const auto p = make_solver("sdf")->propose(PackState(c, hm), item(0.2, 0.2, 0.2));
  expect_matches(p, oracle::grid_argmin(oracle::Rule::sdf, hm, c.nz(), {0.2, 0.2, 0.2}, 2), "sdf");
}

TEST(Sdf, DistanceFieldMatchesOracle) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 60; ++t) {
    const int nx = 1 + static_cast<int>(rng() % 9), ny = 1 + static_cast<int>(rng() % 9);
    const PackState st = oracle::random_state(rng, nx, ny, 8, kCs, static_cast<int>(rng() % 6));
    const int level = static_cast<int>(rng() % 5);
    const int tau = 1 + static_cast<int>(rng() % 6);
    EXPECT_EQ(truncated_distance_field(st.heightmap(), level, tau),
              oracle::distance_field(st.heightmap(), level, tau));
  }
}

class GridArgmin : public ::testing::TestWithParam<std::tuple<oracle::Rule, OrientationSet>> {};

TEST_P(GridArgmin, EqualsFullEnumeration) {
  const auto [rule, set] = GetParam();
  const std::string name = rule == oracle::Rule::dbl ? "dbl" : rule == oracle::Rule::hm ? "hm" : "sdf";
  SolverConfig cfg;
  cfg.orientations = set;
  const auto solver = make_solver(name, cfg);
  std::mt19937_64 rng(1000 + static_cast<int>(rule) * 10 + static_cast<int>(set));
  for (int t = 0; t < 60; ++t) {
    const int nx = 2 + static_cast<int>(rng() % 7), ny = 2 + static_cast<int>(rng() % 7);
    const int nz = 3 + static_cast<int>(rng() % 8);
    const PackState st = oracle::random_state(rng, nx, ny, nz, kCs, static_cast<int>(rng() % 8));
    const ItemSpec it = random_item(rng, t);
    const int n_orient = set == OrientationSet::all ? 6 : 2;
    expect_matches(solver->propose(st, it), oracle::grid_argmin(rule, st.heightmap(), nz, it.dims, n_orient, cfg),
                   name + " trial " + std::to_string(t));
  }
}

TEST(Hm, VolumeIncreaseObjectiveMatchesOracle) {
  SolverConfig cfg;
  cfg.hm_objective = HmObjective::volume_increase;
  for (OrientationSet set : {OrientationSet::yaw, OrientationSet::all}) {
    cfg.orientations = set;
    const auto solver = make_solver("hm", cfg);
    std::mt19937_64 rng(77 + static_cast<int>(set));
    for (int t = 0; t < 60; ++t) {
      const int nx = 2 + static_cast<int>(rng() % 7), ny = 2 + static_cast<int>(rng() % 7);
      const int nz = 3 + static_cast<int>(rng() % 8);
      const PackState st = oracle::random_state(rng, nx, ny, nz, kCs, static_cast<int>(rng() % 8));
      const ItemSpec it = random_item(rng, t);
      expect_matches(solver->propose(st, it),
                     oracle::grid_argmin(oracle::Rule::hm_volume, st.heightmap(), nz, it.dims,
                                         set == OrientationSet::all ? 6 : 2, cfg),
                     "hm volume trial " + std::to_string(t));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Solvers, GridArgmin,
                         ::testing::Combine(::testing::Values(oracle::Rule::dbl, oracle::Rule::hm, oracle::Rule::sdf),
                                            ::testing::Values(OrientationSet::yaw, OrientationSet::all)));

TEST(Lsah, SurfaceIncreaseMatchesVoxelFaces) {
  std::mt19937_64 rng(55);
  for (int t = 0; t < 200; ++t) {
    const int nx = 2 + static_cast<int>(rng() % 6), ny = 2 + static_cast<int>(rng() % 6);
    const int nz = 10;
    const PackState st = oracle::random_state(rng, nx, ny, nz, kCs, static_cast<int>(rng() % 6));
    Heightmap hm = st.heightmap();
    const int fx = 1 + static_cast<int>(rng() % nx), fy = 1 + static_cast<int>(rng() % ny);
    const int x = static_cast<int>(rng() % (nx - fx + 1)), y = static_cast<int>(rng() % (ny - fy + 1));
    const int rest = oracle::rest_height(hm, x, y, fx, fy);
    const int top = rest + 1 + static_cast<int>(rng() % 3);
    const auto before = oracle::exposed_faces(oracle::Voxels::from_heightmap(hm, 20));
    const auto got = surface_increase(hm, x, y, fx, fy, top);
    raise_footprint(hm, x, y, fx, fy, top);
    const auto after = oracle::exposed_faces(oracle::Voxels::from_heightmap(hm, 20));
    EXPECT_EQ(got, after - before) << t;
  }
}

TEST(Lsah, EmptyContainerPicksMinimalExposedOrientation) {
  // Narrow container: orientations spanning its full width hide a side face.
  const int nx = 3, ny = 8, nz = 8;
  const PackState st(grid_container(nx, ny, nz));
  const ItemSpec it = item(0.2, 0.3, 0.5);
  // Closed form at the origin corner: the top plus the inner side faces that
  // do not touch a wall.
  int best = -1;
  long best_area = 0;
  for (int o = 0; o < 6; ++o) {
    const auto [fx, fy, fz] = oracle::cell_dims(it.dims, o, kCs);
    if (fx > nx || fy > ny || fz > nz) continue;
    const long area = static_cast<long>(fx) * fy + (fx < nx ? static_cast<long>(fy) * fz : 0) +
                      (fy < ny ? static_cast<long>(fx) * fz : 0);
    if (best < 0 || area < best_area) {
      best = o;
      best_area = area;
    }
  }
  const auto p = make_solver("lsah")->propose(st, it);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->placement.orientation.index(), best);
  EXPECT_EQ(p->score, static_cast<double>(best_area));
  EXPECT_EQ(cells_of(*p).x, 0);
  EXPECT_EQ(cells_of(*p).y, 0);
}

TEST(Lsah, ExactFitOrientationChosen) {
  // A 2 × 3 × 2 slot: only the orientation matching it fits inside a space.
  const Container c = grid_container(4, 3, 4);
  Heightmap hm = Heightmap::for_container(c);
  raise_footprint(hm, 2, 0, 2, 3, 4);
  const PackState st(c, hm);
  const auto p = make_solver("lsah")->propose(st, item(0.3, 0.2, 0.4));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->placement.cells(kCs), (CellBox{0, 0, 0, 2, 3, 4}));
}

TEST(Macs, CubeOnEmptyFloorTieBreaksToOrigin) {
  const PackState st(grid_container(6, 6, 6));
  const auto p = make_solver("macs")->propose(st, item(0.2, 0.2, 0.2));
  ASSERT_TRUE(p);
  EXPECT_EQ(cells_of(*p), (CellBox{0, 0, 0, 2, 2, 2}));
}

TEST(Macs, ArgmaxOfRemainingVolumeMatchesSimulation) {
  std::mt19937_64 rng(66);
  for (int t = 0; t < 30; ++t) {
    const PackState st = oracle::random_state(rng, 6, 6, 6, kCs, 3);
    const ItemSpec it = random_item(rng, t);
    const auto p = make_solver("macs")->propose(st, it);
    // Oracle: every EMS corner and orientation, simulated through the voxel oracle.
    const auto ems = oracle::ems_oracle(st.heightmap(), 6);
    std::optional<std::tuple<double, int, int, int>> best;
    for (const CellBox& e : ems)
      for (int o = 0; o < 2; ++o) {
        const auto [fx, fy, fz] = oracle::cell_dims(it.dims, o, kCs);
        if (fx > e.dx || fy > e.dy || fz > e.dz) continue;
        const int rest = oracle::rest_height(st.heightmap(), e.x, e.y, fx, fy);
        if (rest + fz > 6 || oracle::support(st.heightmap(), e.x, e.y, fx, fy, rest) < 0.6) continue;
        Heightmap after = st.heightmap();
        raise_footprint(after, e.x, e.y, fx, fy, rest + fz);
        double vol = 0;
        for (const CellBox& r : oracle::ems_oracle(after, 6)) vol += static_cast<double>(r.volume());
        const auto key = std::make_tuple(-vol, e.y, e.x, o);
        if (!best || key < *best) best = key;
      }
    ASSERT_EQ(p.has_value(), best.has_value()) << t;
    if (!p) continue;
    EXPECT_EQ(p->score, std::get<0>(*best)) << t;
    EXPECT_EQ(cells_of(*p).y, std::get<1>(*best)) << t;
    EXPECT_EQ(cells_of(*p).x, std::get<2>(*best)) << t;
    EXPECT_EQ(p->placement.orientation.index(), std::get<3>(*best)) << t;
  }
}

TEST(OnlineBph, LowestSpaceFirst) {
  const Container c = grid_container(6, 6, 8);
  Heightmap hm = Heightmap::for_container(c);
  raise_footprint(hm, 0, 0, 3, 6, 3);
  const PackState st(c, hm);
  const auto low = make_solver("onlinebph")->propose(st, item(0.2, 0.2, 0.2));
  ASSERT_TRUE(low);
  EXPECT_EQ(cells_of(*low), (CellBox{3, 0, 0, 2, 2, 2}));
  // Too wide for the floor slot: only the raised space takes it.
  const auto high = make_solver("onlinebph")->propose(st, item(0.4, 0.4, 0.2));
  ASSERT_TRUE(high);
  EXPECT_EQ(cells_of(*high).z, 3);
  EXPECT_EQ(cells_of(*high).x, 0);
}

TEST(OnlineBph, FirstFeasibleInDepthOrder) {
  std::mt19937_64 rng(91);
  for (int t = 0; t < 40; ++t) {
    const PackState st = oracle::random_state(rng, 7, 7, 8, kCs, 5);
    const ItemSpec it = random_item(rng, t);
    const auto found = oracle::ems_oracle(st.heightmap(), 8);
    std::vector<CellBox> ems(found.begin(), found.end());
    // Depth order; spaces sharing a corner follow the documented EMS order.
    std::sort(ems.begin(), ems.end(), [](const CellBox& a, const CellBox& b) {
      return std::tie(a.z, a.y, a.x, a.dz, a.dy, a.dx) < std::tie(b.z, b.y, b.x, b.dz, b.dy, b.dx);
    });
    std::optional<std::tuple<int, int, int, int>> want;
    for (const CellBox& e : ems) {
      for (int o = 0; o < 2 && !want; ++o) {
        const auto [fx, fy, fz] = oracle::cell_dims(it.dims, o, kCs);
        if (fx > e.dx || fy > e.dy || fz > e.dz) continue;
        const int rest = oracle::rest_height(st.heightmap(), e.x, e.y, fx, fy);
        if (rest + fz > 8 || oracle::support(st.heightmap(), e.x, e.y, fx, fy, rest) < 0.6) continue;
        want = std::make_tuple(e.x, e.y, rest, o);
      }
      if (want) break;
    }
    const auto p = make_solver("onlinebph")->propose(st, it);
    ASSERT_EQ(p.has_value(), want.has_value()) << t;
    if (!p) continue;
    const CellBox b = cells_of(*p);
    EXPECT_EQ(std::make_tuple(b.x, b.y, b.z, p->placement.orientation.index()), *want) << t;
  }
}

TEST(Br, ExactFitDominates) {
  // Floor slot of exactly 2 × 2 × 3 next to a wall of height 3; the container
  // lid sits at 3 so the slot is an EMS matching the item.
  const Container c = grid_container(5, 2, 3);
  Heightmap hm = Heightmap::for_container(c);
  raise_footprint(hm, 2, 0, 3, 2, 1);
  const PackState st(c, hm);
  const auto p = make_solver("br")->propose(st, item(0.2, 0.2, 0.3));
  ASSERT_TRUE(p);
  EXPECT_EQ(cells_of(*p), (CellBox{0, 0, 0, 2, 2, 3}));
}

TEST(Br, ScoreMatchesExhaustiveScoring) {
  std::mt19937_64 rng(92);
  for (int t = 0; t < 30; ++t) {
    const PackState st = oracle::random_state(rng, 6, 6, 6, kCs, 3);
    const ItemSpec it = random_item(rng, t);
    const auto ems = oracle::ems_oracle(st.heightmap(), 6);
    std::optional<std::tuple<double, int, int, int>> best;
    for (const CellBox& e : ems)
      for (int o = 0; o < 2; ++o) {
        const auto [fx, fy, fz] = oracle::cell_dims(it.dims, o, kCs);
        if (fx > e.dx || fy > e.dy || fz > e.dz) continue;
        const int rest = oracle::rest_height(st.heightmap(), e.x, e.y, fx, fy);
        if (rest + fz > 6 || oracle::support(st.heightmap(), e.x, e.y, fx, fy, rest) < 0.6) continue;
        Heightmap after = st.heightmap();
        raise_footprint(after, e.x, e.y, fx, fy, rest + fz);
        int admits = 0;
        for (const CellBox& r : oracle::ems_oracle(after, 6)) {
          bool any = false;
          for (int q = 0; q < 2; ++q) {
            const auto [gx, gy, gz] = oracle::cell_dims(it.dims, q, kCs);
            any = any || (gx <= r.dx && gy <= r.dy && gz <= r.dz);
          }
          admits += any;
        }
        const double fill = static_cast<double>(fx) * fy * fz / static_cast<double>(e.volume());
        const auto key = std::make_tuple(-(fill + admits), e.y, e.x, o);
        if (!best || key < *best) best = key;
      }
    const auto p = make_solver("br")->propose(st, it);
    ASSERT_EQ(p.has_value(), best.has_value()) << t;
    if (!p) continue;
    EXPECT_EQ(p->score, std::get<0>(*best)) << t;
    EXPECT_EQ(std::make_tuple(cells_of(*p).y, cells_of(*p).x, p->placement.orientation.index()),
              std::make_tuple(std::get<1>(*best), std::get<2>(*best), std::get<3>(*best)))
        << t;
  }
}

TEST(PackE, EmptyContainerSingleCandidate) {
  const PackState st(grid_container(6, 6, 6));
  const auto cands = packe_candidates(st, item(0.2, 0.2, 0.2));
  ASSERT_EQ(cands.size(), 1u);
  EXPECT_EQ(cands[0].cells(kCs), (CellBox{0, 0, 0, 2, 2, 2}));
}

TEST(PackE, OneBoxAtOriginHandEnumerated) {
  const Container c = grid_container(6, 6, 6);
  PackState st(c);
  st.commit(make_placement(item(0.2, 0.3, 0.2, "a"), Orientation{}, 0, 0, 0, kCs));
  const auto rules = packe_rule_positions(st);
  // First empty cell in row-major order is (2, 0); lowest is also (2, 0)
  // (first minimum); highest is (0, 0); extreme points are the box's +x and
  // +y corners.
  EXPECT_EQ(rules.first_fit, (std::vector<std::pair<int, int>>{{2, 0}}));
  EXPECT_EQ(rules.floor_building, (std::vector<std::pair<int, int>>{{2, 0}}));
  EXPECT_EQ(rules.column_building, (std::vector<std::pair<int, int>>{{0, 0}}));
  EXPECT_EQ(rules.extreme_points, (std::vector<std::pair<int, int>>{{2, 0}, {0, 3}}));

  // A 0.2 × 0.1 × 0.1 item, yaw set: candidates after filtering.
  //  (2,0): o0 (2x1) floor, o1 (1x2) floor.
  //  (0,0): o0 (2x1) on the box, full support; o1 (1x2) on the box.
  //  (0,3): o0 and o1 on the floor.
  const auto cands = packe_candidates(st, item(0.2, 0.1, 0.1, "b"));
  std::set<std::tuple<int, int, int, int>> got;
  for (const auto& p : cands) {
    const CellBox b = p.cells(kCs);
    got.emplace(b.x, b.y, b.z, p.orientation.index());
  }
  const std::set<std::tuple<int, int, int, int>> want{
      {2, 0, 0, 0}, {2, 0, 0, 1}, {0, 0, 2, 0}, {0, 0, 2, 1}, {0, 3, 0, 0}, {0, 3, 0, 1}};
  EXPECT_EQ(got, want);

  // A 0.3 × 0.3 item only overhangs from (0, 0): support 6/9 passes.
  // From (2,0) and (0,3) it sits on the floor.
  const auto big = packe_candidates(st, item(0.3, 0.3, 0.1, "c"));
  std::set<std::tuple<int, int, int>> big_got;
  for (const auto& p : big) {
    const CellBox b = p.cells(kCs);
    big_got.emplace(b.x, b.y, b.z);
  }
  EXPECT_EQ(big_got, (std::set<std::tuple<int, int, int>>{{2, 0, 0}, {0, 0, 2}, {0, 3, 0}}));
  // Square footprint: the rotated copy duplicates cell dims and is dropped.
  EXPECT_EQ(big.size(), 3u);
}

TEST(PackE, SaturatedContainerHasNoCandidates) {
  const Container c = grid_container(4, 4, 4);
  Heightmap hm = Heightmap::for_container(c);
  raise_footprint(hm, 0, 0, 4, 4, 4);
  const PackState st(c, hm);
  EXPECT_TRUE(packe_candidates(st, item(0.1, 0.1, 0.1)).empty());
  EXPECT_FALSE(make_solver("packe_h")->propose(st, item(0.1, 0.1, 0.1)));
}

TEST(PackE, CandidatesSatisfyARule) {
  std::mt19937_64 rng(93);
  for (int t = 0; t < 40; ++t) {
    const int nx = 8, ny = 8, nz = 10;
    const Container c = grid_container(nx, ny, nz);
    PackState st(c);
    const auto dbl = make_solver("dbl");
    for (int k = 0; k < 1 + static_cast<int>(rng() % 6); ++k) {
      const auto p = dbl->propose(st, random_item(rng, k));
      if (p) st.commit(p->placement);
    }
    const auto rules = packe_rule_positions(st);
    // Rule oracle.
    const Heightmap& hm = st.heightmap();
    std::optional<std::pair<int, int>> first, lo, hi;
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) {
        if (!first && hm.at(x, y) == 0) first = {x, y};
        if (!lo || hm.at(x, y) < hm.at(lo->first, lo->second)) lo = {x, y};
        if (!hi || hm.at(x, y) > hm.at(hi->first, hi->second)) hi = {x, y};
      }
    EXPECT_EQ(rules.first_fit.empty(), !first.has_value());
    if (first) EXPECT_EQ(rules.first_fit.front(), *first);
    EXPECT_EQ(rules.floor_building.front(), *lo);
    EXPECT_EQ(rules.column_building.front(), *hi);
    EXPECT_EQ(rules.extreme_points.size(), 2 * st.placements().size());

    std::set<std::pair<int, int>> allowed;
    for (const auto* r : {&rules.first_fit, &rules.floor_building, &rules.column_building, &rules.extreme_points})
      allowed.insert(r->begin(), r->end());
    const ItemSpec it = random_item(rng, 99);
    for (const Placement& p : packe_candidates(st, it)) {
      const CellBox b = p.cells(kCs);
      EXPECT_TRUE(allowed.count({b.x, b.y}));
      EXPECT_TRUE(check_feasible(hm, c, p, kDefaultMinSupport));
    }
  }
}

TEST(PackeH, DblHeadOverCandidates) {
  // A full-height box at the origin leaves floor candidates (2,0) and (0,3);
  // at equal z the smaller x + y wins.
  const Container c = grid_container(6, 6, 6);
  PackState st(c);
  st.commit(make_placement(item(0.2, 0.3, 0.6, "a"), Orientation{}, 0, 0, 0, kCs));
  const auto p = make_solver("packe_h")->propose(st, item(0.2, 0.2, 0.2));
  ASSERT_TRUE(p);
  EXPECT_EQ(cells_of(*p), (CellBox{2, 0, 0, 2, 2, 2}));
  EXPECT_EQ(p->score, 2.0);
}
