#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace stackbench;

namespace {

std::set<CellBox> as_set(const std::vector<Ems>& ems) {
  std::set<CellBox> out;
  for (const Ems& e : ems) out.insert(e.box);
  return out;
}

}  // namespace

TEST(ComputeEms, EmptyContainerIsOneBox) {
  const Container c{{0.4, 0.4, 0.6}, 0.05, 0.1};
  const auto ems = compute_ems(Heightmap::for_container(c), c);
  ASSERT_EQ(ems.size(), 1u);
  EXPECT_EQ(ems[0].box, (CellBox{0, 0, 0, 4, 4, 6}));
  EXPECT_EQ(ems[0].dims(0.1).x, 0.4);
}

TEST(ComputeEms, CornerBoxMatchesOracle) {
  const Container c{{0.4, 0.4, 0.6}, 0.05, 0.1};
  Heightmap hm = Heightmap::for_container(c);
  raise_footprint(hm, 0, 0, 2, 2, 3);
  const auto got = as_set(compute_ems(hm, c));
  EXPECT_EQ(got, oracle::ems_oracle(hm, c.nz()));
  EXPECT_EQ(got.size(), 3u);
}

TEST(ComputeEms, UniformLayerIsOneBox) {
  const Container c{{0.5, 0.3, 1.0}, 0.05, 0.1};
  Heightmap hm = Heightmap::for_container(c);
  raise_footprint(hm, 0, 0, 5, 3, 4);
  const auto ems = compute_ems(hm, c);
  ASSERT_EQ(ems.size(), 1u);
  EXPECT_EQ(ems[0].box, (CellBox{0, 0, 4, 5, 3, 6}));
}

TEST(ComputeEms, FullContainerHasNoSpace) {
  const Container c{{0.3, 0.3, 0.3}, 0.05, 0.1};
  Heightmap hm = Heightmap::for_container(c);
  raise_footprint(hm, 0, 0, 3, 3, 3);
  EXPECT_TRUE(compute_ems(hm, c).empty());
}

TEST(ComputeEms, RandomTerrainsMatchOracle) {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 150; ++t) {
    const int nx = 1 + static_cast<int>(rng() % 6), ny = 1 + static_cast<int>(rng() % 6);
    const int nz = 1 + static_cast<int>(rng() % 6);
    const PackState s = oracle::random_state(rng, nx, ny, nz, 0.1, static_cast<int>(rng() % 8));
    EXPECT_EQ(as_set(compute_ems(s.heightmap(), s.container())), oracle::ems_oracle(s.heightmap(), nz))
        << "trial " << t;
  }
}

TEST(ComputeEms, SoundMaximalAndComplete) {
  std::mt19937_64 rng(202);
  for (int t = 0; t < 60; ++t) {
    const int nx = 2 + static_cast<int>(rng() % 7), ny = 2 + static_cast<int>(rng() % 7);
    const int nz = 2 + static_cast<int>(rng() % 7);
    const PackState s = oracle::random_state(rng, nx, ny, nz, 0.1, 2 + static_cast<int>(rng() % 10));
    const auto& hm = s.heightmap();
    const auto ems = compute_ems(hm, s.container());
    // Soundness: the full EMS box is feasible bounds- and height-wise.
    for (const Ems& e : ems) {
      ASSERT_GT(e.box.volume(), 0);
      EXPECT_TRUE(hm.in_bounds(e.box.x, e.box.y, e.box.dx, e.box.dy));
      EXPECT_LE(footprint_height_cells(hm, e.box.x, e.box.y, e.box.dx, e.box.dy), e.box.z);
      EXPECT_LE(e.box.z + e.box.dz, nz);
    }
    // Maximality: pairwise.
    for (std::size_t i = 0; i < ems.size(); ++i)
      for (std::size_t j = 0; j < ems.size(); ++j)
        if (i != j) EXPECT_FALSE(ems[i].box.contains(ems[j].box));
    // Completeness: every free voxel is inside some EMS.
    const auto vox = oracle::Voxels::from_heightmap(hm, nz);
    for (int z = 0; z < nz; ++z)
      for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) {
          if (vox.solid(x, y, z)) continue;
          const CellBox v{x, y, z, 1, 1, 1};
          EXPECT_TRUE(std::any_of(ems.begin(), ems.end(), [&](const Ems& e) { return e.box.contains(v); }));
        }
  }
}

TEST(UpdateEms, EqualsRecomputation) {
  std::mt19937_64 rng(303);
  for (int t = 0; t < 300; ++t) {
    const int nx = 2 + static_cast<int>(rng() % 9), ny = 2 + static_cast<int>(rng() % 9);
    const int nz = 2 + static_cast<int>(rng() % 8);
    const PackState s = oracle::random_state(rng, nx, ny, nz, 0.1, static_cast<int>(rng() % 10));
    Heightmap hm = s.heightmap();
    const auto before = compute_ems(hm, s.container());
    const int fx = 1 + static_cast<int>(rng() % nx), fy = 1 + static_cast<int>(rng() % ny);
    const int x = static_cast<int>(rng() % (nx - fx + 1)), y = static_cast<int>(rng() % (ny - fy + 1));
    const int rest = footprint_height_cells(hm, x, y, fx, fy);
    if (rest >= nz) continue;
    const int top = rest + 1 + static_cast<int>(rng() % (nz - rest));
    raise_footprint(hm, x, y, fx, fy, top);
    EXPECT_EQ(update_ems(before, x, y, fx, fy, top, nz), compute_ems(hm, s.container())) << t;
  }
}

TEST(PackState, EmsCacheTracksCommits) {
  std::mt19937_64 rng(404);
  const Container c{{0.8, 0.6, 0.8}, 0.05, 0.1};
  PackState st(c);
  EXPECT_FALSE(st.ems_cached());
  st.warm_ems();
  EXPECT_TRUE(st.ems_cached());
  const auto solver = make_solver("onlinebph");
  for (int k = 0; k < 15; ++k) {
    const ItemSpec it{"i" + std::to_string(k),
                      {0.1 + 0.1 * (rng() % 3), 0.1 + 0.1 * (rng() % 3), 0.1 + 0.1 * (rng() % 2)}};
    const auto p = solver->propose(st, it);
    if (!p) break;
    st.commit(p->placement);
    EXPECT_EQ(st.ems(), compute_ems(st.heightmap(), c));
  }
}

TEST(PackState, CommitRejectsOutOfContainer) {
  const Container c{{0.4, 0.4, 0.4}, 0.05, 0.1};
  PackState st(c);
  const ItemSpec tall{"t", {0.1, 0.1, 0.5}};
  EXPECT_THROW(st.commit(make_placement(tall, Orientation{}, 0, 0, 0, 0.1)), ContractViolation);
  const ItemSpec wide{"w", {0.3, 0.1, 0.1}};
  EXPECT_THROW(st.commit(make_placement(wide, Orientation{}, 2, 0, 0, 0.1)), ContractViolation);
}
