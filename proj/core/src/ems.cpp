#include <algorithm>
#include <cstdint>
#include <tuple>
#include <vector>

#include "stackbench/geometry.hpp"

namespace stackbench {

namespace {

// Summed-area table over a boolean predicate, (nx+1) × (ny+1).
class CountTable {
 public:
  template <typename Pred>
  CountTable(int nx, int ny, Pred pred) : nx_(nx), sums_((nx + 1) * (ny + 1), 0) {
    for (int y = 0; y < ny; ++y) {
      int row = 0;
      for (int x = 0; x < nx; ++x) {
        row += pred(x, y) ? 1 : 0;
        at(x + 1, y + 1) = at(x + 1, y) + row;
      }
    }
  }
  // Count over [x0, x1) × [y0, y1).
  int count(int x0, int y0, int x1, int y1) const {
    return get(x1, y1) - get(x0, y1) - get(x1, y0) + get(x0, y0);
  }

 private:
  int& at(int x, int y) { return sums_[static_cast<std::size_t>(y) * (nx_ + 1) + x]; }
  int get(int x, int y) const { return sums_[static_cast<std::size_t>(y) * (nx_ + 1) + x]; }

  int nx_;
  std::vector<int> sums_;
};

struct Bar {
  int start;
  int height;
};

// Maximal rectangles of the free mask {h <= level} that touch at least one
// cell of exactly `level`; each becomes an EMS from `level` to the lid.
void ems_at_level(const Heightmap& hm, int level, int nz, std::vector<Ems>& out) {
  const int nx = hm.nx();
  const int ny = hm.ny();
  const CountTable blocked(nx, ny, [&](int x, int y) { return hm.at(x, y) > level; });
  const CountTable on_level(nx, ny, [&](int x, int y) { return hm.at(x, y) == level; });

  std::vector<int> up(nx, 0);
  std::vector<Bar> stack;
  stack.reserve(nx);

  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) up[x] = hm.at(x, y) <= level ? up[x] + 1 : 0;

    auto emit = [&](int x0, int x1, int height) {
      const int y0 = y - height + 1;
      // Extendable downward if the next row is free across [x0, x1).
      if (y + 1 < ny && blocked.count(x0, y + 1, x1, y + 2) == 0) return;
      if (on_level.count(x0, y0, x1, y + 1) == 0) return;
      out.push_back({{x0, y0, level, x1 - x0, height, nz - level}});
    };

    stack.clear();
    for (int x = 0; x <= nx; ++x) {
      const int h = x < nx ? up[x] : 0;
      int start = x;
      while (!stack.empty() && stack.back().height >= h) {
        if (stack.back().height > h) emit(stack.back().start, x, stack.back().height);
        start = stack.back().start;
        stack.pop_back();
      }
      if (h > 0) stack.push_back({start, h});
    }
  }
}

}  // namespace

void sort_ems(std::vector<Ems>& ems) {
  std::sort(ems.begin(), ems.end(), [](const Ems& a, const Ems& b) {
    const CellBox& p = a.box;
    const CellBox& q = b.box;
    return std::tie(p.z, p.y, p.x, p.dz, p.dy, p.dx) < std::tie(q.z, q.y, q.x, q.dz, q.dy, q.dx);
  });
}

std::vector<Ems> compute_ems(const Heightmap& hm, const Container& c) {
  const int nz = c.nz();
  std::vector<int> levels(hm.cells().begin(), hm.cells().end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  // Across levels no box can contain another: a box at level z covers a cell
  // of height z, which is not free at any lower level, and a higher floor
  // cannot contain a lower one. So the union needs no pruning pass.
  std::vector<Ems> out;
  for (int level : levels) {
    if (level >= nz) break;
    ems_at_level(hm, level, nz, out);
  }
  sort_ems(out);
  return out;
}

std::vector<Ems> update_ems(std::span<const Ems> before, int x, int y, int fx, int fy, int top,
                            int nz) {
  const CellBox block{x, y, 0, fx, fy, top};
  std::vector<Ems> kept;
  std::vector<Ems> pieces;
  kept.reserve(before.size() + 8);

  for (const Ems& e : before) {
    const CellBox& b = e.box;
    if (!b.overlaps(block)) {
      kept.push_back(e);
      continue;
    }
    const int bx1 = b.x + b.dx;
    const int by1 = b.y + b.dy;
    if (b.x < x) pieces.push_back({{b.x, b.y, b.z, x - b.x, b.dy, b.dz}});
    if (bx1 > x + fx) pieces.push_back({{x + fx, b.y, b.z, bx1 - (x + fx), b.dy, b.dz}});
    if (b.y < y) pieces.push_back({{b.x, b.y, b.z, b.dx, y - b.y, b.dz}});
    if (by1 > y + fy) pieces.push_back({{b.x, y + fy, b.z, b.dx, by1 - (y + fy), b.dz}});
    if (top < nz) pieces.push_back({{b.x, b.y, top, b.dx, b.dy, nz - top}});
  }

  sort_ems(pieces);
  pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());

  // Untouched spaces were maximal before and stay maximal; only new pieces
  // can be dominated.
  const std::size_t untouched = kept.size();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const CellBox& p = pieces[i].box;
    bool dominated = false;
    for (std::size_t k = 0; k < untouched && !dominated; ++k) {
      dominated = kept[k].box.contains(p);
    }
    for (std::size_t j = 0; j < pieces.size() && !dominated; ++j) {
      dominated = j != i && pieces[j].box.contains(p);
    }
    if (!dominated) kept.push_back(pieces[i]);
  }
  sort_ems(kept);
  return kept;
}

}  // namespace stackbench
