#include "stackbench/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stackbench {

namespace {

double cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

Point2 closest_on_segment(Point2 a, Point2 b, Point2 p) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  if (len2 <= 0.0) return a;
  const double t = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len2, 0.0, 1.0);
  return {a.x + t * vx, a.y + t * vy};
}

}  // namespace

Rect2 intersect(const Rect2& a, const Rect2& b) {
  return {std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1),
          std::min(a.y1, b.y1)};
}

std::vector<Point2> convex_hull(std::vector<Point2> points) {
  std::sort(points.begin(), points.end(), [](Point2 a, Point2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;

  std::vector<Point2> hull(2 * points.size());
  std::size_t k = 0;
  for (const Point2& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const Point2& p = points[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

HullQuery query_hull(std::span<const Point2> hull, Point2 p) {
  if (hull.size() == 1) {
    const double d = std::hypot(p.x - hull[0].x, p.y - hull[0].y);
    return {-d, hull[0]};
  }
  bool inside = hull.size() >= 3;
  double best = std::numeric_limits<double>::infinity();
  Point2 nearest = hull[0];
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2 a = hull[i];
    const Point2 b = hull[(i + 1) % hull.size()];
    if (cross(a, b, p) < 0) inside = false;
    const Point2 q = closest_on_segment(a, b, p);
    const double d = std::hypot(p.x - q.x, p.y - q.y);
    if (d < best) {
      best = d;
      nearest = q;
    }
  }
  return {inside ? best : -best, nearest};
}

bool point_in_convex(std::span<const Point2> hull, Point2 p) {
  return query_hull(hull, p).signed_depth >= 0.0;
}

}  // namespace stackbench
