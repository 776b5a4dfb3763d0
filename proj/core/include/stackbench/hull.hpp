#pragma once

#include <algorithm>
#include <span>
#include <vector>

namespace stackbench {

struct Point2 {
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point2&, const Point2&) = default;
};

// Axis-aligned rectangle [x0, x1] × [y0, y1].
struct Rect2 {
  double x0{0.0};
  double y0{0.0};
  double x1{0.0};
  double y1{0.0};

  // Zero for empty rectangles; both extents negative must not give a positive product.
  double area() const { return std::max(0.0, x1 - x0) * std::max(0.0, y1 - y0); }
};

// Intersection of two rectangles; empty rectangles have zero or negative extent.
Rect2 intersect(const Rect2& a, const Rect2& b);

// Counter-clockwise convex hull (Andrew's monotone chain); collinear points dropped.
std::vector<Point2> convex_hull(std::vector<Point2> points);

struct HullQuery {
  // Positive inside, negative outside: distance from the point to the boundary.
  double signed_depth{0.0};
  // Closest boundary point.
  Point2 nearest;
};

// Query a point against a convex CCW polygon with at least one vertex.
HullQuery query_hull(std::span<const Point2> hull, Point2 p);

bool point_in_convex(std::span<const Point2> hull, Point2 p);

}  // namespace stackbench
