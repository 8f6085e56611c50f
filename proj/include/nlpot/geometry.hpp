#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <vector>

namespace nlpot {

/// A point in R^1 or R^2; the second coordinate is zero and ignored in 1D.
using Point = std::array<double, 2>;

inline Point point1(double x) { return {x, 0.0}; }
inline Point point2(double x, double y) { return {x, y}; }

inline double dot(const Point& a, const Point& b, int dim) {
  double r = a[0] * b[0];
  if (dim > 1) r += a[1] * b[1];
  return r;
}

inline double dist(const Point& a, const Point& b, int dim) {
  double dx = a[0] - b[0];
  if (dim == 1) return std::abs(dx);
  double dy = a[1] - b[1];
  return std::hypot(dx, dy);
}

inline double norm(const Point& a, int dim) { return dist(a, Point{0.0, 0.0}, dim); }

/// Declarative geometric predicate used to carve node sets out of a grid.
/// Composable: balls, boxes, half-spaces, cones, power cusps, and boolean
/// combinations. Membership is evaluated at cell centers.
class Region {
 public:
  /// |x - center| < r (open) or <= r (closed).
  static Region ball(Point center, double radius, bool closed = true);
  /// Axis-aligned closed box [lo, hi].
  static Region box(Point lo, Point hi);
  /// Open half-space normal . x > offset.
  static Region halfspace(Point normal, double offset);
  /// Closed cone with given vertex, axis direction, and full aperture angle:
  /// points x with angle(x - vertex, axis) <= aperture/2.
  static Region cone(Point vertex, Point axis, double aperture);
  /// Power cusp at the vertex, opening along axis: points with axial distance
  /// t >= 0 and transversal distance <= t^kappa (kappa > 1 gives a cusp).
  static Region cusp(Point vertex, Point axis, double kappa);
  static Region all();
  static Region empty();

  static Region complement(Region r);
  static Region unite(std::vector<Region> rs);
  static Region intersect(std::vector<Region> rs);
  /// Convenience: a minus b.
  static Region difference(Region a, Region b);

  bool contains(const Point& x, int dim) const;

 private:
  struct Node;
  std::shared_ptr<const Node> root_;
  explicit Region(std::shared_ptr<const Node> n) : root_(std::move(n)) {}
};

} // namespace nlpot
