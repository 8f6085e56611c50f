#include "nlpot/geometry.hpp"

#include <stdexcept>

namespace nlpot {

struct Region::Node {
  enum class Kind { Ball, Box, HalfSpace, Cone, Cusp, All, Empty, Complement, Union, Intersection };
  Kind kind;
  Point a{0.0, 0.0}, b{0.0, 0.0};
  double scalar = 0.0;
  bool closed = true;
  std::vector<std::shared_ptr<const Node>> children;

  static std::shared_ptr<const Node> make(Node n) {
    return std::make_shared<const Node>(std::move(n));
  }

  bool contains(const Point& x, int dim) const {
    switch (kind) {
      case Kind::Ball: {
        double d = dist(x, a, dim);
        return closed ? d <= scalar : d < scalar;
      }
      case Kind::Box:
        for (int k = 0; k < dim; ++k)
          if (x[k] < a[k] || x[k] > b[k]) return false;
        return true;
      case Kind::HalfSpace:
        return dot(a, x, dim) > scalar;
      case Kind::Cone: {
        Point v{x[0] - a[0], x[1] - a[1]};
        double r = norm(v, dim);
        if (r == 0.0) return true;
        double c = dot(v, b, dim) / (r * norm(b, dim));
        return c >= std::cos(scalar / 2.0);
      }
      case Kind::Cusp: {
        Point v{x[0] - a[0], x[1] - a[1]};
        double t = dot(v, b, dim) / norm(b, dim);
        if (t < 0.0) return false;
        double perp = std::sqrt(std::max(0.0, dot(v, v, dim) - t * t));
        return perp <= std::pow(t, scalar);
      }
      case Kind::All: return true;
      case Kind::Empty: return false;
      case Kind::Complement: return !children[0]->contains(x, dim);
      case Kind::Union:
        for (const auto& c : children)
          if (c->contains(x, dim)) return true;
        return false;
      case Kind::Intersection:
        for (const auto& c : children)
          if (!c->contains(x, dim)) return false;
        return true;
    }
    return false;
  }
};

Region Region::ball(Point center, double radius, bool closed) {
  if (!(radius >= 0.0)) throw std::invalid_argument("Region::ball: negative radius");
  return Region(Node::make(Node{Node::Kind::Ball, center, {}, radius, closed, {}}));
}

Region Region::box(Point lo, Point hi) {
  return Region(Node::make(Node{Node::Kind::Box, lo, hi, 0.0, true, {}}));
}

Region Region::halfspace(Point normal, double offset) {
  return Region(Node::make(Node{Node::Kind::HalfSpace, normal, {}, offset, false, {}}));
}

Region Region::cone(Point vertex, Point axis, double aperture) {
  if (!(aperture > 0.0 && aperture <= 2.0 * M_PI))
    throw std::invalid_argument("Region::cone: aperture must lie in (0, 2*pi]");
  return Region(Node::make(Node{Node::Kind::Cone, vertex, axis, aperture, true, {}}));
}

Region Region::cusp(Point vertex, Point axis, double kappa) {
  if (!(kappa > 1.0)) throw std::invalid_argument("Region::cusp: kappa must be > 1");
  return Region(Node::make(Node{Node::Kind::Cusp, vertex, axis, kappa, true, {}}));
}

Region Region::all() {
  return Region(Node::make(Node{Node::Kind::All, {}, {}, 0.0, true, {}}));
}

Region Region::empty() {
  return Region(Node::make(Node{Node::Kind::Empty, {}, {}, 0.0, true, {}}));
}

Region Region::complement(Region r) {
  Node n{Node::Kind::Complement, {}, {}, 0.0, true, {}};
  n.children.push_back(r.root_);
  return Region(Node::make(std::move(n)));
}

Region Region::unite(std::vector<Region> rs) {
  Node n{Node::Kind::Union, {}, {}, 0.0, true, {}};
  n.children.reserve(rs.size());
  for (auto& r : rs) n.children.push_back(r.root_);
  return Region(Node::make(std::move(n)));
}

Region Region::intersect(std::vector<Region> rs) {
  Node n{Node::Kind::Intersection, {}, {}, 0.0, true, {}};
  n.children.reserve(rs.size());
  for (auto& r : rs) n.children.push_back(r.root_);
  return Region(Node::make(std::move(n)));
}

Region Region::difference(Region a, Region b) {
  return intersect({std::move(a), complement(std::move(b))});
}

bool Region::contains(const Point& x, int dim) const { return root_->contains(x, dim); }

} // namespace nlpot
