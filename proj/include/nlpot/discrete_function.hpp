#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "nlpot/geometry.hpp"
#include "nlpot/grid.hpp"

namespace nlpot {

/// Analytic model for a function outside the computational box. The three
/// variants all lie in the tail space (the integral |u|^{p-1}(1+|y|)^{-n-sp}
/// over R^n converges), so nonlocal tails can be completed exactly.
struct FarFieldModel {
  enum class Kind { Zero, Constant, RadialPower };
  Kind kind = Kind::Zero;
  double c = 0.0;          ///< amplitude
  double q = 0.0;          ///< decay exponent >= 0: u(y) = c |y - center|^{-q}
  Point center{0.0, 0.0};

  static FarFieldModel zero() { return FarFieldModel{}; }
  static FarFieldModel constant(double c) {
    FarFieldModel f;
    f.kind = Kind::Constant;
    f.c = c;
    return f;
  }
  static FarFieldModel radial_power(double c, double q, Point center) {
    if (!(q >= 0.0)) throw std::invalid_argument("FarFieldModel: exponent must be >= 0");
    FarFieldModel f;
    f.kind = Kind::RadialPower;
    f.c = c;
    f.q = q;
    f.center = center;
    return f;
  }

  double eval(const Point& y, int dim) const {
    switch (kind) {
      case Kind::Zero: return 0.0;
      case Kind::Constant: return c;
      case Kind::RadialPower: return c * std::pow(dist(y, center, dim), -q);
    }
    return 0.0;
  }
};

/// Node values on a grid plus a far-field model describing the function
/// outside the box.
struct DiscreteFunction {
  std::shared_ptr<const Grid> grid;
  std::vector<double> values;
  FarFieldModel far_field = FarFieldModel::zero();

  DiscreteFunction() = default;
  DiscreteFunction(std::shared_ptr<const Grid> g, double fill = 0.0,
                   FarFieldModel far = FarFieldModel::zero())
      : grid(std::move(g)), values(grid->size(), fill), far_field(far) {}
  DiscreteFunction(std::shared_ptr<const Grid> g, std::vector<double> vals,
                   FarFieldModel far = FarFieldModel::zero())
      : grid(std::move(g)), values(std::move(vals)), far_field(far) {
    if (values.size() != grid->size())
      throw std::invalid_argument("DiscreteFunction: value count differs from grid size");
  }

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  std::size_t size() const { return values.size(); }
};

} // namespace nlpot
