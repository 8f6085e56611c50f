#include "nlpot/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlpot/parallel.hpp"
#include "nlpot/quadrature.hpp"

namespace nlpot {

namespace {

void require_compatible(const DiscreteFunction& u, const PairWeightMatrix& W, const Params& params,
                        const char* what) {
  require_same_grid(*u.grid, *W.grid(), what);
  if (params.p != W.params().p || params.s != W.params().s)
    throw std::invalid_argument(std::string(what) + ": params differ from weight assembly");
}

/// Exponent of |far(y)|^{p-1} |y-x0|^{-n-sp} decay at infinity.
double far_decay_exponent(const FarFieldModel& far, const Params& params) {
  double alpha = params.s * params.p;
  if (far.kind == FarFieldModel::Kind::RadialPower) alpha += far.q * (params.p - 1.0);
  return alpha;
}

// ---------------------------------------------------------------------------
// Exterior far-field integral: |far(y)|^{p-1} |y-x0|^{-n-sp} over
// (R^n \ box) \ B_r(x0).
// ---------------------------------------------------------------------------

/// 1D integral of |y-x0|^{-1-alpha} over [a, b] not containing x0 (b may be
/// +inf on the right side of x0, a may be -inf on the left side).
double radial_piece_1d(double x0, double a, double b, double alpha) {
  auto prim = [&](double xi) { return -std::pow(xi, -alpha) / alpha; }; // d/dxi = xi^{-1-alpha}
  if (a >= x0) {
    double lo = a - x0;
    if (std::isinf(b)) return -prim(lo);
    return prim(b - x0) - prim(lo);
  }
  double lo = x0 - b;
  if (std::isinf(a)) return -prim(lo);
  return prim(x0 - a) - prim(lo);
}

double exterior_integral_1d(const FarFieldModel& far, const Grid& box, double x0, double r,
                            const Params& params) {
  const double pm1 = params.p - 1.0;
  const double sp = params.s * params.p;
  const double alpha = far_decay_exponent(far, params);
  const bool radial_about_x0 =
      far.kind == FarFieldModel::Kind::Constant ||
      (far.kind == FarFieldModel::Kind::RadialPower && far.center[0] == x0);
  const double amp = std::pow(std::abs(far.c), pm1);
  if (amp == 0.0) return 0.0;

  auto integrand = [&](double y) {
    double v = std::pow(std::abs(far.eval(point1(y), 1)), pm1);
    return v * std::pow(std::abs(y - x0), -1.0 - sp);
  };

  // Pieces of ((-inf, lo] u [hi, inf)) \ (x0-r, x0+r).
  struct Piece {
    double a, b;
  };
  std::vector<Piece> pieces;
  double bl = x0 - r, br = x0 + r;
  // left ray (-inf, lo]
  pieces.push_back({-std::numeric_limits<double>::infinity(), std::min(box.lo[0], bl)});
  if (br < box.lo[0]) pieces.push_back({br, box.lo[0]});
  // right ray [hi, inf)
  pieces.push_back({std::max(box.hi[0], br), std::numeric_limits<double>::infinity()});
  if (bl > box.hi[0]) pieces.push_back({box.hi[0], bl});

  double total = 0.0;
  for (const auto& pc : pieces) {
    if (pc.b <= pc.a) continue;
    if (radial_about_x0) {
      total += amp * radial_piece_1d(x0, pc.a, pc.b, alpha);
      continue;
    }
    // general center: numeric in the distance variable from x0
    if (std::isinf(pc.b)) {
      double lo = pc.a - x0;
      total += gauss_geometric_tail([&](double xi) { return integrand(x0 + xi); }, lo, alpha);
    } else if (std::isinf(pc.a)) {
      double lo = x0 - pc.b;
      total += gauss_geometric_tail([&](double xi) { return integrand(x0 - xi); }, lo, alpha);
    } else {
      bool right = pc.a >= x0;
      double lo = right ? pc.a - x0 : x0 - pc.b;
      double hi = right ? pc.b - x0 : x0 - pc.a;
      total += gauss_log_panels(
          [&](double xi) { return integrand(right ? x0 + xi : x0 - xi); }, lo, hi, {}, 32, 12);
    }
  }
  return total;
}

double ray_box_exit(const Grid& box, const Point& x0, double cth, double sth) {
  double t = std::numeric_limits<double>::infinity();
  if (cth > 0.0) t = std::min(t, (box.hi[0] - x0[0]) / cth);
  if (cth < 0.0) t = std::min(t, (box.lo[0] - x0[0]) / cth);
  if (sth > 0.0) t = std::min(t, (box.hi[1] - x0[1]) / sth);
  if (sth < 0.0) t = std::min(t, (box.lo[1] - x0[1]) / sth);
  return t;
}

double exterior_integral_2d(const FarFieldModel& far, const Grid& box, const Point& x0, double r,
                            const Params& params) {
  const double pm1 = params.p - 1.0;
  const double sp = params.s * params.p;
  const double alpha = far_decay_exponent(far, params);
  const double amp = std::pow(std::abs(far.c), pm1);
  if (amp == 0.0) return 0.0;

  bool inside = x0[0] > box.lo[0] && x0[0] < box.hi[0] && x0[1] > box.lo[1] && x0[1] < box.hi[1];
  if (!inside)
    throw std::invalid_argument("tail: 2D far-field completion requires x0 inside the box");

  const bool radial_about_x0 =
      far.kind == FarFieldModel::Kind::Constant ||
      (far.kind == FarFieldModel::Kind::RadialPower && far.center[0] == x0[0] &&
       far.center[1] == x0[1]);

  // Angular breakpoints: box corners, plus circle/side crossings when B_r
  // pokes out of the box.
  std::vector<double> brk;
  auto add_angle = [&](double dx, double dy) { brk.push_back(std::atan2(dy, dx)); };
  add_angle(box.lo[0] - x0[0], box.lo[1] - x0[1]);
  add_angle(box.lo[0] - x0[0], box.hi[1] - x0[1]);
  add_angle(box.hi[0] - x0[0], box.lo[1] - x0[1]);
  add_angle(box.hi[0] - x0[0], box.hi[1] - x0[1]);
  auto side_crossings_x = [&](double xside) {
    double dx = xside - x0[0];
    if (std::abs(dx) >= r) return;
    double dy = std::sqrt(r * r - dx * dx);
    for (double yy : {x0[1] + dy, x0[1] - dy})
      if (yy >= box.lo[1] && yy <= box.hi[1]) add_angle(dx, yy - x0[1]);
  };
  auto side_crossings_y = [&](double yside) {
    double dy = yside - x0[1];
    if (std::abs(dy) >= r) return;
    double dx = std::sqrt(r * r - dy * dy);
    for (double xx : {x0[0] + dx, x0[0] - dx})
      if (xx >= box.lo[0] && xx <= box.hi[0]) add_angle(xx - x0[0], dy);
  };
  side_crossings_x(box.lo[0]);
  side_crossings_x(box.hi[0]);
  side_crossings_y(box.lo[1]);
  side_crossings_y(box.hi[1]);
  for (double& t : brk)
    if (t < 0.0) t += 2.0 * M_PI;
  brk.push_back(0.0);
  brk.push_back(2.0 * M_PI);
  std::sort(brk.begin(), brk.end());
  brk.erase(std::unique(brk.begin(), brk.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-14; }),
            brk.end());

  auto per_theta = [&](double theta) {
    double cth = std::cos(theta), sth = std::sin(theta);
    double rho0 = std::max(r, ray_box_exit(box, x0, cth, sth));
    if (radial_about_x0) return amp * std::pow(rho0, -alpha) / alpha;
    auto g = [&](double rho) {
      Point y{x0[0] + rho * cth, x0[1] + rho * sth};
      return std::pow(std::abs(far.eval(y, 2)), pm1) * std::pow(rho, -1.0 - sp);
    };
    return gauss_geometric_tail(g, rho0, alpha, 12);
  };

  double total = 0.0;
  const double max_panel = M_PI / 16.0;
  for (std::size_t k = 0; k + 1 < brk.size(); ++k) {
    double a = brk[k], b = brk[k + 1];
    int sub = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
    total += gauss_panels(per_theta, a, b, sub, 12);
  }
  return total;
}

double exterior_integral(const FarFieldModel& far, const Grid& box, const Point& x0, double r,
                         const Params& params) {
  if (far.kind == FarFieldModel::Kind::Zero) return 0.0;
  if (far.kind == FarFieldModel::Kind::RadialPower && far.q > 0.0) {
    bool center_inside = true;
    for (int k = 0; k < box.dim; ++k)
      center_inside = center_inside && far.center[k] > box.lo[k] && far.center[k] < box.hi[k];
    if (!center_inside)
      throw std::invalid_argument(
          "tail: radial-power far field must be centered strictly inside the box");
  }
  return box.dim == 1 ? exterior_integral_1d(far, box, x0[0], r, params)
                      : exterior_integral_2d(far, box, x0, r, params);
}

} // namespace

double energy_form_values(const std::vector<double>& u, const std::vector<double>& v,
                          const PairWeightMatrix& W, double p) {
  std::size_t n = W.size();
  return parallel_sum(n, [&](std::size_t i) {
    double ui = u[i], vi = v[i], s = 0.0;
    W.visit_row(i, [&](std::size_t j, double w) { s += w * phi_p(ui - u[j], p) * (vi - v[j]); });
    return s;
  });
}

double energy_form(const DiscreteFunction& u, const DiscreteFunction& v,
                   const PairWeightMatrix& W, const Params& params) {
  require_compatible(u, W, params, "energy_form");
  require_same_grid(*v.grid, *W.grid(), "energy_form");
  return energy_form_values(u.values, v.values, W, params.p);
}

double gagliardo_seminorm_p(const DiscreteFunction& u, const NodeSet& region,
                            const PairWeightMatrix& W) {
  if (!W.standard_kernel())
    throw std::invalid_argument("gagliardo_seminorm_p: requires standard-fractional weights");
  require_same_grid(*u.grid, *W.grid(), "gagliardo_seminorm_p");
  require_same_grid(*region.grid(), *W.grid(), "gagliardo_seminorm_p");
  const double p = W.params().p;
  std::size_t n = W.size();
  return parallel_sum(n, [&](std::size_t i) {
    if (!region.contains(i)) return 0.0;
    double ui = u[i], s = 0.0;
    W.visit_row(i, [&](std::size_t j, double w) {
      if (region.contains(j)) s += w * pow_p(ui - u[j], p);
    });
    return s;
  });
}

double tail_bracket(const DiscreteFunction& u, const Point& x0, double r, const Params& params) {
  if (!(r > 0.0)) throw std::invalid_argument("tail: radius must be positive");
  const Grid& g = *u.grid;
  const double pm1 = params.p - 1.0;
  const double sp = params.s * params.p;
  double grid_sum = parallel_sum(g.size(), [&](std::size_t i) {
    double d = dist(g.center(i), x0, g.dim);
    if (d <= r) return 0.0;
    return std::pow(std::abs(u[i]), pm1) * std::pow(d, -(g.dim + sp)) * g.cell_volume();
  });
  return grid_sum + exterior_integral(u.far_field, g, x0, r, params);
}

double tail(const DiscreteFunction& u, const Point& x0, double r, const Params& params) {
  double bracket = tail_bracket(u, x0, r, params);
  return std::pow(std::pow(r, params.s * params.p) * bracket, 1.0 / (params.p - 1.0));
}

double phi_average(const DiscreteFunction& u, double gamma, const Point& x0, double R) {
  if (gamma == 0.0) throw std::invalid_argument("phi_average: gamma must be nonzero");
  const Grid& g = *u.grid;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (dist(g.center(i), x0, g.dim) > R) continue;
    double a = std::abs(u[i]);
    if (a == 0.0 && gamma < 0.0)
      throw std::invalid_argument("phi_average: zero value with negative gamma");
    sum += std::pow(a, gamma);
    ++count;
  }
  if (count == 0) throw std::invalid_argument("phi_average: no nodes in the ball");
  return std::pow(sum / count, 1.0 / gamma);
}

} // namespace nlpot
