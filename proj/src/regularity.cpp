#include "nlpot/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nlpot/rng.hpp"

namespace nlpot {

namespace {

std::uint64_t cell_hash(std::int64_t ix, std::int64_t iy, std::uint64_t seed) {
  // splitmix64 over the packed cell index; stable across runs
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(ix + (1 << 20)) +
                                                    (static_cast<std::uint64_t>(iy + (1 << 20))
                                                     << 21));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace

Region DomainFamily::omega_region(int dim, double h) const {
  Region unit = Region::ball(anchor, 1.0, false);
  switch (kind) {
    case Kind::HalfSpaceComplement:
      return Region::intersect({unit, Region::halfspace(Point{1.0, 0.0}, anchor[0])});
    case Kind::Cone:
      return Region::difference(unit, Region::cone(anchor, Point{-1.0, 0.0}, aperture));
    case Kind::PowerCusp:
      return Region::difference(unit, Region::cusp(anchor, Point{-1.0, 0.0}, kappa));
    case Kind::PuncturedBall: {
      if (!(h > 0.0)) throw std::invalid_argument("PuncturedBall: needs the grid spacing");
      Point lo{anchor[0] - h / 2.0, anchor[1] - h / 2.0};
      Point hi{anchor[0] + h / 2.0, anchor[1] + h / 2.0};
      return Region::difference(unit, Region::box(lo, hi));
    }
    case Kind::MeasureDenseComplement: {
      if (!(h > 0.0)) throw std::invalid_argument("MeasureDenseComplement: needs the grid spacing");
      // Remove a seeded fraction of the h-cells inside B_{1/2}(anchor); the
      // anchor cell is always removed so the anchor stays on the boundary.
      std::vector<Region> removed;
      int reach = static_cast<int>(std::ceil(0.5 / h));
      for (int ix = -reach; ix <= reach; ++ix) {
        int ylo = dim == 2 ? -reach : 0, yhi = dim == 2 ? reach : 0;
        for (int iy = ylo; iy <= yhi; ++iy) {
          Point c{anchor[0] + ix * h, anchor[1] + iy * h};
          if (dist(c, anchor, dim) > 0.5) continue;
          bool remove = (ix == 0 && iy == 0) ||
                        (cell_hash(ix, iy, seed) >> 11) * 0x1.0p-53 < fraction;
          if (!remove) continue;
          removed.push_back(Region::box(Point{c[0] - h / 2.0, c[1] - h / 2.0},
                                        Point{c[0] + h / 2.0, c[1] + h / 2.0}));
        }
      }
      return Region::difference(unit, Region::unite(std::move(removed)));
    }
  }
  return unit;
}

double BoundaryDataSpec::eval(const Point& x, int dim) const {
  switch (kind) {
    case Kind::Constant: return value;
    case Kind::ClampedLinear:
      return std::clamp(value + dot(direction, x, dim), clamp_lo, clamp_hi);
    case Kind::Bump: {
      double d = dist(x, center, dim);
      if (d >= radius) return 0.0;
      double t = d / radius;
      return height * std::exp(1.0 - 1.0 / (1.0 - t * t));
    }
    case Kind::IndicatorBall: return dist(x, center, dim) <= radius ? height : 0.0;
  }
  return 0.0;
}

FarFieldModel BoundaryDataSpec::far_field(int) const {
  switch (kind) {
    case Kind::Constant: return FarFieldModel::constant(value);
    case Kind::ClampedLinear: return FarFieldModel::zero(); // inexact, see far_field_exact()
    case Kind::Bump:
    case Kind::IndicatorBall: return FarFieldModel::zero();
  }
  return FarFieldModel::zero();
}

std::vector<OscRecord> boundary_oscillation(const Solution& u, const NodeSet& omega,
                                            const Point& x0, const std::vector<double>& radii) {
  const Grid& g = *u.u.grid;
  require_same_grid(g, *omega.grid(), "boundary_oscillation");
  std::vector<OscRecord> out;
  for (double rho : radii) {
    OscRecord rec;
    rec.rho = rho;
    rec.sup = -std::numeric_limits<double>::infinity();
    rec.inf = std::numeric_limits<double>::infinity();
    std::size_t hits = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!omega.contains(i)) continue;
      if (dist(g.center(i), x0, g.dim) > rho) continue;
      rec.sup = std::max(rec.sup, u.u[i]);
      rec.inf = std::min(rec.inf, u.u[i]);
      ++hits;
    }
    if (hits == 0)
      throw std::invalid_argument("boundary_oscillation: no free node inside the smallest ball");
    out.push_back(rec);
  }
  return out;
}

double compute_Ml(const Solution& u, double l, double r, const Point& x0) {
  const Grid& g = *u.u.grid;
  double best = -std::numeric_limits<double>::infinity();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (dist(g.center(i), x0, g.dim) > r) continue;
    best = std::max(best, std::max(u.u[i] - l, 0.0));
    ++hits;
  }
  if (hits == 0) throw std::invalid_argument("compute_Ml: empty ball");
  return best;
}

namespace {

/// Constant far-field value of ((u - l)_+ - M)_+ given u's far-field model.
FarFieldModel truncated_excess_far(const FarFieldModel& far, double l, double M) {
  double base;
  if (far.kind == FarFieldModel::Kind::Zero)
    base = 0.0;
  else if (far.kind == FarFieldModel::Kind::Constant)
    base = far.c;
  else
    throw std::invalid_argument(
        "check_key_lemma: far-field transform needs a Zero or Constant model");
  double v = std::max(std::max(base - l, 0.0) - M, 0.0);
  return v == 0.0 ? FarFieldModel::zero() : FarFieldModel::constant(v);
}

} // namespace

KeyLemmaReport check_key_lemma(const Solution& u, const Region& omega, double l, double rho,
                               const Point& x0, const Params& params, const SolverConfig& config) {
  KeyLemmaReport rep;
  rep.Ml_rho = compute_Ml(u, l, rho, x0);
  rep.Ml_4rho = compute_Ml(u, l, 4.0 * rho, x0);

  // (u_{l,4rho})_- = ((u - l)_+ - M_l(4rho))_+
  const Grid& g = *u.u.grid;
  DiscreteFunction neg(u.u.grid, 0.0, truncated_excess_far(u.u.far_field, l, rep.Ml_4rho));
  for (std::size_t i = 0; i < g.size(); ++i)
    neg[i] = std::max(std::max(u.u[i] - l, 0.0) - rep.Ml_4rho, 0.0);
  rep.tail_neg = tail(neg, x0, 4.0 * rho, params);

  auto grid = u.u.grid;
  NodeSet ball2 = node_set(grid, Region::ball(x0, 2.0 * rho, false));
  NodeSet D = node_set(grid, Region::difference(Region::ball(x0, rho, true), omega));
  rep.cap = D.empty() ? 0.0
                      : capacity(D, ball2, KernelSpec::standard(), params, config).value;

  if (rep.Ml_4rho <= 0.0) {
    rep.defined = false; // undefined quotient, reported rather than thrown
    return rep;
  }
  rep.defined = true;
  double quotient = (rep.Ml_4rho - rep.Ml_rho + rep.tail_neg) / rep.Ml_4rho;
  rep.ratio = rep.cap / (std::pow(rho, params.scaling_exponent()) *
                         std::pow(quotient, params.p - 1.0));
  return rep;
}

WeakHarnackReport weak_harnack_diagnostic(const Solution& u, const Point& x0, double R, double t,
                                          const Params& params) {
  const Grid& g = *u.u.grid;
  const NodeSet& free = u.problem->free;
  double sp = params.s * params.p;
  if (sp < params.n) {
    double t_max = (params.p - 1.0) * params.n / (params.n - sp);
    if (!(t > 0.0 && t < t_max))
      throw std::invalid_argument("weak_harnack_diagnostic: t outside (0, (p-1)n/(n-sp))");
  } else if (!(t > 0.0)) {
    throw std::invalid_argument("weak_harnack_diagnostic: t must be positive");
  }

  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    double d = dist(g.center(i), x0, g.dim);
    if (d > R) continue;
    if (u.u[i] < 0.0)
      throw std::invalid_argument("weak_harnack_diagnostic: u must be >= 0 on B_R nodes");
    if (!free.contains(i)) m = std::min(m, u.u[i]);
  }

  DiscreteFunction um(u.u.grid, 0.0, u.u.far_field);
  for (std::size_t i = 0; i < g.size(); ++i) um[i] = std::min(u.u[i], m);

  WeakHarnackReport rep;
  rep.lhs = phi_average(um, t, x0, R / 2.0);

  double inf_quarter = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (dist(g.center(i), x0, g.dim) <= R / 4.0) inf_quarter = std::min(inf_quarter, um[i]);

  // negative part of u_m^- (far field: Zero/Constant transforms exactly)
  FarFieldModel neg_far = FarFieldModel::zero();
  if (um.far_field.kind == FarFieldModel::Kind::Constant || std::isfinite(m)) {
    double base = um.far_field.kind == FarFieldModel::Kind::Constant ? um.far_field.c : 0.0;
    if (um.far_field.kind == FarFieldModel::Kind::RadialPower)
      throw std::invalid_argument("weak_harnack_diagnostic: unsupported far-field transform");
    double farval = std::isfinite(m) ? std::min(base, m) : base;
    if (farval < 0.0) neg_far = FarFieldModel::constant(-farval);
  }
  DiscreteFunction neg(u.u.grid, 0.0, neg_far);
  for (std::size_t i = 0; i < g.size(); ++i) neg[i] = std::max(-um[i], 0.0);
  rep.rhs = inf_quarter + tail(neg, x0, R, params);

  if (rep.lhs == 0.0 && rep.rhs == 0.0) {
    rep.zero_over_zero = true;
    return rep;
  }
  rep.ratio = rep.lhs / rep.rhs;
  return rep;
}

const char* to_string(ProbeClassification c) {
  switch (c) {
    case ProbeClassification::RegularConsistent: return "regular-consistent";
    case ProbeClassification::IrregularConsistent: return "irregular-consistent";
    case ProbeClassification::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

ProbeReport probe_regularity(const DomainFamily& family, const BoundaryDataSpec& g,
                             const Params& params, const std::vector<int>& resolutions,
                             const SolverConfig& config, const ProbeOptions& opts) {
  params.validate();
  if (resolutions.empty()) throw std::invalid_argument("probe_regularity: no resolutions");

  ProbeReport report;
  report.g_at_anchor = g.eval(family.anchor, params.n);

  double g_range_lo = std::numeric_limits<double>::infinity(), g_range_hi = -g_range_lo;

  for (int res : resolutions) {
    if (res < 8) throw std::invalid_argument("probe_regularity: resolution too coarse");
    ProbeLevel level;
    level.resolution = res;
    double h = 2.5 / res;
    level.h = h;
    int cells = res + 1 - (res % 2); // odd count, node exactly at the anchor
    double half = cells * h / 2.0;
    Point lo{family.anchor[0] - half, family.anchor[1] - half};
    Point hi{family.anchor[0] + half, family.anchor[1] + half};
    auto grid = build_grid(lo, hi, {cells, params.n == 2 ? cells : 1}, params.n);

    Region omega_rg = family.omega_region(params.n, h);
    NodeSet omega = node_set(grid, omega_rg);

    DirichletProblem pb;
    pb.weights = std::make_shared<PairWeightMatrix>(
        assemble_weights(grid, KernelSpec::standard(), params));
    pb.free = omega;
    pb.boundary_values.assign(grid->size(), 0.0);
    for (std::size_t i = 0; i < grid->size(); ++i)
      if (!omega.contains(i)) {
        pb.boundary_values[i] = g.eval(grid->center(i), params.n);
        g_range_lo = std::min(g_range_lo, pb.boundary_values[i]);
        g_range_hi = std::max(g_range_hi, pb.boundary_values[i]);
      }

    Solution sol = solve(pb, config);
    sol.u.far_field = g.far_field(params.n);

    level.osc = boundary_oscillation(sol, omega, family.anchor, opts.radii);
    // Attainment gap at the nodes closest to the anchor. The sup over a fixed
    // ball converges up to the continuum profile as h -> 0, so the quantity
    // that shrinks at a regular point is |u - g(x0)| at the resolved scale.
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid->size(); ++i)
      if (omega.contains(i))
        nearest = std::min(nearest, dist(grid->center(i), family.anchor, params.n));
    double dev = 0.0;
    for (std::size_t i = 0; i < grid->size(); ++i) {
      if (!omega.contains(i)) continue;
      double d = dist(grid->center(i), family.anchor, params.n);
      if (d <= 1.2 * nearest) dev = std::max(dev, std::abs(sol.u[i] - report.g_at_anchor));
      if (d <= 1.8 * h) level.adjacent_max = std::max(level.adjacent_max, sol.u[i]);
    }
    level.deviation = dev;

    bool cell_feature = family.kind == DomainFamily::Kind::PuncturedBall ||
                        family.kind == DomainFamily::Kind::MeasureDenseComplement;
    if (cell_feature) {
      // The exterior feature is built out of solution-grid cells, so the
      // capacity levels must see it at exactly this spacing.
      std::vector<double> ladder;
      for (int k = 0; k < opts.wiener_levels; ++k)
        ladder.push_back(opts.wiener_rho_min *
                         std::pow(opts.wiener_rho_max / opts.wiener_rho_min,
                                  opts.wiener_levels == 1
                                      ? 0.0
                                      : static_cast<double>(k) / (opts.wiener_levels - 1)));
      level.wiener =
          wiener_profile_fixed_grid(omega_rg, *grid, family.anchor, ladder, params, config);
    } else {
      level.wiener = wiener_profile(omega_rg, family.anchor, opts.wiener_rho_min,
                                    opts.wiener_rho_max, opts.wiener_levels, params, config);
    }
    level.diag = wiener_integral(level.wiener);
    level.solution = std::move(sol);
    report.levels.push_back(std::move(level));
  }

  report.gap = opts.gap_fraction * std::max(g_range_hi - g_range_lo, 0.0);

  // classify
  std::vector<double> dev, diag;
  for (const auto& lv : report.levels) {
    dev.push_back(lv.deviation);
    diag.push_back(lv.diag.diagnostic);
  }
  double atol = 1e-10 * std::max(1.0, std::abs(report.g_at_anchor));
  bool all_tiny = std::all_of(dev.begin(), dev.end(), [&](double d) { return d <= atol; });
  bool strictly_dec = dev.size() >= 3;
  for (std::size_t k = 0; k + 1 < dev.size(); ++k)
    strictly_dec = strictly_dec && dev[k + 1] < dev[k];
  bool diag_bounded = diag.back() > 0.0 && diag.back() >= 0.5 * diag.front();
  bool diag_decays = true;
  for (std::size_t k = 0; k + 1 < diag.size(); ++k)
    diag_decays = diag_decays && diag[k + 1] <= 0.75 * diag[k];
  bool stays_above_gap = report.gap > 0.0 &&
                         std::all_of(dev.begin(), dev.end(),
                                     [&](double d) { return d >= report.gap; });

  if (all_tiny || (strictly_dec && diag_bounded))
    report.cls = ProbeClassification::RegularConsistent;
  else if (stays_above_gap && diag_decays)
    report.cls = ProbeClassification::IrregularConsistent;
  else
    report.cls = ProbeClassification::Inconclusive;
  return report;
}

} // namespace nlpot
