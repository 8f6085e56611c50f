#include "nlpot/potential_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nlpot/quadrature.hpp"

namespace nlpot {

// ---------------------------------------------------------------------------
// RadialMeasureProfile
// ---------------------------------------------------------------------------

RadialMeasureProfile RadialMeasureProfile::zero() { return RadialMeasureProfile{}; }

RadialMeasureProfile RadialMeasureProfile::dirac_shell(double distance, double mass) {
  if (!(distance >= 0.0) || !(mass >= 0.0))
    throw std::invalid_argument("dirac_shell: needs distance, mass >= 0");
  RadialMeasureProfile p;
  p.kind_ = Kind::Dirac;
  p.a_ = distance;
  p.total_ = mass;
  if (distance > 0.0) p.breakpoints_.push_back(distance);
  return p;
}

RadialMeasureProfile RadialMeasureProfile::uniform_ball(double radius, double mass, int dim) {
  if (!(radius > 0.0)) throw std::invalid_argument("uniform_ball: radius must be > 0");
  RadialMeasureProfile p;
  p.kind_ = Kind::UniformBall;
  p.a_ = radius;
  p.dim_ = dim;
  p.total_ = mass;
  p.breakpoints_.push_back(radius);
  return p;
}

RadialMeasureProfile RadialMeasureProfile::power_law(double coeff, double exponent) {
  if (!(coeff >= 0.0) || !(exponent >= 0.0))
    throw std::invalid_argument("power_law: needs coeff >= 0, exponent >= 0");
  RadialMeasureProfile p;
  p.kind_ = Kind::PowerLaw;
  p.a_ = coeff;
  p.b_ = exponent;
  p.total_ = std::numeric_limits<double>::infinity();
  return p;
}

RadialMeasureProfile RadialMeasureProfile::empirical(const Measure& mu, Point center) {
  RadialMeasureProfile p;
  p.kind_ = Kind::Empirical;
  const Grid& g = *mu.support.grid();
  std::vector<std::pair<double, double>> items; // (distance, mass)
  for (std::size_t i = 0; i < mu.masses.size(); ++i)
    if (mu.masses[i] > 0.0) items.emplace_back(dist(g.center(i), center, g.dim), mu.masses[i]);
  std::sort(items.begin(), items.end());
  double acc = 0.0;
  for (auto& [d, m] : items) {
    acc += m;
    if (!p.radii_.empty() && p.radii_.back() == d) {
      p.cumul_.back() = acc;
    } else {
      p.radii_.push_back(d);
      p.cumul_.push_back(acc);
    }
  }
  p.total_ = acc;
  p.breakpoints_ = p.radii_;
  return p;
}

double RadialMeasureProfile::mass_within(double rho) const {
  if (rho < 0.0) return 0.0;
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Dirac: return rho >= a_ ? total_ : 0.0;
    case Kind::UniformBall: {
      if (rho >= a_) return total_;
      double frac = rho / a_;
      return total_ * (dim_ == 1 ? frac : frac * frac);
    }
    case Kind::PowerLaw: return a_ * std::pow(rho, b_);
    case Kind::Empirical: {
      auto it = std::upper_bound(radii_.begin(), radii_.end(), rho);
      if (it == radii_.begin()) return 0.0;
      return cumul_[static_cast<std::size_t>(it - radii_.begin()) - 1];
    }
  }
  return 0.0;
}

double RadialMeasureProfile::support_radius() const {
  switch (kind_) {
    case Kind::Zero: return std::numeric_limits<double>::infinity();
    case Kind::Dirac: return total_ > 0.0 ? a_ : std::numeric_limits<double>::infinity();
    case Kind::UniformBall: return total_ > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    case Kind::PowerLaw: return a_ > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    case Kind::Empirical:
      return radii_.empty() ? std::numeric_limits<double>::infinity() : radii_.front();
  }
  return std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Wolff potential
// ---------------------------------------------------------------------------

WolffResult wolff_potential(const RadialMeasureProfile& profile, double r, const Params& params,
                            int log_panels) {
  if (!(r > 0.0)) throw std::invalid_argument("wolff_potential: r must be > 0");
  params.validate();
  const double nsp = params.scaling_exponent();
  const double pm1 = params.p - 1.0;

  auto tilde = [&](double rho) { // integrand * rho
    double m = profile.mass_within(rho);
    if (m <= 0.0) return 0.0;
    return std::pow(m / std::pow(rho, nsp), 1.0 / pm1);
  };
  auto integrand = [&](double rho) { return tilde(rho) / rho; };

  double lower = profile.support_radius();
  if (lower >= r) return {0.0, false};

  WolffResult res;
  double a0 = lower;
  double correction = 0.0;
  if (lower <= 0.0) {
    // Probe integrand * rho on a geometric ladder toward 0: if it does not
    // decay, the integral diverges at the origin.
    std::vector<double> t;
    for (int j = 20; j <= 30; ++j) t.push_back(tilde(r * std::pow(4.0, -j)));
    double t_hi = t.front(), t_lo = t.back();
    bool positive = *std::min_element(t.begin(), t.end()) > 0.0;
    if (positive && t_lo >= 0.5 * t_hi) {
      res.divergent = true;
      res.value = std::numeric_limits<double>::infinity();
      return res;
    }
    a0 = r * std::pow(4.0, -40);
    if (positive) {
      // Convergent power decay: add the analytic remainder of the fitted
      // local power below the cutoff.
      double theta = std::log(t_hi / t_lo) / (10.0 * std::log(4.0));
      correction = tilde(a0) / theta;
    }
  }

  double value = gauss_log_panels(integrand, a0, r, profile.breakpoints(),
                                  std::max(log_panels, 8), 8);
  res.value = value + correction;
  return res;
}

// ---------------------------------------------------------------------------
// Wiener profile and integral
// ---------------------------------------------------------------------------

WienerProfile wiener_profile(const Region& omega, Point x0, double rho_min, double rho_max,
                             int levels, const Params& params, const SolverConfig& config,
                             const WienerGridOptions& opts) {
  params.validate();
  if (!(rho_min > 0.0) || !(rho_max >= rho_min))
    throw std::invalid_argument("wiener_profile: need 0 < rho_min <= rho_max");
  if (levels < 1) throw std::invalid_argument("wiener_profile: need at least one level");

  WienerProfile prof;
  const double nsp = params.scaling_exponent();
  const double pm1 = params.p - 1.0;

  for (int k = 0; k < levels; ++k) {
    double rho = levels == 1
                     ? rho_min
                     : rho_min * std::pow(rho_max / rho_min, static_cast<double>(k) / (levels - 1));
    double half = opts.box_half_factor * rho;
    // odd cell count puts a node exactly at x0
    int half_cells = static_cast<int>(std::ceil(half * opts.cells_across_annulus / rho));
    int cells = 2 * half_cells + 1;
    double h = 2.0 * half / cells;
    Point lo{x0[0] - half, x0[1] - half}, hi{x0[0] + half, x0[1] + half};
    auto grid = build_grid(lo, hi, {cells, params.n == 2 ? cells : 1}, params.n);

    NodeSet ball2 = node_set(grid, Region::ball(x0, 2.0 * rho, false));
    NodeSet D = node_set(grid, Region::difference(Region::ball(x0, rho, true), omega));
    D = D.intersect(ball2);

    double cap = 0.0;
    if (!D.empty())
      cap = capacity(D, ball2, KernelSpec::standard(), params, config).value;
    prof.radii.push_back(rho);
    prof.caps.push_back(cap);
    prof.integrands.push_back(cap > 0.0 ? std::pow(cap / std::pow(rho, nsp), 1.0 / pm1) / rho
                                        : 0.0);
    prof.level_h.push_back(h);
    prof.level_nodes.push_back(static_cast<int>(grid->size()));
  }
  prof.all_empty = std::all_of(prof.caps.begin(), prof.caps.end(),
                               [](double c) { return c == 0.0; });
  return prof;
}

WienerProfile wiener_profile_fixed_grid(const Region& omega, const Grid& base, Point x0,
                                        const std::vector<double>& radii, const Params& params,
                                        const SolverConfig& config) {
  params.validate();
  WienerProfile prof;
  const double nsp = params.scaling_exponent();
  const double pm1 = params.p - 1.0;
  const double h = base.h;

  for (double rho : radii) {
    if (!(rho > 0.0)) throw std::invalid_argument("wiener_profile_fixed_grid: rho must be > 0");
    // Subgrid of whole base cells covering B_{2 rho} plus a margin.
    double half_needed = 2.0 * rho + 2.0 * h;
    auto clip = [&](double want_lo, double lo, int cells) {
      int i = static_cast<int>(std::floor((want_lo - lo) / h));
      return std::clamp(i, 0, cells - 1);
    };
    int ix0 = clip(x0[0] - half_needed, base.lo[0], base.cells[0]);
    int ix1 = clip(x0[0] + half_needed, base.lo[0], base.cells[0]);
    int iy0 = 0, iy1 = 0;
    if (base.dim == 2) {
      iy0 = clip(x0[1] - half_needed, base.lo[1], base.cells[1]);
      iy1 = clip(x0[1] + half_needed, base.lo[1], base.cells[1]);
    }
    Point lo{base.lo[0] + ix0 * h, base.dim == 2 ? base.lo[1] + iy0 * h : 0.0};
    Point hi{base.lo[0] + (ix1 + 1) * h, base.dim == 2 ? base.lo[1] + (iy1 + 1) * h : 0.0};
    auto grid = build_grid(lo, hi, {ix1 - ix0 + 1, base.dim == 2 ? iy1 - iy0 + 1 : 1}, base.dim);

    NodeSet ball2 = node_set(grid, Region::ball(x0, 2.0 * rho, false));
    NodeSet D = node_set(grid, Region::difference(Region::ball(x0, rho, true), omega));
    D = D.intersect(ball2);

    double cap = 0.0;
    if (!D.empty()) cap = capacity(D, ball2, KernelSpec::standard(), params, config).value;
    prof.radii.push_back(rho);
    prof.caps.push_back(cap);
    prof.integrands.push_back(cap > 0.0 ? std::pow(cap / std::pow(rho, nsp), 1.0 / pm1) / rho
                                        : 0.0);
    prof.level_h.push_back(grid->h);
    prof.level_nodes.push_back(static_cast<int>(grid->size()));
  }
  prof.all_empty =
      std::all_of(prof.caps.begin(), prof.caps.end(), [](double c) { return c == 0.0; });
  return prof;
}

WienerIntegralResult wiener_integral(const WienerProfile& profile) {
  if (profile.radii.empty()) throw std::invalid_argument("wiener_integral: empty profile");
  WienerIntegralResult res;

  std::size_t m = profile.radii.size();
  std::vector<double> f_tilde(m);
  for (std::size_t k = 0; k < m; ++k) f_tilde[k] = profile.integrands[k] * profile.radii[k];

  // trapezoid in log rho: int f drho = int (f * rho) dlog(rho)
  double value = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    double dlog = std::log(profile.radii[k + 1] / profile.radii[k]);
    value += 0.5 * (f_tilde[k] + f_tilde[k + 1]) * dlog;
  }
  res.value = value;

  double log_sum = 0.0, pos_min = std::numeric_limits<double>::infinity(), pos_max = 0.0;
  std::size_t pos = 0;
  for (double t : f_tilde)
    if (t > 0.0) {
      log_sum += std::log(t);
      pos_min = std::min(pos_min, t);
      pos_max = std::max(pos_max, t);
      ++pos;
    }
  res.all_zero = pos == 0;
  if (res.all_zero) {
    res.diagnostic = 0.0;
    res.spread = 1.0;
    res.note = "integrand vanished at every level";
    return res;
  }
  res.diagnostic = std::exp(log_sum / pos);
  res.spread = pos_max / pos_min;

  if (pos >= 2 && pos == m) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      double x = std::log(profile.radii[k]), y = std::log(f_tilde[k]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    res.decay_rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  res.note = res.decay_rate > 0.25
                 ? "integrand*rho decays toward 0: consistent with a convergent integral"
                 : "integrand*rho stays positive: consistent with a divergent integral";
  return res;
}

// ---------------------------------------------------------------------------
// Ball capacity scaling
// ---------------------------------------------------------------------------

ScalingReport ball_capacity_scaling(const Params& params, const std::vector<double>& radii,
                                    double R, const SolverConfig& config,
                                    double box_margin_factor) {
  params.validate();
  if (radii.size() < 3) throw std::invalid_argument("ball_capacity_scaling: need >= 3 radii");
  for (double r : radii)
    if (!(r > 0.0 && r <= R / 2.0))
      throw std::invalid_argument("ball_capacity_scaling: radii must satisfy 0 < r <= R/2");
  if (box_margin_factor == 0.0) box_margin_factor = params.n == 1 ? 8.0 : 2.5;

  ScalingReport rep;
  rep.outer_radius = R;
  rep.scaling_exponent = params.scaling_exponent();
  const Point origin{0.0, 0.0};

  for (double r : radii) {
    // One grid per radius: spacing proportional to r keeps the relative
    // resolution of the inner ball constant across the sweep.
    double half = box_margin_factor * R;
    int half_cells = static_cast<int>(std::ceil(half / (r / 4.0)));
    int cells = 2 * half_cells + 1;
    Point lo{-half, -half}, hi{half, half};
    auto grid = build_grid(lo, hi, {cells, params.n == 2 ? cells : 1}, params.n);
    NodeSet K = node_set(grid, Region::ball(origin, r, true));
    NodeSet omega = node_set(grid, Region::ball(origin, R, false));
    double cap = capacity(K, omega, KernelSpec::standard(), params, config).value;
    rep.radii.push_back(r);
    rep.caps.push_back(cap);
  }

  std::size_t m = rep.radii.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double x = std::log(rep.radii[k]), y = std::log(rep.caps[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.loglog_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

  double ratio_lo = std::numeric_limits<double>::infinity(), ratio_hi = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double v = rep.caps[k] * std::pow(std::log(R / rep.radii[k]), params.p - 1.0);
    ratio_lo = std::min(ratio_lo, v);
    ratio_hi = std::max(ratio_hi, v);
  }
  rep.log_case_ratio = ratio_hi / ratio_lo;
  return rep;
}

} // namespace nlpot
