#pragma once

#include <string>
#include <vector>

#include "nlpot/capacity.hpp"
#include "nlpot/geometry.hpp"
#include "nlpot/params.hpp"

namespace nlpot {

/// Radial mass profile rho -> mu(closed ball of radius rho about a center).
/// Either one of the declared analytic shapes or the empirical cumulative
/// profile of a grid Measure.
class RadialMeasureProfile {
 public:
  static RadialMeasureProfile zero();
  /// Unit shell: mass concentrated at the given distance from the center.
  static RadialMeasureProfile dirac_shell(double distance, double mass);
  /// Mass spread over a ball: mu(B_rho) = mass * min(1, (rho/radius)^n).
  static RadialMeasureProfile uniform_ball(double radius, double mass, int dim);
  /// mu(B_rho) = coeff * rho^exponent.
  static RadialMeasureProfile power_law(double coeff, double exponent);
  /// Cumulative mass of a grid measure about the center.
  static RadialMeasureProfile empirical(const Measure& mu, Point center);

  double mass_within(double rho) const;
  /// inf { rho : mu(B_rho) > 0 } (+inf for the zero profile).
  double support_radius() const;
  /// Radii where the profile kinks or jumps (quadrature panel splits).
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  double total_mass() const { return total_; }

 private:
  enum class Kind { Zero, Dirac, UniformBall, PowerLaw, Empirical };
  Kind kind_ = Kind::Zero;
  double a_ = 0.0, b_ = 0.0; // shape parameters
  int dim_ = 1;
  double total_ = 0.0;
  std::vector<double> radii_;  // empirical: sorted distinct node distances
  std::vector<double> cumul_;  // empirical: cumulative mass at radii_
  std::vector<double> breakpoints_;
};

struct WolffResult {
  double value = 0.0;
  bool divergent = false;
};

/// Wolff potential int_0^r (mu(B_rho)/rho^{n-sp})^{1/(p-1)} drho/rho on a
/// logarithmic panel grid. Non-integrable behavior at 0 (integrand * rho
/// bounded below) sets the divergent flag; the value is +inf in that case.
WolffResult wolff_potential(const RadialMeasureProfile& profile, double r, const Params& params,
                            int log_panels = 200);

/// Per-level record of the Wiener-criterion capacity profile: radii rho_k,
/// capacities of D_{rho_k} = closure(B_rho) \ Omega in B_{2 rho_k}, and the
/// integrands (cap_k / rho_k^{n-sp})^{1/(p-1)} / rho_k.
struct WienerProfile {
  std::vector<double> radii;
  std::vector<double> caps;
  std::vector<double> integrands;
  std::vector<double> level_h;      ///< grid spacing used per level
  std::vector<int> level_nodes;
  bool all_empty = false;           ///< D_rho contained no node at any level
};

struct WienerGridOptions {
  int cells_across_annulus = 8; ///< resolution floor: h <= rho / this
  double box_half_factor = 2.5; ///< grid half-width = factor * rho (covers B_{2 rho})
};

/// Build the Wiener profile for levels of a geometric radius ladder in
/// [rho_min, rho_max]. Each level re-grids around x0 (odd cell counts, so a
/// node sits exactly at x0) and computes the capacity with the standard
/// kernel. Levels with the same box-to-rho geometry are exact dilations of
/// each other, so scale-invariant domains give scale-stable integrands.
WienerProfile wiener_profile(const Region& omega, Point x0, double rho_min, double rho_max,
                             int levels, const Params& params, const SolverConfig& config,
                             const WienerGridOptions& opts = {});

/// Wiener profile evaluated on subgrids of an existing grid (same spacing and
/// node positions). Use when the domain has grid-cell-sized features (a
/// one-cell puncture, a random cell mask) that per-level re-gridding would
/// rescale or miss.
WienerProfile wiener_profile_fixed_grid(const Region& omega, const Grid& base, Point x0,
                                        const std::vector<double>& radii, const Params& params,
                                        const SolverConfig& config);

struct WienerIntegralResult {
  double value = 0.0;       ///< trapezoid in log(rho) over the sampled range
  double diagnostic = 0.0;  ///< geometric mean of integrand * rho (0 if all zero)
  double spread = 1.0;      ///< max/min ratio of positive integrand * rho
  double decay_rate = 0.0;  ///< fitted slope of log(integrand * rho) vs log(rho)
  bool all_zero = true;
  std::string note;
};

/// Integrate the sampled profile and report the divergence diagnostic: a
/// strictly positive stable value of integrand * rho indicates logarithmic
/// divergence of the full integral; decay like rho^eps indicates convergence.
WienerIntegralResult wiener_integral(const WienerProfile& profile);

struct ScalingReport {
  std::vector<double> radii;
  std::vector<double> caps;
  double loglog_slope = 0.0;   ///< least-squares slope of log cap vs log r
  double scaling_exponent = 0.0; ///< n - sp for reference
  double log_case_ratio = 0.0; ///< max/min of cap * log(R/r)^{p-1} (n == sp case)
  double outer_radius = 0.0;
};

/// Capacities cap(closed B_r, B_R) across the radius list (standard kernel),
/// re-gridding per radius with spacing proportional to r; the log-log slope
/// probes the scaling law in r. box_margin_factor pads the computational box
/// to box_margin_factor * R so truncated exterior interactions cannot skew
/// the small-r asymptotics (0 picks 8 in 1D, 2.5 in 2D).
ScalingReport ball_capacity_scaling(const Params& params, const std::vector<double>& radii,
                                    double R, const SolverConfig& config,
                                    double box_margin_factor = 0.0);

} // namespace nlpot
