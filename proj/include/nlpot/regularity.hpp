#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlpot/dirichlet.hpp"
#include "nlpot/potential_theory.hpp"

namespace nlpot {

/// Parametric domain families anchored at the origin, all contained in the
/// unit ball. Families whose exterior feature is a single grid cell (the
/// puncture, the random dense mask) take the solution grid spacing h so the
/// feature has a fixed, resolution-dependent physical size.
struct DomainFamily {
  enum class Kind { HalfSpaceComplement, Cone, PowerCusp, PuncturedBall, MeasureDenseComplement };
  Kind kind = Kind::HalfSpaceComplement;
  double aperture = M_PI / 2.0; ///< Cone
  double kappa = 2.0;           ///< PowerCusp exponent > 1
  double fraction = 0.5;        ///< MeasureDenseComplement removal fraction
  std::uint64_t seed = 1;       ///< MeasureDenseComplement cell selection
  Point anchor{0.0, 0.0};

  Region omega_region(int dim, double h) const;
};

/// Analytic boundary data evaluated at nodes.
struct BoundaryDataSpec {
  enum class Kind { Constant, ClampedLinear, Bump, IndicatorBall };
  Kind kind = Kind::Constant;
  double value = 1.0;            ///< Constant
  Point direction{-1.0, 0.0};    ///< ClampedLinear: clamp(value + direction.x, lo, hi)
  double clamp_lo = 0.0, clamp_hi = 1.0;
  Point center{0.0, 0.0};        ///< Bump / IndicatorBall
  double radius = 0.25;
  double height = 1.0;

  double eval(const Point& x, int dim) const;
  /// Far-field model when exactly representable (constant/compactly
  /// supported data); a clamped linear ramp has direction-dependent limits,
  /// so its model is marked inexact.
  FarFieldModel far_field(int dim) const;
  bool far_field_exact() const { return kind != Kind::ClampedLinear; }
};

struct OscRecord {
  double rho = 0.0;
  double sup = 0.0;
  double inf = 0.0;
};

/// sup/inf of u over free nodes of Omega within the closed ball B_rho(x0),
/// per radius. Throws if the smallest ball contains no free node.
std::vector<OscRecord> boundary_oscillation(const Solution& u, const NodeSet& omega,
                                            const Point& x0, const std::vector<double>& radii);

/// M_l(r): max over all nodes (constrained included) in the closed ball
/// B_r(x0) of (u_i - l)_+.
double compute_Ml(const Solution& u, double l, double r, const Point& x0);

struct KeyLemmaReport {
  bool defined = false; ///< false when M_l(4 rho) = 0 (undefined quotient)
  double ratio = 0.0;   ///< cap / (rho^{n-sp} * quotient^{p-1})
  double cap = 0.0;
  double Ml_rho = 0.0;
  double Ml_4rho = 0.0;
  double tail_neg = 0.0;
};

/// Empirical constant of the key capacity estimate at one radius: compares
/// cap(D_rho, B_{2rho}) against rho^{n-sp} ((M_l(4rho) - M_l(rho) +
/// Tail((u_{l,4rho})_-; x0, 4rho)) / M_l(4rho))^{p-1} on the solution grid.
KeyLemmaReport check_key_lemma(const Solution& u, const Region& omega, double l, double rho,
                               const Point& x0, const Params& params, const SolverConfig& config);

struct WeakHarnackReport {
  bool zero_over_zero = false;
  double ratio = 0.0;
  double lhs = 0.0; ///< Phi_t of u_m^- over B_{R/2}
  double rhs = 0.0; ///< min over B_{R/4} of u_m^- plus Tail((u_m^-)_-; x0, R)
};

/// LHS/RHS ratio of the boundary weak Harnack inequality with the empirical
/// constant left free. u must be >= 0 on B_R nodes; u_m^- = min(u, m) with m
/// the min of u over non-free nodes in B_R.
WeakHarnackReport weak_harnack_diagnostic(const Solution& u, const Point& x0, double R, double t,
                                          const Params& params);

struct ProbeOptions {
  std::vector<double> radii{0.05, 0.1, 0.2};
  double wiener_rho_min = 0.03125;
  double wiener_rho_max = 0.25;
  int wiener_levels = 4;
  double gap_fraction = 0.1; ///< "stays away from the data" threshold
};

struct ProbeLevel {
  int resolution = 0;
  double h = 0.0;
  std::vector<OscRecord> osc;
  double deviation = 0.0;    ///< max |u - g(x0)| over free nodes in the smallest ball
  double adjacent_max = 0.0; ///< max u over free nodes within 1.8 h of the anchor
  WienerProfile wiener;
  WienerIntegralResult diag;
  Solution solution;
};

enum class ProbeClassification { RegularConsistent, IrregularConsistent, Inconclusive };

struct ProbeReport {
  std::vector<ProbeLevel> levels;
  ProbeClassification cls = ProbeClassification::Inconclusive;
  double g_at_anchor = 0.0;
  double gap = 0.0;
};

const char* to_string(ProbeClassification c);

/// End-to-end experiment: solve the Dirichlet problem on the family at each
/// resolution, record boundary oscillation around the anchor and the Wiener
/// capacity diagnostic, and classify.
///
/// Classification (desk-scale corroboration, never proof): regular-consistent
/// when the attainment deviation at the smallest radius shrinks strictly
/// across >= 3 resolutions (or vanishes outright) and the diagnostic stays
/// bounded below; irregular-consistent when the deviation stays above the
/// gap at every resolution and the diagnostic decays; otherwise inconclusive.
ProbeReport probe_regularity(const DomainFamily& family, const BoundaryDataSpec& g,
                             const Params& params, const std::vector<int>& resolutions,
                             const SolverConfig& config, const ProbeOptions& opts = {});

} // namespace nlpot
