// Acceptance suite: every criterion prints one PASS/FAIL line with the
// measured quantity and its pinned threshold. The process exits nonzero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "nlpot/capacity.hpp"
#include "nlpot/inequalities.hpp"
#include "nlpot/potential_theory.hpp"
#include "nlpot/regularity.hpp"
#include "nlpot/rng.hpp"

using namespace nlpot;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void run_criterion(const std::string& name, const std::function<Outcome()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s  %s: %s  [%.1fs]\n", out.pass ? "PASS" : "FAIL", name.c_str(),
              out.detail.c_str(), secs);
  std::fflush(stdout);
  if (!out.pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome criterion1_scaling_supercritical() {
  Params pr{1, 0.3, 2.0, 1.0};
  ScalingReport rep =
      ball_capacity_scaling(pr, {1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8}, 1.0, SolverConfig{});
  double target = pr.scaling_exponent(); // 0.4
  bool pass = rep.loglog_slope >= 0.85 * target && rep.loglog_slope <= 1.15 * target;
  return {pass, "slope " + fmt(rep.loglog_slope) + " vs " + fmt(target) + " +-15%"};
}

Outcome criterion2_scaling_other_cases() {
  SolverConfig cfg;
  Params sub{1, 0.8, 2.0, 1.0}; // n < sp
  ScalingReport flat =
      ball_capacity_scaling(sub, {1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8}, 1.0, cfg);
  bool flat_ok = std::abs(flat.loglog_slope) <= 0.1;

  Params crit{1, 0.5, 2.0, 1.0}; // n = sp
  ScalingReport logc =
      ball_capacity_scaling(crit, {1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8}, 1.0, cfg);
  // cap * log(R/r)^{p-1} within +-20% of a common constant
  double spread_to_mean = std::sqrt(logc.log_case_ratio);
  bool log_ok = spread_to_mean <= 1.2;
  return {flat_ok && log_ok, "flat slope " + fmt(flat.loglog_slope) + " (|.| <= 0.1); log-case +-" +
                                 fmt((spread_to_mean - 1.0) * 100.0) + "% (<= 20%)"};
}

Outcome criterion3_dilation_covariance() {
  SolverConfig cfg;
  double worst = 0.0;
  {
    Params pr{1, 0.3, 2.0, 1.0};
    auto g1 = build_grid_1d(-1.0, 1.0, 64);
    auto g2 = build_grid_1d(-2.0, 2.0, 64);
    double c1 = capacity(node_set(g1, Region::ball(point1(0.0), 0.2, true)),
                         node_set(g1, Region::ball(point1(0.0), 0.8, false)),
                         KernelSpec::standard(), pr, cfg)
                    .value;
    double c2 = capacity(node_set(g2, Region::ball(point1(0.0), 0.4, true)),
                         node_set(g2, Region::ball(point1(0.0), 1.6, false)),
                         KernelSpec::standard(), pr, cfg)
                    .value;
    worst = std::max(worst,
                     std::abs(c2 / (std::pow(2.0, pr.scaling_exponent()) * c1) - 1.0));
  }
  {
    Params pr{2, 0.4, 2.0, 1.0};
    auto g1 = build_grid_2d(point2(-1, -1), point2(1, 1), 20, 20);
    auto g2 = build_grid_2d(point2(-2, -2), point2(2, 2), 20, 20);
    double c1 = capacity(node_set(g1, Region::ball(point2(0, 0), 0.3, true)),
                         node_set(g1, Region::ball(point2(0, 0), 0.8, false)),
                         KernelSpec::standard(), pr, cfg)
                    .value;
    double c2 = capacity(node_set(g2, Region::ball(point2(0, 0), 0.6, true)),
                         node_set(g2, Region::ball(point2(0, 0), 1.6, false)),
                         KernelSpec::standard(), pr, cfg)
                    .value;
    worst = std::max(worst,
                     std::abs(c2 / (std::pow(2.0, pr.scaling_exponent()) * c1) - 1.0));
  }
  return {worst <= 1e-10, "worst relative mismatch " + fmt(worst) + " (<= 1e-10)"};
}

std::vector<IneqBatteryEntry> g_battery; // shared by criteria 4 and 5

Outcome criterion4_exact_inequalities() {
  g_battery = run_ineq_battery(100000, 2026);
  std::size_t points = 0, failures = 0, worst_count = 0;
  for (const auto& e : g_battery) {
    if (!e.exact) continue;
    ++points;
    if (e.report.violations > 0) {
      ++failures;
      worst_count = std::max(worst_count, e.report.violations);
    }
  }
  return {failures == 0, fmt(static_cast<double>(points)) + " parameter points x 1e5 samples, " +
                             fmt(static_cast<double>(failures)) + " with violations"};
}

Outcome criterion5_existential_inequalities() {
  std::size_t points = 0, failures = 0;
  for (const auto& e : g_battery) {
    if (e.exact) continue;
    ++points;
    bool ok = e.report.feasible && e.report.stability >= 0.5 && e.report.stability <= 2.0;
    if (!ok) ++failures;
  }
  return {points > 0 && failures == 0,
          fmt(static_cast<double>(points)) + " parameter points, " +
              fmt(static_cast<double>(failures)) + " without a stable feasible (c,C)"};
}

Outcome criterion6_comparison_principle() {
  Rng rng(99);
  int pairs = 0, violations = 0;
  double worst = -1e300;
  for (double p : {1.5, 2.0, 3.0}) {
    Params pr{1, 0.45, p, 1.0};
    auto grid = build_grid_1d(0.0, 1.0, 32);
    auto W = std::make_shared<PairWeightMatrix>(
        assemble_weights(grid, KernelSpec::standard(), pr));
    NodeSet free(grid);
    for (std::size_t i = 4; i + 4 < grid->size(); ++i) free.set(i);
    for (int trial = 0; trial < 34; ++trial) {
      DirichletProblem lo, hi;
      lo.weights = hi.weights = W;
      lo.free = hi.free = free;
      lo.boundary_values.assign(grid->size(), 0.0);
      hi.boundary_values.assign(grid->size(), 0.0);
      for (std::size_t i = 0; i < grid->size(); ++i)
        if (!free.contains(i)) {
          lo.boundary_values[i] = rng.uniform(-1.0, 1.0);
          hi.boundary_values[i] = lo.boundary_values[i] + rng.uniform(0.0, 1.0);
        }
      ComparisonReport rep = check_comparison(solve(hi, SolverConfig{}), solve(lo, SolverConfig{}));
      ++pairs;
      if (!rep.holds) ++violations;
      worst = std::max(worst, rep.max_violation);
    }
  }
  return {violations == 0, fmt(pairs) + " ordered pairs (p in {1.5,2,3}), " + fmt(violations) +
                               " violations beyond 2x solver tol; worst " + fmt(worst)};
}

Outcome criterion7_potential_mass_identity() {
  Rng rng(7);
  SolverConfig cfg;
  int configs = 0, failures = 0;
  double worst_rel = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    bool coeff = trial % 3 == 2;
    Params pr{1, rng.uniform(0.25, 0.75), trial % 2 == 0 ? 2.0 : rng.uniform(1.6, 2.6),
              coeff ? 2.0 : 1.0};
    KernelSpec kernel = coeff
                            ? KernelSpec::coefficient(CoefficientField::cosine_sum(
                                  0.5, rng.uniform(1.0, 4.0)))
                            : KernelSpec::standard();
    auto grid = build_grid_1d(-1.0, 1.0, 40);
    double cK = rng.uniform(-0.3, 0.3), rK = rng.uniform(0.08, 0.25);
    NodeSet K = node_set(grid, Region::ball(point1(cK), rK, true));
    NodeSet omega = node_set(grid, Region::ball(point1(0.0), 0.85, false));
    K = K.intersect(omega);
    if (K.empty()) K.set(grid->size() / 2);
    ++configs;
    CapacityResult res = capacity(K, omega, kernel, pr, cfg);
    PairWeightMatrix W = assemble_weights(grid, kernel, pr);
    Measure mu = l_distribution(res.potential, K, W, pr, cfg.residual_tol);
    double rel = std::abs(mu.total() - res.value) / std::max(res.value, 1e-300);
    worst_rel = std::max(worst_rel, rel);
    bool masses_ok = true;
    for (std::size_t i = 0; i < W.size(); ++i)
      if (K.contains(i) && mu.masses[i] < -10.0 * cfg.residual_tol * W.degree(i))
        masses_ok = false;
    if (rel > 1e-6 || !masses_ok) ++failures;
  }
  return {failures == 0, fmt(configs) + " random K in Omega configs; worst relative gap " +
                             fmt(worst_rel) + " (<= 1e-6), masses >= -10 tol"};
}

Outcome criterion8_mecap() {
  Rng rng(13);
  SolverConfig cfg;
  int checks = 0, violations = 0;
  auto run_config = [&](const Params& pr, const KernelSpec& kernel,
                        std::shared_ptr<const Grid> grid, const NodeSet& K,
                        const NodeSet& omega) {
    CapacityResult res = capacity(K, omega, kernel, pr, cfg);
    PairWeightMatrix W = assemble_weights(grid, kernel, pr);
    Measure mu = l_distribution(res.potential, K, W, pr, cfg.residual_tol);
    NodeSet E(grid);
    for (std::size_t i : omega.indices())
      if (rng.chance(0.5)) E.set(i);
    MecapReport rep = check_mecap(mu, E, K, omega, pr, cfg, 0.05);
    ++checks;
    if (!rep.holds) ++violations;
  };

  for (int trial = 0; trial < 6; ++trial) { // 1D, alternating kernels
    bool coeff = trial % 2 == 1;
    Params pr{1, rng.uniform(0.3, 0.7), 2.0, coeff ? 2.0 : 1.0};
    KernelSpec kernel =
        coeff ? KernelSpec::coefficient(CoefficientField::cosine_sum(0.5, rng.uniform(1.0, 3.0)))
              : KernelSpec::standard();
    auto grid = build_grid_1d(-1.0, 1.0, 36);
    NodeSet K = node_set(grid, Region::ball(point1(rng.uniform(-0.2, 0.2)),
                                            rng.uniform(0.1, 0.25), true));
    NodeSet omega = node_set(grid, Region::ball(point1(0.0), 0.8, false));
    run_config(pr, kernel, grid, K.intersect(omega), omega);
  }
  for (int trial = 0; trial < 4; ++trial) { // 2D, half with the Lambda=2 kernel
    bool coeff = trial % 2 == 1;
    Params pr{2, 0.45, 2.0, coeff ? 2.0 : 1.0};
    KernelSpec kernel =
        coeff ? KernelSpec::coefficient(CoefficientField::cosine_sum(0.5, 2.0))
              : KernelSpec::standard();
    auto grid = build_grid_2d(point2(-1, -1), point2(1, 1), 14, 14);
    NodeSet K = node_set(grid, Region::ball(point2(rng.uniform(-0.15, 0.15), 0.0),
                                            rng.uniform(0.15, 0.3), true));
    NodeSet omega = node_set(grid, Region::ball(point2(0, 0), 0.8, false));
    run_config(pr, kernel, grid, K.intersect(omega), omega);
  }
  return {checks == 10 && violations == 0,
          fmt(checks) + " configs (incl. Lambda=2 coefficient kernels), " + fmt(violations) +
              " violations at 5%"};
}

Outcome criterion9_closed_forms() {
  Params pr{1, 0.5, 2.0, 1.0};
  auto grid = build_grid_1d(-2.0, 2.0, 256);
  DiscreteFunction u(grid, 1.0, FarFieldModel::constant(1.0));
  double t = tail(u, point1(0.0), 1.0, pr);
  bool tail_ok = std::abs(t - 2.0) <= 0.01 * 2.0;

  Params pw{1, 0.25, 2.0, 1.0};
  WolffResult w = wolff_potential(RadialMeasureProfile::dirac_shell(0.25, 1.0), 1.0, pw, 200);
  bool wolff_ok = !w.divergent && std::abs(w.value - 2.0) <= 1e-6;
  return {tail_ok && wolff_ok,
          "tail " + fmt(t) + " vs 2 (1%); Wolff " + fmt(w.value) + " vs 2 (1e-6)"};
}

Outcome criterion10_gradient_check() {
  Rng rng(17);
  auto grid = build_grid_1d(0.0, 1.0, 10);
  double worst = 0.0;
  for (double p : {1.2, 2.0, 3.5}) {
    Params pr{1, 0.5, p, 1.0};
    PairWeightMatrix W = assemble_weights(grid, KernelSpec::standard(), pr);
    DiscreteFunction u(grid);
    for (std::size_t i = 0; i < grid->size(); ++i)
      u[i] = 0.2 * static_cast<double>(i) + 0.05 * rng.uniform01();
    auto r = residual(u, W, pr);
    double eps = 1e-5;
    for (std::size_t i = 0; i < grid->size(); ++i) {
      // exact pairwise central difference of J (no global cancellation)
      double s = 0.0;
      W.visit_row(i, [&](std::size_t j, double wgt) {
        s += wgt * (std::pow(std::abs(u[i] + eps - u[j]), p) -
                    std::pow(std::abs(u[i] - eps - u[j]), p));
      });
      double fd = (2.0 / p) * s / (2.0 * eps);
      worst = std::max(worst, std::abs(r[i] - fd) / std::max({std::abs(fd), std::abs(r[i]), 1e-30}));
    }
  }
  return {worst <= 1e-5, "worst relative error " + fmt(worst) + " (<= 1e-5), p in {1.2,2,3.5}"};
}

Outcome criterion11_regularity_probes() {
  // (a) regular: 1D half-space complement, clamped linear data
  Params pr{1, 0.4, 2.0, 1.0};
  DomainFamily half;
  half.kind = DomainFamily::Kind::HalfSpaceComplement;
  BoundaryDataSpec ramp;
  ramp.kind = BoundaryDataSpec::Kind::ClampedLinear;
  ramp.value = 1.0;
  ramp.direction = point1(-1.0);
  ProbeOptions opts;
  opts.radii = {0.05, 0.1, 0.2};
  ProbeReport reg = probe_regularity(half, ramp, pr, {64, 128, 256}, SolverConfig{}, opts);
  bool osc_decreasing = reg.levels[1].deviation < reg.levels[0].deviation &&
                        reg.levels[2].deviation < reg.levels[1].deviation;

  // (b) irregular: 2D one-cell puncture with sp = 0.8
  Params pr2{2, 0.4, 2.0, 1.0};
  DomainFamily punct;
  punct.kind = DomainFamily::Kind::PuncturedBall;
  BoundaryDataSpec ind;
  ind.kind = BoundaryDataSpec::Kind::IndicatorBall;
  ind.center = point2(0, 0);
  ind.radius = 0.0; // exactly the puncture node
  ind.height = 1.0;
  ProbeOptions opts2;
  opts2.radii = {0.125, 0.25};
  opts2.wiener_rho_min = 0.0625;
  opts2.wiener_rho_max = 0.25;
  opts2.wiener_levels = 3;
  ProbeReport irr = probe_regularity(punct, ind, pr2, {32, 64, 128}, SolverConfig{}, opts2);
  bool below_half = true;
  for (const auto& lv : irr.levels) below_half = below_half && lv.adjacent_max < 0.5;
  double d01 = irr.levels[0].diag.diagnostic / irr.levels[1].diag.diagnostic;
  double d12 = irr.levels[1].diag.diagnostic / irr.levels[2].diag.diagnostic;
  bool decays = d01 >= 2.0 && d12 >= 2.0;

  std::string detail = "(a) deviations " + fmt(reg.levels[0].deviation) + " > " +
                       fmt(reg.levels[1].deviation) + " > " + fmt(reg.levels[2].deviation) +
                       "; (b) adjacent max " + fmt(irr.levels[2].adjacent_max) +
                       " (< 0.5), diagnostic decay x" + fmt(d01) + ", x" + fmt(d12) +
                       " (>= 2)";
  return {osc_decreasing && below_half && decays, detail};
}

Outcome criterion12_wiener_scale_stability() {
  SolverConfig cfg;
  Params pr{1, 0.5, 2.0, 1.0};
  Region half = Region::intersect(
      {Region::halfspace(point1(1.0), 0.0), Region::ball(point1(0.5), 0.5, false)});
  WienerProfile prof = wiener_profile(half, point1(0.0), 0.03125, 0.25, 4, pr, cfg);
  double lo = 1e300, hi = 0.0;
  for (std::size_t k = 0; k < prof.radii.size(); ++k) {
    double t = prof.integrands[k] * prof.radii[k];
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  double half_ratio = hi / lo;

  Params pr2{2, 0.4, 2.0, 1.0};
  DomainFamily cone;
  cone.kind = DomainFamily::Kind::Cone;
  cone.aperture = M_PI / 2.0;
  WienerProfile prof2 =
      wiener_profile(cone.omega_region(2, 0.0), point2(0, 0), 0.0625, 0.25, 3, pr2, cfg);
  double lo2 = 1e300, hi2 = 0.0;
  for (std::size_t k = 0; k < prof2.radii.size(); ++k) {
    double t = prof2.integrands[k] * prof2.radii[k];
    lo2 = std::min(lo2, t);
    hi2 = std::max(hi2, t);
  }
  double cone_ratio = hi2 / lo2;
  return {half_ratio <= 1.10 && cone_ratio <= 1.25,
          "half-space spread x" + fmt(half_ratio) + " (<= 1.10, 4 levels); cone spread x" +
              fmt(cone_ratio) + " (<= 1.25, 3 levels)"};
}

} // namespace

int main() {
  std::printf("nonlocal potential-theory laboratory: acceptance suite\n");
  run_criterion(" 1. capacity scaling, n > sp (slope of cap(B_r, B_1) vs r)",
                criterion1_scaling_supercritical);
  run_criterion(" 2. capacity scaling, n < sp flatness and n = sp log law",
                criterion2_scaling_other_cases);
  run_criterion(" 3. dilation covariance of capacity (relative 1e-10)",
                criterion3_dilation_covariance);
  run_criterion(" 4. exact-constant algebraic inequalities (1e5 samples/point)",
                criterion4_exact_inequalities);
  run_criterion(" 5. existential algebraic inequalities (stable (c,C) frontier)",
                criterion5_existential_inequalities);
  run_criterion(" 6. discrete comparison principle (>= 100 ordered pairs)",
                criterion6_comparison_principle);
  run_criterion(" 7. potential-mass identity (sum mu = E, 10 configs)",
                criterion7_potential_mass_identity);
  run_criterion(" 8. measure-capacity bound mu(E) <= Lambda cap(K cap E, Omega)",
                criterion8_mecap);
  run_criterion(" 9. tail and Wolff closed forms", criterion9_closed_forms);
  run_criterion("10. solver gradient vs central differences", criterion10_gradient_check);
  run_criterion("11. end-to-end regularity probes (regular 1D / irregular 2D)",
                criterion11_regularity_probes);
  run_criterion("12. Wiener profile scale stability (half-space, cone)",
                criterion12_wiener_scale_stability);
  std::printf("%d of 12 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
