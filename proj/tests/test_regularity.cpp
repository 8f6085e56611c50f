#include <doctest.h>

#include <cmath>

#include "nlpot/regularity.hpp"
#include "nlpot/rng.hpp"

using namespace nlpot;

namespace {

/// Dirichlet solve on the family geometry at one resolution (mirrors the
/// probe's internal setup).
Solution family_solve(const DomainFamily& fam, const BoundaryDataSpec& g, const Params& pr,
                      int res, NodeSet* omega_out = nullptr,
                      std::shared_ptr<const Grid>* grid_out = nullptr) {
  double h = 2.5 / res;
  int cells = res + 1 - (res % 2);
  double half = cells * h / 2.0;
  auto grid = build_grid(Point{-half, -half}, Point{half, half},
                         {cells, pr.n == 2 ? cells : 1}, pr.n);
  NodeSet omega = node_set(grid, fam.omega_region(pr.n, h));
  DirichletProblem pb;
  pb.weights = std::make_shared<PairWeightMatrix>(assemble_weights(grid, KernelSpec::standard(), pr));
  pb.free = omega;
  pb.boundary_values.assign(grid->size(), 0.0);
  for (std::size_t i = 0; i < grid->size(); ++i)
    if (!omega.contains(i)) pb.boundary_values[i] = g.eval(grid->center(i), pr.n);
  if (omega_out) *omega_out = omega;
  if (grid_out) *grid_out = grid;
  Solution sol = solve(pb, SolverConfig{});
  sol.u.far_field = g.far_field(pr.n);
  return sol;
}

} // namespace

TEST_CASE("boundary_oscillation: constants and resolution floor") {
  Params pr{1, 0.5, 2.0, 1.0};
  DomainFamily fam;
  fam.kind = DomainFamily::Kind::HalfSpaceComplement;
  BoundaryDataSpec g;
  g.kind = BoundaryDataSpec::Kind::Constant;
  g.value = 3.0;
  NodeSet omega;
  Solution sol = family_solve(fam, g, pr, 32, &omega);
  auto osc = boundary_oscillation(sol, omega, point1(0.0), {0.1, 0.3});
  for (const auto& rec : osc) {
    CHECK(rec.sup == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(rec.inf == doctest::Approx(3.0).epsilon(1e-10));
  }
  CHECK_THROWS(boundary_oscillation(sol, omega, point1(0.0), {1e-6}));
}

TEST_CASE("boundary_oscillation: sup/inf monotone in rho") {
  Params pr{1, 0.4, 2.0, 1.0};
  DomainFamily fam;
  fam.kind = DomainFamily::Kind::HalfSpaceComplement;
  BoundaryDataSpec g;
  g.kind = BoundaryDataSpec::Kind::ClampedLinear;
  g.value = 1.0;
  g.direction = point1(-1.0);
  NodeSet omega;
  Solution sol = family_solve(fam, g, pr, 48, &omega);
  auto osc = boundary_oscillation(sol, omega, point1(0.0), {0.11, 0.2, 0.4, 0.8});
  for (std::size_t k = 0; k + 1 < osc.size(); ++k) {
    CHECK(osc[k].sup <= osc[k + 1].sup + 1e-14);
    CHECK(osc[k].inf >= osc[k + 1].inf - 1e-14);
  }
}

TEST_CASE("compute_Ml: hand grid and monotonicity") {
  Params pr{1, 0.5, 2.0, 1.0};
  auto grid = build_grid_1d(0.0, 3.0, 3);
  DirichletProblem pb;
  pb.weights = std::make_shared<PairWeightMatrix>(assemble_weights(grid, KernelSpec::standard(), pr));
  pb.free = NodeSet(grid);
  pb.free.set(1);
  pb.boundary_values = {0.0, 0.0, 5.0};
  Solution sol = solve(pb, SolverConfig{});
  sol.u.values = {0.0, 2.0, 5.0};
  CHECK(compute_Ml(sol, 1.0, 10.0, point1(1.5)) == doctest::Approx(4.0));
  CHECK(compute_Ml(sol, 10.0, 10.0, point1(1.5)) == 0.0); // u <= l everywhere
  CHECK_THROWS(compute_Ml(sol, 1.0, 0.01, point1(-5.0))); // empty ball

  Rng rng(5);
  for (auto& v : sol.u.values) v = rng.uniform(-1, 1);
  double prev = compute_Ml(sol, 0.1, 0.6, point1(1.5));
  for (double r : {1.0, 1.6, 2.5}) {
    double cur = compute_Ml(sol, 0.1, r, point1(1.5));
    CHECK(cur >= prev - 1e-15);
    prev = cur;
  }
}

TEST_CASE("check_key_lemma: half-space with interior bump across dyadic radii") {
  Params pr{1, 0.45, 2.0, 1.0};
  DomainFamily fam;
  fam.kind = DomainFamily::Kind::HalfSpaceComplement;
  // compactly supported data peaked away from the anchor, so M_l grows in r
  // and the far-field transform is exact
  BoundaryDataSpec g;
  g.kind = BoundaryDataSpec::Kind::Bump;
  g.center = point1(1.0);
  g.radius = 0.45;
  g.height = 1.0;
  Region omega = fam.omega_region(pr.n, 0.0);
  Solution sol = family_solve(fam, g, pr, 96);

  double l = 1e-3;
  double prev_ratio = -1.0;
  for (double rho : {0.04, 0.08, 0.16}) {
    KeyLemmaReport rep = check_key_lemma(sol, omega, l, rho, point1(0.0), pr, SolverConfig{});
    REQUIRE(rep.defined);
    CHECK(rep.ratio > 0.0);
    CHECK(std::isfinite(rep.ratio));
    if (prev_ratio > 0.0) {
      CHECK(rep.ratio <= 10.0 * prev_ratio);
      CHECK(rep.ratio >= prev_ratio / 10.0);
    }
    prev_ratio = rep.ratio;
  }

  // refinement stability: doubled resolution moves the ratio by < 50%
  Solution fine = family_solve(fam, g, pr, 192);
  KeyLemmaReport a = check_key_lemma(sol, omega, l, 0.08, point1(0.0), pr, SolverConfig{});
  KeyLemmaReport b = check_key_lemma(fine, omega, l, 0.08, point1(0.0), pr, SolverConfig{});
  CHECK(std::abs(b.ratio - a.ratio) <= 0.5 * std::max(a.ratio, b.ratio));
}

TEST_CASE("check_key_lemma: undefined quotient reported, not thrown") {
  Params pr{1, 0.45, 2.0, 1.0};
  DomainFamily fam;
  fam.kind = DomainFamily::Kind::HalfSpaceComplement;
  BoundaryDataSpec g;
  g.kind = BoundaryDataSpec::Kind::Bump;
  g.center = point1(1.0);
  g.radius = 0.45;
  Region omega = fam.omega_region(pr.n, 0.0);
  Solution sol = family_solve(fam, g, pr, 48);
  KeyLemmaReport rep = check_key_lemma(sol, omega, 50.0, 0.1, point1(0.0), pr, SolverConfig{});
  CHECK_FALSE(rep.defined); // u <= l globally
}

TEST_CASE("weak_harnack_diagnostic: positive constant has ratio one") {
  Params pr{1, 0.4, 2.0, 1.0};
  DomainFamily fam;
  fam.kind = DomainFamily::Kind::HalfSpaceComplement;
  BoundaryDataSpec g;
  g.kind = BoundaryDataSpec::Kind::Constant;
  g.value = 2.0;
  Solution sol = family_solve(fam, g, pr, 32);
  WeakHarnackReport rep = weak_harnack_diagnostic(sol, point1(0.0), 0.4, 0.8, pr);
  CHECK_FALSE(rep.zero_over_zero);
  CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("weak_harnack_diagnostic: L-potential of a centered ball") {
  Params pr{1, 0.4, 2.0, 1.0};
  std::vector<double> ratios;
  for (int cells : {64, 128}) {
    auto grid = build_grid_1d(-1.0, 1.0, cells);
    NodeSet K = node_set(grid, Region::ball(point1(0.0), 0.15, true));
    NodeSet omega = node_set(grid, Region::ball(point1(0.0), 0.8, false));
    CapacityResult res = capacity(K, omega, KernelSpec::standard(), pr, SolverConfig{});
    WeakHarnackReport rep = weak_harnack_diagnostic(res.solution, point1(0.4), 0.35, 0.9, pr);
    CHECK_FALSE(rep.zero_over_zero);
    CHECK(rep.ratio > 0.0);
    CHECK(std::isfinite(rep.ratio));
    ratios.push_back(rep.ratio);
  }
  CHECK(ratios[1] <= 2.0 * ratios[0]);
  CHECK(ratios[1] >= 0.5 * ratios[0]);
}

TEST_CASE("weak_harnack_diagnostic: exponent window enforced") {
  Params pr{1, 0.4, 2.0, 1.0}; // sp = 0.8 < n: t < (p-1)n/(n-sp) = 5
  DomainFamily fam;
  fam.kind = DomainFamily::Kind::HalfSpaceComplement;
  BoundaryDataSpec g;
  g.kind = BoundaryDataSpec::Kind::Constant;
  g.value = 1.0;
  Solution sol = family_solve(fam, g, pr, 32);
  CHECK_THROWS(weak_harnack_diagnostic(sol, point1(0.0), 0.4, 6.0, pr));
  CHECK_THROWS(weak_harnack_diagnostic(sol, point1(0.0), 0.4, -1.0, pr));
}

TEST_CASE("domain families: omega regions behave at the anchor") {
  double h = 0.05;
  // half-space: anchor on the boundary, exterior to the left
  DomainFamily hs;
  hs.kind = DomainFamily::Kind::HalfSpaceComplement;
  Region r1 = hs.omega_region(1, h);
  CHECK(r1.contains(point1(0.3), 1));
  CHECK_FALSE(r1.contains(point1(-0.3), 1));

  DomainFamily cone;
  cone.kind = DomainFamily::Kind::Cone;
  cone.aperture = M_PI / 2.0;
  Region r2 = cone.omega_region(2, h);
  CHECK_FALSE(r2.contains(point2(-0.3, 0.0), 2));     // on the cone axis
  CHECK(r2.contains(point2(0.3, 0.0), 2));            // opposite side
  CHECK(r2.contains(point2(-0.3, 0.31), 2));          // just outside aperture pi/2
  CHECK_FALSE(r2.contains(point2(-0.3, 0.29), 2));    // just inside

  DomainFamily cusp;
  cusp.kind = DomainFamily::Kind::PowerCusp;
  cusp.kappa = 2.0;
  Region r3 = cusp.omega_region(2, h);
  CHECK_FALSE(r3.contains(point2(-0.3, 0.0), 2));
  CHECK_FALSE(r3.contains(point2(-0.3, 0.08), 2)); // inside |y| <= x^2 = 0.09
  CHECK(r3.contains(point2(-0.3, 0.1), 2));        // outside the cusp

  DomainFamily punct;
  punct.kind = DomainFamily::Kind::PuncturedBall;
  Region r4 = punct.omega_region(2, h);
  CHECK_FALSE(r4.contains(point2(0.0, 0.0), 2));
  CHECK(r4.contains(point2(2 * h, 0.0), 2));

  DomainFamily dense;
  dense.kind = DomainFamily::Kind::MeasureDenseComplement;
  dense.fraction = 0.5;
  dense.seed = 3;
  Region r5 = dense.omega_region(2, h);
  CHECK_FALSE(r5.contains(point2(0.0, 0.0), 2)); // anchor cell always removed
  // deterministic: same seed gives the same mask
  Region r5b = dense.omega_region(2, h);
  for (double x : {-0.3, -0.1, 0.1, 0.3})
    for (double y : {-0.3, -0.1, 0.1, 0.3})
      CHECK(r5.contains(point2(x, y), 2) == r5b.contains(point2(x, y), 2));
}

TEST_CASE("probe_regularity: constant data classifies regular trivially") {
  Params pr{1, 0.5, 2.0, 1.0};
  DomainFamily fam;
  fam.kind = DomainFamily::Kind::HalfSpaceComplement;
  BoundaryDataSpec g;
  g.kind = BoundaryDataSpec::Kind::Constant;
  g.value = 4.2;
  ProbeOptions opts;
  opts.radii = {0.4, 0.8};
  opts.wiener_levels = 2;
  ProbeReport rep = probe_regularity(fam, g, pr, {16, 24, 32}, SolverConfig{}, opts);
  CHECK(rep.cls == ProbeClassification::RegularConsistent);
  CHECK(rep.g_at_anchor == doctest::Approx(4.2));
  for (const auto& lv : rep.levels) CHECK(lv.deviation <= 1e-9);
}

TEST_CASE("probe_regularity: half-space deviation shrinks with resolution") {
  Params pr{1, 0.4, 2.0, 1.0};
  DomainFamily fam;
  fam.kind = DomainFamily::Kind::HalfSpaceComplement;
  BoundaryDataSpec g;
  g.kind = BoundaryDataSpec::Kind::ClampedLinear;
  g.value = 1.0;
  g.direction = point1(-1.0);
  ProbeOptions opts;
  opts.radii = {0.25, 0.5};
  opts.wiener_levels = 3;
  ProbeReport rep = probe_regularity(fam, g, pr, {24, 48, 96}, SolverConfig{}, opts);
  REQUIRE(rep.levels.size() == 3);
  CHECK(rep.levels[1].deviation < rep.levels[0].deviation);
  CHECK(rep.levels[2].deviation < rep.levels[1].deviation);
  CHECK(rep.cls == ProbeClassification::RegularConsistent);
}
