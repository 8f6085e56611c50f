#include <doctest.h>

#include <cmath>
#include <fstream>

#include "nlpot/grid.hpp"
#include "nlpot/weights.hpp"
#include "oracles.hpp"

using namespace nlpot;

TEST_CASE("build_grid: 1D cell centers") {
  auto g = build_grid_1d(0.0, 1.0, 4);
  REQUIRE(g->size() == 4);
  CHECK(g->h == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g->center(0)[0] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(g->center(1)[0] == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(g->center(2)[0] == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(g->center(3)[0] == doctest::Approx(0.875).epsilon(1e-15));
}

TEST_CASE("build_grid: 2D 2x2") {
  auto g = build_grid_2d(point2(0, 0), point2(1, 1), 2, 2);
  REQUIRE(g->size() == 4);
  CHECK(g->h == doctest::Approx(0.5));
  // lexicographic, x-major
  CHECK(g->center(0) == Point{0.25, 0.25});
  CHECK(g->center(1) == Point{0.25, 0.75});
  CHECK(g->center(2) == Point{0.75, 0.25});
  CHECK(g->center(3) == Point{0.75, 0.75});
}

TEST_CASE("build_grid: degenerate inputs rejected") {
  CHECK_THROWS(build_grid_1d(0.0, 1.0, 0));
  CHECK_THROWS(build_grid_1d(1.0, 1.0, 4));
  CHECK_THROWS(build_grid(point1(0), point1(1), {4, 1}, 3));
  // non-uniform spacing across axes
  CHECK_THROWS(build_grid_2d(point2(0, 0), point2(1, 2), 4, 4));
}

TEST_CASE("node_set: ball membership at cell centers") {
  auto g = build_grid_1d(-1.0, 1.0, 8);
  NodeSet s = node_set(g, Region::ball(point1(0.0), 0.3, true));
  REQUIRE(s.count() == 2);
  for (std::size_t i : s.indices()) CHECK(std::abs(g->center(i)[0]) == doctest::Approx(0.125));
}

TEST_CASE("node_set: set algebra matches mask operations") {
  auto g = build_grid_1d(-1.0, 1.0, 16);
  Region omega = Region::ball(point1(0.25), 0.5, false);
  Region ball = Region::ball(point1(0.0), 0.4, true);
  NodeSet d_direct = node_set(g, Region::difference(ball, omega));
  NodeSet d_masks = node_set(g, ball).minus(node_set(g, omega));
  REQUIRE(d_direct.count() > 0);
  for (std::size_t i = 0; i < g->size(); ++i) CHECK(d_direct.contains(i) == d_masks.contains(i));
}

TEST_CASE("node_set: empty predicate") {
  auto g = build_grid_1d(0.0, 1.0, 8);
  CHECK(node_set(g, Region::empty()).count() == 0);
  CHECK(node_set(g, Region::all()).count() == 8);
}

TEST_CASE("assemble_weights: symmetry and positivity") {
  Params pr{1, 0.5, 2.0, 1.0};
  auto g = build_grid_1d(0.0, 1.0, 9);
  PairWeightMatrix W = assemble_weights(g, KernelSpec::standard(), pr);
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(W.at(i, i) == 0.0);
    for (std::size_t j = 0; j < g->size(); ++j) {
      CHECK(W.at(i, j) == W.at(j, i));
      if (i != j) CHECK(W.at(i, j) > 0.0);
    }
  }

  Params pr2{2, 0.4, 2.5, 2.0};
  auto g2 = build_grid_2d(point2(0, 0), point2(1, 1), 5, 5);
  KernelSpec coeff = KernelSpec::coefficient(CoefficientField::cosine_sum(0.5, 3.0));
  PairWeightMatrix W2 = assemble_weights(g2, coeff, pr2);
  for (std::size_t i = 0; i < g2->size(); ++i)
    for (std::size_t j = i + 1; j < g2->size(); ++j) CHECK(W2.at(i, j) == W2.at(j, i));
}

// Near weight of adjacent unit cells at p = n + sp: the displacement-weighted
// integrand is identically 1, so the weight equals the cell-pair measure.
TEST_CASE("assemble_weights: adjacent-cell closed form vs adaptive quadrature oracle") {
  Params pr{1, 0.5, 2.0, 1.0};
  auto g = build_grid_1d(0.0, 2.0, 2); // cells [0,1], [1,2]; centers 0.5, 1.5
  PairWeightMatrix W = assemble_weights(g, KernelSpec::standard(), pr);
  double q = pr.p - 1.0 - pr.s * pr.p; // = 0
  double oracle_integral = oracles::cell_pair_integral_adaptive(0, 1, 1, 2, q);
  double oracle_w = std::pow(1.0, -pr.p) * oracle_integral;
  CHECK(oracle_w == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(W.at(0, 1) == doctest::Approx(1.0).epsilon(1e-12));

  // generic exponents: closed form against the adaptive oracle, bands 1 and 2
  for (auto [s, p] : std::vector<std::pair<double, double>>{{0.3, 1.7}, {0.8, 2.0}, {0.6, 3.0}}) {
    double h = 0.25, qq = p - 1.0 - s * p;
    for (int m : {1, 2}) {
      double closed = cell_pair_integral_1d(h, m, qq);
      double adaptive = oracles::cell_pair_integral_adaptive(0, h, m * h, (m + 1) * h, qq);
      CHECK(closed == doctest::Approx(adaptive).epsilon(1e-8));
    }
  }
}

TEST_CASE("assemble_weights: identity coefficient is bit-identical to standard") {
  Params pr{1, 0.5, 2.0, 2.0};
  auto g = build_grid_1d(0.0, 1.0, 8);
  PairWeightMatrix Wstd = assemble_weights(g, KernelSpec::standard(), pr);
  PairWeightMatrix Wone =
      assemble_weights(g, KernelSpec::coefficient(CoefficientField::constant(1.0)), pr);
  for (std::size_t i = 0; i < g->size(); ++i)
    for (std::size_t j = 0; j < g->size(); ++j) CHECK(Wstd.at(i, j) == Wone.at(i, j));

  Params pr2{2, 0.4, 2.0, 2.0};
  auto g2 = build_grid_2d(point2(0, 0), point2(1, 1), 4, 4);
  PairWeightMatrix W2std = assemble_weights(g2, KernelSpec::standard(), pr2);
  PairWeightMatrix W2one =
      assemble_weights(g2, KernelSpec::coefficient(CoefficientField::constant(1.0)), pr2);
  for (std::size_t i = 0; i < g2->size(); ++i)
    for (std::size_t j = 0; j < g2->size(); ++j) CHECK(W2std.at(i, j) == W2one.at(i, j));
}

TEST_CASE("assemble_weights: ellipticity sandwich for coefficient kernels") {
  for (int dim : {1, 2}) {
    Params pr{dim, 0.45, 2.2, 2.0};
    auto g = dim == 1 ? build_grid_1d(-1.0, 1.0, 12)
                      : build_grid_2d(point2(-1, -1), point2(1, 1), 5, 5);
    PairWeightMatrix W0 = assemble_weights(g, KernelSpec::standard(), pr);
    for (auto coeff : {CoefficientField::cosine_sum(0.5, 3.0),
                       CoefficientField::product_phase(0.5 * std::log(2.0), 2.0)}) {
      PairWeightMatrix W = assemble_weights(g, KernelSpec::coefficient(coeff), pr);
      for (std::size_t i = 0; i < g->size(); ++i)
        for (std::size_t j = i + 1; j < g->size(); ++j) {
          CHECK(W.at(i, j) >= W0.at(i, j) / pr.lambda * (1.0 - 1e-12));
          CHECK(W.at(i, j) <= W0.at(i, j) * pr.lambda * (1.0 + 1e-12));
        }
    }
  }
}

TEST_CASE("assemble_weights: coefficient outside the ellipticity range is rejected") {
  Params pr{1, 0.5, 2.0, 1.2};
  auto g = build_grid_1d(0.0, 1.0, 4);
  CHECK_THROWS(
      assemble_weights(g, KernelSpec::coefficient(CoefficientField::cosine_sum(0.5, 1.0)), pr));
}

TEST_CASE("assemble_weights: exact scale covariance of every weight") {
  // Joint dilation of box and spacing multiplies each w_ij by lambda^{n-sp}.
  for (double lambda : {2.0, 3.0}) {
    Params pr{1, 0.7, 2.5, 1.0}; // sp = 1.75 > 1 exercises the near-field formula
    auto g1 = build_grid_1d(0.0, 1.0, 8);
    auto g2 = build_grid_1d(0.0, lambda, 8);
    PairWeightMatrix W1 = assemble_weights(g1, KernelSpec::standard(), pr);
    PairWeightMatrix W2 = assemble_weights(g2, KernelSpec::standard(), pr);
    double factor = std::pow(lambda, pr.scaling_exponent());
    for (std::size_t i = 0; i < g1->size(); ++i)
      for (std::size_t j = i + 1; j < g1->size(); ++j)
        CHECK(W2.at(i, j) == doctest::Approx(factor * W1.at(i, j)).epsilon(1e-12));
  }
  {
    Params pr{2, 0.4, 2.0, 1.0};
    auto g1 = build_grid_2d(point2(0, 0), point2(1, 1), 5, 5);
    auto g2 = build_grid_2d(point2(0, 0), point2(2, 2), 5, 5);
    PairWeightMatrix W1 = assemble_weights(g1, KernelSpec::standard(), pr);
    PairWeightMatrix W2 = assemble_weights(g2, KernelSpec::standard(), pr);
    double factor = std::pow(2.0, pr.scaling_exponent());
    for (std::size_t i = 0; i < g1->size(); ++i)
      for (std::size_t j = i + 1; j < g1->size(); ++j)
        CHECK(W2.at(i, j) == doctest::Approx(factor * W1.at(i, j)).epsilon(1e-12));
  }
}

TEST_CASE("assemble_weights: discrete energy of a smooth function settles under refinement") {
  Params pr{1, 0.5, 2.0, 1.0};
  std::vector<double> energies;
  for (int cells : {16, 32, 64, 128}) {
    auto g = build_grid_1d(-1.0, 1.0, cells);
    PairWeightMatrix W = assemble_weights(g, KernelSpec::standard(), pr);
    std::vector<double> u(g->size());
    for (std::size_t i = 0; i < g->size(); ++i)
      u[i] = std::exp(-3.0 * g->center(i)[0] * g->center(i)[0]);
    double e = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i)
      W.visit_row(i, [&](std::size_t j, double w) {
        double d = u[i] - u[j];
        e += w * d * d;
      });
    energies.push_back(e);
  }
  std::vector<double> diffs;
  for (std::size_t k = 0; k + 1 < energies.size(); ++k)
    diffs.push_back(std::abs(energies[k + 1] - energies[k]));
  CHECK(diffs[1] < diffs[0]);
  CHECK(diffs[2] < diffs[1]);
}

TEST_CASE("assemble_weights: degrees agree with row sums") {
  Params pr{1, 0.3, 2.0, 1.0};
  auto g = build_grid_1d(0.0, 1.0, 10);
  PairWeightMatrix W = assemble_weights(g, KernelSpec::standard(), pr);
  for (std::size_t i = 0; i < g->size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < g->size(); ++j) s += W.at(i, j);
    CHECK(W.degree(i) == doctest::Approx(2.0 * s).epsilon(1e-14));
  }
}

TEST_CASE("weights serialization: documented layout") {
  Params pr{1, 0.5, 2.0, 1.0};
  auto g = build_grid_1d(0.0, 1.0, 5);
  PairWeightMatrix W = assemble_weights(g, KernelSpec::standard(), pr);
  write_nodes_csv(*g, "/tmp/nlpot_nodes_test.csv");
  write_weights_csv(W, "/tmp/nlpot_weights_test.csv");
  std::ifstream nodes("/tmp/nlpot_nodes_test.csv"), weights("/tmp/nlpot_weights_test.csv");
  std::string line;
  std::getline(nodes, line);
  CHECK(line == "index,x");
  std::getline(weights, line);
  CHECK(line == "i,j,w");
  std::size_t rows = 0;
  while (std::getline(weights, line)) ++rows;
  CHECK(rows == 5 * 4 / 2);
}
