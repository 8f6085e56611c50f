#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nlpot/discrete_function.hpp"
#include "nlpot/energy.hpp"
#include "nlpot/grid.hpp"
#include "nlpot/params.hpp"
#include "nlpot/weights.hpp"

namespace nlpot {

/// Discrete Dirichlet problem: minimize (1/p) E(u,u) over the free nodes with
/// all other nodes pinned to the boundary data.
struct DirichletProblem {
  std::shared_ptr<const PairWeightMatrix> weights;
  NodeSet free;
  std::vector<double> boundary_values; ///< full-length; read on constrained nodes only

  void validate() const;
};

struct SolverConfig {
  /// Stopping threshold on the scaled free-node residual
  /// |r_i| / (d_i * range(g)^{p-1}); the scaling makes the criterion
  /// invariant under both data shifts and grid dilations.
  double residual_tol = 1e-8;
  int max_iters = 20000;

  // backtracking line search
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  int max_backtracks = 60;

  // p == 2 subproblems (also the initial fill for general p)
  int cg_max_iters = 20000;

  /// Cap on reweighted-quadratic (Picard) sweeps between the p=2 fill and
  /// the descent phase; the sweeps stop early once the residual criterion is
  /// met or the energy stalls. Skipped for p == 2 and on grids too large to
  /// cache reweighted rows, where plain descent takes over.
  int irls_iters = 200;

  enum class Init { HarmonicFill, ZeroFill, MidFill };
  Init init = Init::HarmonicFill;

  void validate() const;
};

/// Solver output. `u` carries the boundary data on constrained nodes and the
/// minimizer on free nodes; `energy_log` lists J = (1/p) E(u,u) at every
/// accepted iterate (nonincreasing).
struct Solution {
  DiscreteFunction u;
  int iterations = 0;
  double final_residual = 0.0; ///< max scaled free-node residual
  double final_energy = 0.0;   ///< J at the returned iterate
  bool converged = false;
  double data_scale = 0.0;     ///< range of the boundary data
  double residual_tol = 0.0;   ///< tolerance the solve ran with
  std::vector<double> energy_log;
  std::shared_ptr<const DirichletProblem> problem;

  /// Solver tolerance expressed in solution units.
  double tolerance_u() const { return residual_tol * std::max(data_scale, 1.0); }
};

/// Minimize J(u) = (1/p) E(u,u) over the free nodes. p = 2 goes through
/// preconditioned CG; general p runs the p=2 fill, optional Picard sweeps,
/// then monotone preconditioned gradient descent with a backtracking line
/// search (Barzilai-Borwein trial steps). Non-convergence within max_iters
/// returns the best iterate with converged = false.
Solution solve(const DirichletProblem& problem, const SolverConfig& config);

/// Gradient of J: r_i = 2 sum_j w_ij |u_i-u_j|^{p-2} (u_i-u_j), every node.
std::vector<double> residual(const DiscreteFunction& u, const PairWeightMatrix& W,
                             const Params& params);
std::vector<double> residual_values(const std::vector<double>& u, const PairWeightMatrix& W,
                                    double p);

struct ComparisonReport {
  bool holds = false;
  double max_violation = 0.0; ///< max over nodes of (v_i - u_i)
  double tolerance = 0.0;
};

/// Comparison check for two solves of the same geometry whose boundary data
/// are ordered g_u >= g_v on every constrained node: reports the worst
/// violation of u >= v.
ComparisonReport check_comparison(const Solution& u, const Solution& v);

struct SupersolutionReport {
  bool holds = false;
  double min_scaled_residual = 0.0; ///< min over the region of r_i / (d_i scale^{p-1})
  double tol = 0.0;
};

/// Supersolution test against nodal indicators: holds iff the scaled residual
/// is >= -tol at every node of the region.
SupersolutionReport check_supersolution(const DiscreteFunction& u, const PairWeightMatrix& W,
                                        const NodeSet& region, const Params& params,
                                        double tol = 1e-6);

/// CSV dump: node index, coordinates, value, raw residual.
void write_solution_csv(const Solution& sol, const Params& params, const std::string& path);

} // namespace nlpot
