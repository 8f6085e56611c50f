#pragma once

#include <memory>
#include <string>

#include "nlpot/dirichlet.hpp"

namespace nlpot {

/// Nonnegative node masses; houses L-distributions and measure data for
/// Wolff potentials.
struct Measure {
  std::vector<double> masses; ///< one per grid node, zero outside support
  NodeSet support;

  double total() const {
    double s = 0.0;
    for (double m : masses) s += m;
    return s;
  }
  double mass_on(const NodeSet& set) const {
    double s = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i)
      if (set.contains(i)) s += masses[i];
    return s;
  }
};

struct EnergyBreakdown {
  double kk = 0.0;        ///< both nodes in K
  double k_free = 0.0;    ///< K to Omega\K
  double k_out = 0.0;     ///< K to outside Omega
  double free_free = 0.0;
  double free_out = 0.0;
  double out_out = 0.0;
  double total() const { return kk + k_free + k_out + free_free + free_out + out_out; }
};

struct CapacityResult {
  double value = 0.0;            ///< minimized energy E(potential)
  DiscreteFunction potential;    ///< the minimizer (1 on K, 0 outside Omega)
  EnergyBreakdown energy_breakdown;
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = true;
  Solution solution;             ///< full solver record
};

/// Variational capacity of K with respect to Omega for the given kernel:
/// minimize E(v) over v = 1 on K, v = 0 outside Omega, free on Omega\K.
/// Requires K inside Omega and Omega inside the box with a one-cell margin.
/// An empty K returns value 0 with the zero potential.
CapacityResult capacity(const NodeSet& K, const NodeSet& omega, const KernelSpec& kernel,
                        const Params& params, const SolverConfig& config);

/// Same with preassembled weights (grids must match).
CapacityResult capacity(const NodeSet& K, const NodeSet& omega,
                        std::shared_ptr<const PairWeightMatrix> weights,
                        const SolverConfig& config);

/// The capacity minimizer itself (the discrete L-potential of K in Omega).
DiscreteFunction l_potential(const NodeSet& K, const NodeSet& omega, const KernelSpec& kernel,
                             const Params& params, const SolverConfig& config);

/// L-distribution of the potential: node masses r_i on K, zero elsewhere.
/// The Euler-Lagrange equations make free-node residuals vanish, so the
/// measure captures all of Lu. Masses below -10 * residual_tol (in scaled
/// residual units) flag a failed solve and throw.
Measure l_distribution(const DiscreteFunction& potential, const NodeSet& K,
                       const PairWeightMatrix& W, const Params& params,
                       double residual_tol = 1e-8, double negativity_tol_factor = 10.0);

struct MecapReport {
  bool holds = false;
  double measure_side = 0.0;  ///< mu(E)
  double capacity_side = 0.0; ///< cap_{s,p}(K cap E, Omega), standard kernel
  double lambda = 1.0;
  double tolerance = 0.05;
};

/// Check mu(E) <= Lambda * cap_{s,p}(K cap E, Omega) on the grid.
MecapReport check_mecap(const Measure& mu, const NodeSet& E, const NodeSet& K,
                        const NodeSet& omega, const Params& params, const SolverConfig& config,
                        double tolerance = 0.05);

/// CSV report row for a capacity call.
void write_capacity_csv(const std::string& path, const std::string& k_desc,
                        const std::string& omega_desc, const Params& params,
                        const CapacityResult& result);

} // namespace nlpot
