#include "nlpot/capacity.hpp"

#include <cmath>
#include <stdexcept>

#include "nlpot/io.hpp"
#include "nlpot/parallel.hpp"

namespace nlpot {

namespace {

/// Omega must keep one empty-cell margin inside the box so the compact
/// containment hypothesis has a discrete counterpart.
void check_margin(const NodeSet& omega) {
  const Grid& g = *omega.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!omega.contains(i)) continue;
    auto m = g.multi_index(i);
    bool edge = m[0] == 0 || m[0] == g.cells[0] - 1;
    if (g.dim == 2) edge = edge || m[1] == 0 || m[1] == g.cells[1] - 1;
    if (edge)
      throw std::invalid_argument("capacity: Omega touches the box boundary (need a margin)");
  }
}

EnergyBreakdown breakdown(const DiscreteFunction& u, const NodeSet& K, const NodeSet& omega,
                          const PairWeightMatrix& W) {
  const double p = W.params().p;
  std::size_t n = W.size();
  auto cat = [&](std::size_t i) { return K.contains(i) ? 0 : (omega.contains(i) ? 1 : 2); };
  std::vector<std::array<double, 3>> partial(n, {0.0, 0.0, 0.0});
  parallel_for(n, [&](std::size_t i) {
    double ui = u[i];
    std::array<double, 3> row{0.0, 0.0, 0.0};
    W.visit_row(i, [&](std::size_t j, double w) { row[cat(j)] += w * pow_p(ui - u[j], p); });
    partial[i] = row;
  });
  EnergyBreakdown b;
  for (std::size_t i = 0; i < n; ++i) {
    int ci = cat(i);
    for (int cj = 0; cj < 3; ++cj) {
      double v = partial[i][cj];
      int lo = std::min(ci, cj), hi = std::max(ci, cj);
      if (lo == 0 && hi == 0) b.kk += v;
      else if (lo == 0 && hi == 1) b.k_free += v;
      else if (lo == 0 && hi == 2) b.k_out += v;
      else if (lo == 1 && hi == 1) b.free_free += v;
      else if (lo == 1 && hi == 2) b.free_out += v;
      else b.out_out += v;
    }
  }
  return b;
}

} // namespace

CapacityResult capacity(const NodeSet& K, const NodeSet& omega,
                        std::shared_ptr<const PairWeightMatrix> weights,
                        const SolverConfig& config) {
  const PairWeightMatrix& W = *weights;
  require_same_grid(*K.grid(), *W.grid(), "capacity");
  require_same_grid(*omega.grid(), *W.grid(), "capacity");
  if (!K.subset_of(omega)) throw std::invalid_argument("capacity: K must be contained in Omega");
  check_margin(omega);

  CapacityResult res;
  if (K.empty()) {
    res.potential = DiscreteFunction(W.grid(), 0.0);
    return res; // zero admissible, zero energy
  }

  DirichletProblem pb;
  pb.weights = weights;
  pb.free = omega.minus(K);
  pb.boundary_values.assign(W.size(), 0.0);
  for (std::size_t i = 0; i < W.size(); ++i)
    if (K.contains(i)) pb.boundary_values[i] = 1.0;

  Solution sol = solve(pb, config);
  res.value = W.params().p * sol.final_energy; // J = (1/p) E
  res.iterations = sol.iterations;
  res.final_residual = sol.final_residual;
  res.converged = sol.converged;
  res.potential = sol.u;
  res.energy_breakdown = breakdown(sol.u, K, omega, W);
  res.solution = std::move(sol);
  return res;
}

CapacityResult capacity(const NodeSet& K, const NodeSet& omega, const KernelSpec& kernel,
                        const Params& params, const SolverConfig& config) {
  auto W = std::make_shared<PairWeightMatrix>(assemble_weights(K.grid(), kernel, params));
  return capacity(K, omega, std::move(W), config);
}

DiscreteFunction l_potential(const NodeSet& K, const NodeSet& omega, const KernelSpec& kernel,
                             const Params& params, const SolverConfig& config) {
  return capacity(K, omega, kernel, params, config).potential;
}

Measure l_distribution(const DiscreteFunction& potential, const NodeSet& K,
                       const PairWeightMatrix& W, const Params& params, double residual_tol,
                       double negativity_tol_factor) {
  require_same_grid(*potential.grid, *W.grid(), "l_distribution");
  std::vector<double> r = residual(potential, W, params);
  Measure mu;
  mu.support = K;
  mu.masses.assign(W.size(), 0.0);
  // Residuals scale like d_i * range^{p-1} with range = 1 for a potential;
  // anything below -factor*tol of that scale signals a failed solve rather
  // than rounding.
  for (std::size_t i = 0; i < W.size(); ++i) {
    if (!K.contains(i)) continue;
    if (r[i] < -negativity_tol_factor * residual_tol * W.degree(i))
      throw std::runtime_error("l_distribution: significantly negative mass on K");
    mu.masses[i] = r[i];
  }
  return mu;
}

MecapReport check_mecap(const Measure& mu, const NodeSet& E, const NodeSet& K,
                        const NodeSet& omega, const Params& params, const SolverConfig& config,
                        double tolerance) {
  MecapReport rep;
  rep.lambda = params.lambda;
  rep.tolerance = tolerance;
  rep.measure_side = mu.mass_on(E);
  CapacityResult cap = capacity(K.intersect(E), omega, KernelSpec::standard(), params, config);
  rep.capacity_side = cap.value;
  rep.holds = rep.measure_side <= params.lambda * rep.capacity_side * (1.0 + tolerance) +
                                      1e-12 * std::max(1.0, rep.measure_side);
  return rep;
}

void write_capacity_csv(const std::string& path, const std::string& k_desc,
                        const std::string& omega_desc, const Params& params,
                        const CapacityResult& result) {
  CsvWriter csv(path);
  csv.header({"K", "omega", "s", "p", "value", "iterations", "residual"});
  csv.row({k_desc, omega_desc, fmt_double(params.s), fmt_double(params.p),
           fmt_double(result.value), std::to_string(result.iterations),
           fmt_double(result.final_residual)});
}

} // namespace nlpot
