#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nlpot/grid.hpp"
#include "nlpot/kernel.hpp"
#include "nlpot/params.hpp"

namespace nlpot {

/// Symmetric nonnegative quadrature weights w_ij for the kernel double
/// integral, zero on the diagonal.
///
/// Well-separated pairs use the midpoint value k(x_i,x_j) h^{2n}. Pairs
/// within `near_band` cells use the displacement-weighted cell-pair integral
///   w_ij = |x_i-x_j|^{-p} * Int_{C_i x C_j} |x-y|^p k(x,y) dy dx,
/// which stays finite for every (s,p) because p > sp, and is evaluated in
/// closed form (1D, standard kernel) or by tensor Gauss quadrature
/// (2D / coefficient kernels). The self-cell interaction is dropped; the
/// total consistency error of the resulting energy is O(h^{p-sp}).
///
/// Both formulas are homogeneous of degree n - sp under joint dilation of
/// the box and spacing, so dilation covariance holds to rounding accuracy.
///
/// Storage: translation-invariant kernels share one weight per node offset
/// (O(N) memory); coefficient kernels store the full symmetric matrix.
class PairWeightMatrix {
 public:
  enum class Storage { Stencil, Dense };

  const std::shared_ptr<const Grid>& grid() const { return grid_; }
  const Params& params() const { return params_; }
  int near_band() const { return near_band_; }
  bool standard_kernel() const { return standard_; }
  Storage storage() const { return storage_; }
  std::size_t size() const { return grid_->size(); }

  double at(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    if (storage_ == Storage::Dense) return dense_[i * size() + j];
    return stencil_at(i, j);
  }

  /// Visit every j != i with its weight: f(j, w_ij). Row order is ascending j.
  template <class F>
  void visit_row(std::size_t i, F&& f) const {
    std::size_t n = size();
    if (storage_ == Storage::Dense) {
      const double* row = dense_.data() + i * n;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) f(j, row[j]);
      return;
    }
    auto mi = grid_->multi_index(i);
    int nx = grid_->cells[0], ny = grid_->cells[1];
    const double* tab = stencil_.data();
    int width = 2 * ny - 1;
    std::size_t j = 0;
    for (int jx = 0; jx < nx; ++jx) {
      const double* base = tab + static_cast<std::size_t>(jx - mi[0] + nx - 1) * width - mi[1] + ny - 1;
      for (int jy = 0; jy < ny; ++jy, ++j) {
        if (j == i) continue;
        f(j, base[jy]);
      }
    }
  }

  /// Weighted degree d_i = 2 sum_j w_ij (cached at assembly).
  double degree(std::size_t i) const { return degrees_[i]; }
  const std::vector<double>& degrees() const { return degrees_; }

  /// Wrap an explicit symmetric nonnegative matrix (row-major, zero diagonal).
  static PairWeightMatrix from_dense(std::shared_ptr<const Grid> grid, const Params& params,
                                     std::vector<double> matrix, bool standard = false);

  friend PairWeightMatrix assemble_weights(std::shared_ptr<const Grid> grid,
                                           const KernelSpec& kernel, const Params& params,
                                           int near_band);

 private:
  std::shared_ptr<const Grid> grid_;
  Params params_;
  int near_band_ = 2;
  bool standard_ = true;
  Storage storage_ = Storage::Stencil;
  std::vector<double> stencil_; // indexed by (dx+nx-1)*(2ny-1) + (dy+ny-1)
  std::vector<double> dense_;   // full square, zero diagonal
  std::vector<double> degrees_;

  double stencil_at(std::size_t i, std::size_t j) const {
    auto mi = grid_->multi_index(i), mj = grid_->multi_index(j);
    int nx = grid_->cells[0], ny = grid_->cells[1];
    return stencil_[static_cast<std::size_t>(mj[0] - mi[0] + nx - 1) * (2 * ny - 1) +
                    (mj[1] - mi[1] + ny - 1)];
  }

  void compute_degrees();
};

/// Assemble the pair weights for a grid, kernel, and parameter set.
PairWeightMatrix assemble_weights(std::shared_ptr<const Grid> grid, const KernelSpec& kernel,
                                  const Params& params, int near_band = 2);

/// Exact closed form of Int_{C_i x C_j} |x-y|^q dy dx for two 1D cells of
/// width h whose index distance is m >= 1 (requires q > -1).
double cell_pair_integral_1d(double h, int m, double q);

/// Regression dumps: node coordinates, and (i, j, w_ij) triples for i < j in
/// lexicographic order.
void write_nodes_csv(const Grid& grid, const std::string& path);
void write_weights_csv(const PairWeightMatrix& W, const std::string& path);

} // namespace nlpot
