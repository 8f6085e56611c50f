#include "nlpot/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "nlpot/io.hpp"
#include "nlpot/parallel.hpp"
#include "nlpot/quadrature.hpp"

namespace nlpot {

namespace {

constexpr int kGaussOrder = 8;
constexpr int kSubdiv1d = 4;
constexpr int kSubdiv2dPerAxis = 2;
constexpr std::size_t kDenseNodeLimit = 4096;

/// Per-axis quadrature points of a cell [0, h]: `subdiv` panels of a
/// Gauss rule. Points are stored as unit offsets scaled by h, so jointly
/// dilating box and spacing rescales them exactly.
struct AxisRule {
  std::vector<double> pts;
  std::vector<double> wts;
};

AxisRule axis_rule(double h, int subdiv) {
  const GaussRule& g = gauss_rule(kGaussOrder);
  AxisRule r;
  int m = subdiv * kGaussOrder;
  r.pts.reserve(m);
  r.wts.reserve(m);
  for (int s = 0; s < subdiv; ++s) {
    double a = static_cast<double>(s) / subdiv, w = 1.0 / subdiv;
    for (int k = 0; k < kGaussOrder; ++k) {
      double u = a + w * 0.5 * (1.0 + g.nodes[k]);
      r.pts.push_back(h * u);
      r.wts.push_back(h * (w * 0.5 * g.weights[k]));
    }
  }
  return r;
}

/// Cached quadrature of one near-field cell pair at a fixed offset:
/// geo[e] = (weight product) * |x-y|^{p-n-sp} over all point pairs.
struct OffsetQuad {
  int mx = 0, my = 0;
  std::vector<double> geo;
};

OffsetQuad build_offset_quad_1d(const AxisRule& ax, double h, int mx, double q_exp) {
  OffsetQuad oq;
  oq.mx = mx;
  std::size_t m = ax.pts.size();
  oq.geo.resize(m * m);
  double shift = mx * h;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      double d = std::abs(ax.pts[a] - (ax.pts[b] + shift));
      oq.geo[a * m + b] = ax.wts[a] * ax.wts[b] * std::pow(d, q_exp);
    }
  return oq;
}

OffsetQuad build_offset_quad_2d(const AxisRule& ax, double h, int mx, int my, double q_exp) {
  OffsetQuad oq;
  oq.mx = mx;
  oq.my = my;
  std::size_t m = ax.pts.size();
  oq.geo.resize(m * m * m * m);
  double sx = mx * h, sy = my * h;
  std::size_t e = 0;
  for (std::size_t a0 = 0; a0 < m; ++a0)
    for (std::size_t a1 = 0; a1 < m; ++a1) {
      double wa = ax.wts[a0] * ax.wts[a1];
      for (std::size_t b0 = 0; b0 < m; ++b0) {
        double dx = ax.pts[a0] - (ax.pts[b0] + sx);
        double dx2 = dx * dx;
        double wab0 = wa * ax.wts[b0];
        for (std::size_t b1 = 0; b1 < m; ++b1, ++e) {
          double dy = ax.pts[a1] - (ax.pts[b1] + sy);
          double r2 = dx2 + dy * dy;
          oq.geo[e] = wab0 * ax.wts[b1] * std::pow(r2, 0.5 * q_exp);
        }
      }
    }
  return oq;
}

double sum_geo(const OffsetQuad& oq) {
  double s = 0.0;
  for (double v : oq.geo) s += v;
  return s;
}

/// Near-field quadrature with the coefficient evaluated at absolute
/// coordinates; cell_i/cell_j are the lower corners of the two cells.
double coeff_offset_integral(const OffsetQuad& oq, const AxisRule& ax, int dim,
                             const CoefficientField& coeff, const Point& cell_i,
                             const Point& cell_j) {
  std::size_t m = ax.pts.size();
  double s = 0.0;
  if (dim == 1) {
    for (std::size_t a = 0; a < m; ++a) {
      Point x{cell_i[0] + ax.pts[a], 0.0};
      for (std::size_t b = 0; b < m; ++b) {
        Point y{cell_j[0] + ax.pts[b], 0.0};
        s += oq.geo[a * m + b] * coeff.eval(x, y, 1);
      }
    }
    return s;
  }
  std::size_t e = 0;
  for (std::size_t a0 = 0; a0 < m; ++a0)
    for (std::size_t a1 = 0; a1 < m; ++a1) {
      Point x{cell_i[0] + ax.pts[a0], cell_i[1] + ax.pts[a1]};
      for (std::size_t b0 = 0; b0 < m; ++b0) {
        double y0 = cell_j[0] + ax.pts[b0];
        for (std::size_t b1 = 0; b1 < m; ++b1, ++e) {
          Point y{y0, cell_j[1] + ax.pts[b1]};
          s += oq.geo[e] * coeff.eval(x, y, 2);
        }
      }
    }
  return s;
}

} // namespace

double cell_pair_integral_1d(double h, int m, double q) {
  if (m < 1) throw std::invalid_argument("cell_pair_integral_1d: m must be >= 1");
  if (!(q > -1.0)) throw std::invalid_argument("cell_pair_integral_1d: requires q > -1");
  double gap = (m - 1) * h;
  auto P = [&](double t) {
    return t <= 0.0 ? 0.0 : std::pow(t, q + 2.0) / ((q + 1.0) * (q + 2.0));
  };
  return P(gap + 2.0 * h) - 2.0 * P(gap + h) + P(gap);
}

PairWeightMatrix PairWeightMatrix::from_dense(std::shared_ptr<const Grid> grid,
                                              const Params& params, std::vector<double> matrix,
                                              bool standard) {
  std::size_t n = grid->size();
  if (matrix.size() != n * n)
    throw std::invalid_argument("PairWeightMatrix::from_dense: matrix size must be n*n");
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i * n + i] != 0.0)
      throw std::invalid_argument("PairWeightMatrix::from_dense: nonzero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      if (matrix[i * n + j] < 0.0)
        throw std::invalid_argument("PairWeightMatrix::from_dense: negative weight");
      if (matrix[i * n + j] != matrix[j * n + i])
        throw std::invalid_argument("PairWeightMatrix::from_dense: asymmetric weights");
    }
  }
  PairWeightMatrix W;
  W.grid_ = std::move(grid);
  W.params_ = params;
  W.near_band_ = 0;
  W.standard_ = standard;
  W.storage_ = Storage::Dense;
  W.dense_ = std::move(matrix);
  W.compute_degrees();
  return W;
}

void PairWeightMatrix::compute_degrees() {
  std::size_t n = size();
  degrees_.assign(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    double s = 0.0;
    visit_row(i, [&](std::size_t, double w) { s += w; });
    degrees_[i] = 2.0 * s;
  });
}

PairWeightMatrix assemble_weights(std::shared_ptr<const Grid> grid, const KernelSpec& kernel,
                                  const Params& params, int near_band) {
  params.validate();
  kernel.validate(params);
  if (grid->dim != params.n)
    throw std::invalid_argument("assemble_weights: grid dimension differs from params.n");
  if (near_band < 1) throw std::invalid_argument("assemble_weights: near_band must be >= 1");

  PairWeightMatrix W;
  W.grid_ = grid;
  W.params_ = params;
  W.near_band_ = near_band;
  W.standard_ = kernel.standard_equivalent();

  const int dim = grid->dim;
  const double h = grid->h;
  const double sp = params.s * params.p;
  const double kexp = -(dim + sp);        // exponent of the kernel envelope
  const double qexp = params.p - dim - sp; // exponent inside the near-field integral
  const double cellvol2 = dim == 1 ? h * h : h * h * h * h;
  const int nx = grid->cells[0], ny = grid->cells[1];

  AxisRule ax = axis_rule(h, dim == 1 ? kSubdiv1d : kSubdiv2dPerAxis);

  auto far_weight = [&](double dist2) { return std::pow(dist2, 0.5 * kexp) * cellvol2; };

  if (W.standard_) {
    W.storage_ = PairWeightMatrix::Storage::Stencil;
    std::size_t tw = static_cast<std::size_t>(2 * nx - 1) * (2 * ny - 1);
    W.stencil_.assign(tw, 0.0);
    auto tab_at = [&](int dx, int dy) -> double& {
      return W.stencil_[static_cast<std::size_t>(dx + nx - 1) * (2 * ny - 1) + (dy + ny - 1)];
    };
    for (int dx = 0; dx <= nx - 1; ++dx) {
      int dy_lo = (dx == 0) ? 1 : -(ny - 1);
      for (int dy = dy_lo; dy <= ny - 1; ++dy) {
        if (dim == 1 && dy != 0) continue;
        int cheb = std::max(std::abs(dx), std::abs(dy));
        double w;
        if (cheb > near_band) {
          double dist2 = (dx * h) * (dx * h) + (dy * h) * (dy * h);
          w = far_weight(dist2);
        } else if (dim == 1) {
          w = std::pow(dx * h, -params.p) * cell_pair_integral_1d(h, dx, qexp);
        } else {
          OffsetQuad oq = build_offset_quad_2d(ax, h, dx, dy, qexp);
          double dist2 = (dx * h) * (dx * h) + (dy * h) * (dy * h);
          w = std::pow(dist2, -0.5 * params.p) * sum_geo(oq);
        }
        tab_at(dx, dy) = w;
        tab_at(-dx, -dy) = w;
      }
    }
    W.compute_degrees();
    return W;
  }

  // Coefficient-scaled kernel: dense symmetric storage.
  std::size_t n = grid->size();
  if (n > kDenseNodeLimit)
    throw std::invalid_argument(
        "assemble_weights: coefficient kernels need dense storage; grid too large");
  W.storage_ = PairWeightMatrix::Storage::Dense;
  W.dense_.assign(n * n, 0.0);

  // Geometry of near-field quadrature depends only on the offset; cache it.
  std::vector<OffsetQuad> rules;
  std::vector<int> rule_index((2 * near_band + 1) * (2 * near_band + 1), -1);
  auto rule_slot = [&](int dx, int dy) -> int& {
    return rule_index[(dx + near_band) * (2 * near_band + 1) + (dy + near_band)];
  };
  for (int dx = -near_band; dx <= near_band; ++dx)
    for (int dy = -near_band; dy <= near_band; ++dy) {
      if (dx == 0 && dy == 0) continue;
      if (dim == 1 && dy != 0) continue;
      rule_slot(dx, dy) = static_cast<int>(rules.size());
      rules.push_back(dim == 1 ? build_offset_quad_1d(ax, h, dx, qexp)
                               : build_offset_quad_2d(ax, h, dx, dy, qexp));
    }

  parallel_for(n, [&](std::size_t i) {
    auto mi = grid->multi_index(i);
    Point xi = grid->center(i);
    Point ci_lo, ci_hi;
    grid->cell_bounds(i, ci_lo, ci_hi);
    for (std::size_t j = i + 1; j < n; ++j) {
      auto mj = grid->multi_index(j);
      int dx = mj[0] - mi[0], dy = mj[1] - mi[1];
      int cheb = std::max(std::abs(dx), std::abs(dy));
      Point xj = grid->center(j);
      double w;
      if (cheb > near_band) {
        double ddx = xj[0] - xi[0], ddy = xj[1] - xi[1];
        w = kernel.coeff.eval(xi, xj, dim) * far_weight(ddx * ddx + ddy * ddy);
      } else {
        Point cj_lo, cj_hi;
        grid->cell_bounds(j, cj_lo, cj_hi);
        const OffsetQuad& oq = rules[rule_slot(dx, dy)];
        double dist2 = (dx * h) * (dx * h) + (dy * h) * (dy * h);
        w = std::pow(dist2, -0.5 * params.p) *
            coeff_offset_integral(oq, ax, dim, kernel.coeff, ci_lo, cj_lo);
      }
      W.dense_[i * n + j] = w;
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) W.dense_[j * n + i] = W.dense_[i * n + j];

  W.compute_degrees();
  return W;
}

void write_nodes_csv(const Grid& grid, const std::string& path) {
  CsvWriter csv(path);
  if (grid.dim == 1)
    csv.header({"index", "x"});
  else
    csv.header({"index", "x", "y"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Point x = grid.center(i);
    if (grid.dim == 1)
      csv.row({std::to_string(i), fmt_double(x[0])});
    else
      csv.row({std::to_string(i), fmt_double(x[0]), fmt_double(x[1])});
  }
}

void write_weights_csv(const PairWeightMatrix& W, const std::string& path) {
  CsvWriter csv(path);
  csv.header({"i", "j", "w"});
  std::size_t n = W.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      csv.row({std::to_string(i), std::to_string(j), fmt_double(W.at(i, j))});
}

} // namespace nlpot
