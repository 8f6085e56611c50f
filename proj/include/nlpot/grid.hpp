#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "nlpot/geometry.hpp"

namespace nlpot {

/// Uniform cell-centered lattice over an axis-aligned box. Node i sits at the
/// center of cell i; ordering is lexicographic (x-major), deterministic.
struct Grid {
  int dim = 1;
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};
  std::array<int, 2> cells{0, 1}; // cells[1] == 1 in 1D
  double h = 0.0;                 // uniform spacing on every axis

  std::size_t size() const { return static_cast<std::size_t>(cells[0]) * cells[1]; }

  std::array<int, 2> multi_index(std::size_t i) const {
    int iy = static_cast<int>(i % cells[1]);
    int ix = static_cast<int>(i / cells[1]);
    return {ix, iy};
  }

  std::size_t flat_index(int ix, int iy) const {
    return static_cast<std::size_t>(ix) * cells[1] + iy;
  }

  Point center(std::size_t i) const {
    auto m = multi_index(i);
    Point x{lo[0] + (m[0] + 0.5) * h, 0.0};
    if (dim > 1) x[1] = lo[1] + (m[1] + 0.5) * h;
    return x;
  }

  double cell_volume() const { return dim == 1 ? h : h * h; }

  /// Axis-aligned box of cell i.
  void cell_bounds(std::size_t i, Point& clo, Point& chi) const {
    auto m = multi_index(i);
    clo = {lo[0] + m[0] * h, 0.0};
    chi = {lo[0] + (m[0] + 1) * h, 0.0};
    if (dim > 1) {
      clo[1] = lo[1] + m[1] * h;
      chi[1] = lo[1] + (m[1] + 1) * h;
    }
  }
};

/// Build a uniform grid over [lo, hi] with the given per-axis cell counts.
/// The box must be nondegenerate and the per-axis spacings must agree.
std::shared_ptr<const Grid> build_grid(Point lo, Point hi, std::array<int, 2> cells, int dim);

inline std::shared_ptr<const Grid> build_grid_1d(double lo, double hi, int cells) {
  return build_grid(point1(lo), point1(hi), {cells, 1}, 1);
}

inline std::shared_ptr<const Grid> build_grid_2d(Point lo, Point hi, int nx, int ny) {
  return build_grid(lo, hi, {nx, ny}, 2);
}

/// Subset of grid nodes, stored as a membership mask.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::shared_ptr<const Grid> grid, bool fill = false)
      : grid_(std::move(grid)), mask_(grid_->size(), fill ? 1 : 0) {}

  const std::shared_ptr<const Grid>& grid() const { return grid_; }
  std::size_t size() const { return mask_.size(); }
  bool contains(std::size_t i) const { return mask_[i] != 0; }
  void set(std::size_t i, bool v = true) { mask_[i] = v ? 1 : 0; }

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::vector<std::size_t> indices() const;

  NodeSet complement() const;
  NodeSet intersect(const NodeSet& other) const;
  NodeSet unite(const NodeSet& other) const;
  NodeSet minus(const NodeSet& other) const;
  bool subset_of(const NodeSet& other) const;

 private:
  std::shared_ptr<const Grid> grid_;
  std::vector<std::uint8_t> mask_;
};

/// Nodes whose cell center satisfies the predicate (cell-center membership).
NodeSet node_set(std::shared_ptr<const Grid> grid, const Region& region);

void require_same_grid(const Grid& a, const Grid& b, const char* what);

} // namespace nlpot
