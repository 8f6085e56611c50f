#include "nlpot/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace nlpot {

std::shared_ptr<const Grid> build_grid(Point lo, Point hi, std::array<int, 2> cells, int dim) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("build_grid: dimension must be 1 or 2");
  if (dim == 1) cells[1] = 1;
  for (int k = 0; k < dim; ++k) {
    if (cells[k] <= 0) throw std::invalid_argument("build_grid: zero cells on an axis");
    if (!(hi[k] > lo[k])) throw std::invalid_argument("build_grid: degenerate box");
  }
  double hx = (hi[0] - lo[0]) / cells[0];
  if (dim == 2) {
    double hy = (hi[1] - lo[1]) / cells[1];
    if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy))
      throw std::invalid_argument("build_grid: per-axis spacings differ; grid must be uniform");
  }
  auto g = std::make_shared<Grid>();
  g->dim = dim;
  g->lo = lo;
  g->hi = hi;
  g->cells = cells;
  g->h = hx;
  return g;
}

std::size_t NodeSet::count() const {
  std::size_t c = 0;
  for (auto v : mask_) c += v;
  return c;
}

std::vector<std::size_t> NodeSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i]) out.push_back(i);
  return out;
}

NodeSet NodeSet::complement() const {
  NodeSet r(grid_);
  for (std::size_t i = 0; i < mask_.size(); ++i) r.mask_[i] = mask_[i] ? 0 : 1;
  return r;
}

NodeSet NodeSet::intersect(const NodeSet& other) const {
  require_same_grid(*grid_, *other.grid_, "NodeSet::intersect");
  NodeSet r(grid_);
  for (std::size_t i = 0; i < mask_.size(); ++i) r.mask_[i] = (mask_[i] && other.mask_[i]) ? 1 : 0;
  return r;
}

NodeSet NodeSet::unite(const NodeSet& other) const {
  require_same_grid(*grid_, *other.grid_, "NodeSet::unite");
  NodeSet r(grid_);
  for (std::size_t i = 0; i < mask_.size(); ++i) r.mask_[i] = (mask_[i] || other.mask_[i]) ? 1 : 0;
  return r;
}

NodeSet NodeSet::minus(const NodeSet& other) const {
  require_same_grid(*grid_, *other.grid_, "NodeSet::minus");
  NodeSet r(grid_);
  for (std::size_t i = 0; i < mask_.size(); ++i) r.mask_[i] = (mask_[i] && !other.mask_[i]) ? 1 : 0;
  return r;
}

bool NodeSet::subset_of(const NodeSet& other) const {
  require_same_grid(*grid_, *other.grid_, "NodeSet::subset_of");
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i] && !other.mask_[i]) return false;
  return true;
}

NodeSet node_set(std::shared_ptr<const Grid> grid, const Region& region) {
  NodeSet s(grid);
  for (std::size_t i = 0; i < grid->size(); ++i)
    if (region.contains(grid->center(i), grid->dim)) s.set(i);
  return s;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (&a == &b) return;
  bool same = a.dim == b.dim && a.cells == b.cells && a.lo == b.lo && a.hi == b.hi;
  if (!same) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

} // namespace nlpot
