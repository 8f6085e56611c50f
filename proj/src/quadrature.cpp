#include "nlpot/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace nlpot {

namespace {

GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return rule;
}

} // namespace

const GaussRule& gauss_rule(int order) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b, int order) {
  const GaussRule& r = gauss_rule(order);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < r.nodes.size(); ++k) s += r.weights[k] * f(mid + half * r.nodes[k]);
  return s * half;
}

double gauss_panels(const std::function<double(double)>& f, double a, double b, int panels,
                    int order) {
  double s = 0.0, w = (b - a) / panels;
  for (int k = 0; k < panels; ++k) s += gauss_panel(f, a + k * w, a + (k + 1) * w, order);
  return s;
}

double gauss_geometric_tail(const std::function<double(double)>& f, double a, double alpha,
                            int order) {
  if (!(alpha > 0.0)) throw std::invalid_argument("gauss_geometric_tail: alpha must be > 0");
  double total = 0.0;
  double lo = a;
  // Panel contributions shrink by 2^{-alpha} per doubling; stop when the
  // geometric remainder is below 1e-15 of the total.
  int max_panels = static_cast<int>(std::ceil(60.0 / std::min(alpha, 1.0))) + 8;
  for (int k = 0; k < max_panels; ++k) {
    double hi = lo * 2.0;
    double piece = gauss_panel(f, lo, hi, order);
    total += piece;
    double remainder_bound = std::abs(piece) / std::max(1e-300, std::pow(2.0, alpha) - 1.0);
    if (remainder_bound <= 1e-15 * std::abs(total) + 1e-300) break;
    lo = hi;
  }
  return total;
}

double gauss_log_panels(const std::function<double(double)>& f, double a, double b,
                        const std::vector<double>& breakpoints, int total_panels, int order) {
  if (!(b > a)) return 0.0;
  if (!(a > 0.0)) throw std::invalid_argument("gauss_log_panels: requires a > 0");
  std::vector<double> edges{a, b};
  for (double t : breakpoints)
    if (t > a && t < b) edges.push_back(t);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  double total_log = std::log(b / a);
  double s = 0.0;
  for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
    double lo = edges[seg], hi = edges[seg + 1];
    int panels = std::max(1, static_cast<int>(std::round(total_panels * std::log(hi / lo) / total_log)));
    double step = std::log(hi / lo) / panels;
    for (int k = 0; k < panels; ++k) {
      double pa = lo * std::exp(k * step);
      double pb = (k + 1 == panels) ? hi : lo * std::exp((k + 1) * step);
      // substitute rho = e^t so the panel is polynomially smooth in t
      s += gauss_panel([&](double t) { double rho = std::exp(t); return f(rho) * rho; },
                       std::log(pa), std::log(pb), order);
    }
  }
  return s;
}

} // namespace nlpot
