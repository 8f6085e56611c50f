#pragma once

#include <functional>
#include <vector>

namespace nlpot {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rule of the given order (cached; nodes via Newton iteration on P_n).
const GaussRule& gauss_rule(int order);

/// Integrate f over [a, b] with a single Gauss panel of the given order.
double gauss_panel(const std::function<double(double)>& f, double a, double b, int order = 16);

/// Integrate f over [a, b] split into `panels` equal panels.
double gauss_panels(const std::function<double(double)>& f, double a, double b, int panels,
                    int order = 16);

/// Integrate f over [a, infinity) for integrands decaying like t^{-1-alpha}
/// with alpha > 0: geometric panels doubling from a, stopping once the
/// remaining contribution is negligible relative to the accumulated value.
double gauss_geometric_tail(const std::function<double(double)>& f, double a, double alpha,
                            int order = 16);

/// Integrate f over [a, b] with panels split at the given breakpoints and
/// each smooth piece subdivided into log-spaced panels.
double gauss_log_panels(const std::function<double(double)>& f, double a, double b,
                        const std::vector<double>& breakpoints, int total_panels, int order = 8);

} // namespace nlpot
