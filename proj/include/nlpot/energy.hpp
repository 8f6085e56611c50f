#pragma once

#include "nlpot/discrete_function.hpp"
#include "nlpot/params.hpp"
#include "nlpot/weights.hpp"

namespace nlpot {

/// |t|^p with a fast path for p == 2.
inline double pow_p(double t, double p) {
  if (p == 2.0) return t * t;
  return std::pow(std::abs(t), p);
}

/// |t|^{p-2} t, continuous at 0 for every p > 1, fast path for p == 2.
inline double phi_p(double t, double p) {
  if (p == 2.0) return t;
  if (t == 0.0) return 0.0;
  return std::pow(std::abs(t), p - 2.0) * t;
}

/// Discrete energy form: the sum over ordered pairs (i,j), i != j, of
///   w_ij |u_i - u_j|^{p-2} (u_i - u_j)(v_i - v_j),
/// each unordered pair counted twice, matching the double integral.
/// Far-field values never enter; complement nodes inside the box carry the
/// boundary data instead.
double energy_form(const DiscreteFunction& u, const DiscreteFunction& v,
                   const PairWeightMatrix& W, const Params& params);

/// Same double sum evaluated on raw value vectors (solver hot path).
double energy_form_values(const std::vector<double>& u, const std::vector<double>& v,
                          const PairWeightMatrix& W, double p);

/// p-th power of the region-restricted Gagliardo seminorm: sum over ordered
/// pairs with both nodes in the region of w_ij |u_i - u_j|^p. Requires
/// standard-fractional weights.
double gagliardo_seminorm_p(const DiscreteFunction& u, const NodeSet& region,
                            const PairWeightMatrix& W);

/// Nonlocal tail of u at (x0, r):
///   ( r^{sp} [ sum over nodes outside B_r |u_i|^{p-1} |x_i-x0|^{-n-sp} h^n
///              + exact far-field integral over (R^n \ box) \ B_r ] )^{1/(p-1)}.
/// The far-field piece is closed-form for Zero/Constant and for RadialPower
/// centered at x0; other centers fall back to high-accuracy panel quadrature.
double tail(const DiscreteFunction& u, const Point& x0, double r, const Params& params);

/// Bracketed tail integral (without the r^{sp} scaling and the 1/(p-1) power):
/// nonincreasing in r; exposed for the monotonicity property.
double tail_bracket(const DiscreteFunction& u, const Point& x0, double r, const Params& params);

/// Power mean ( avg over nodes in B_R(x0) of |u_i|^gamma )^{1/gamma}.
/// gamma must be nonzero; negative gamma requires |u_i| > 0 on the ball.
double phi_average(const DiscreteFunction& u, double gamma, const Point& x0, double R);

} // namespace nlpot
