#pragma once

#include <stdexcept>
#include <string>

namespace nlpot {

/// Model parameters (n, s, p, Lambda) shared by every quantity in the library:
/// grid dimension, order of differentiability, summability exponent, and the
/// two-sided kernel ellipticity constant.
struct Params {
  int n = 1;           ///< spatial dimension, 1 or 2
  double s = 0.5;      ///< order, 0 < s < 1
  double p = 2.0;      ///< exponent, p > 1
  double lambda = 1.0; ///< ellipticity constant, >= 1

  /// n - s*p, the scaling exponent of capacities and pair weights.
  double scaling_exponent() const { return static_cast<double>(n) - s * p; }

  void validate() const {
    if (n != 1 && n != 2) throw std::invalid_argument("Params: n must be 1 or 2");
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("Params: s must lie in (0,1)");
    if (!(p > 1.0)) throw std::invalid_argument("Params: p must be > 1");
    if (!(lambda >= 1.0)) throw std::invalid_argument("Params: lambda must be >= 1");
  }
};

} // namespace nlpot
