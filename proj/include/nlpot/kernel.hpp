#pragma once

#include <cmath>

#include "nlpot/geometry.hpp"
#include "nlpot/params.hpp"

namespace nlpot {

/// Symmetric coefficient a(x,y) for coefficient-scaled kernels. Declarative
/// variants only, so configurations stay serializable and runs reproducible.
struct CoefficientField {
  enum class Kind { Constant, CosineSum, ProductPhase };
  Kind kind = Kind::Constant;
  double value = 1.0;     ///< Constant: a = value
  double amplitude = 0.0; ///< CosineSum: a = 1 + amplitude * cos(freq * sum(x+y))
  double freq = 1.0;
  double log_amp = 0.0;   ///< ProductPhase: a = exp(g(x)+g(y)), g = log_amp * cos(freq * sum(x))

  static CoefficientField constant(double c) {
    CoefficientField f;
    f.kind = Kind::Constant;
    f.value = c;
    return f;
  }
  static CoefficientField cosine_sum(double amplitude, double freq) {
    CoefficientField f;
    f.kind = Kind::CosineSum;
    f.amplitude = amplitude;
    f.freq = freq;
    return f;
  }
  static CoefficientField product_phase(double log_amp, double freq) {
    CoefficientField f;
    f.kind = Kind::ProductPhase;
    f.log_amp = log_amp;
    f.freq = freq;
    return f;
  }

  double eval(const Point& x, const Point& y, int dim) const {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::CosineSum: {
        double t = x[0] + y[0];
        if (dim > 1) t += x[1] + y[1];
        return 1.0 + amplitude * std::cos(freq * t);
      }
      case Kind::ProductPhase: {
        double gx = x[0], gy = y[0];
        if (dim > 1) {
          gx += x[1];
          gy += y[1];
        }
        return std::exp(log_amp * (std::cos(freq * gx) + std::cos(freq * gy)));
      }
    }
    return 1.0;
  }

  double min_value() const {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::CosineSum: return 1.0 - std::abs(amplitude);
      case Kind::ProductPhase: return std::exp(-2.0 * std::abs(log_amp));
    }
    return 1.0;
  }
  double max_value() const {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::CosineSum: return 1.0 + std::abs(amplitude);
      case Kind::ProductPhase: return std::exp(2.0 * std::abs(log_amp));
    }
    return 1.0;
  }
};

/// Kernel specification: the model kernel |x-y|^{-n-sp} or a coefficient-
/// scaled variant a(x,y)|x-y|^{-n-sp} with a symmetric and pinched between
/// 1/Lambda and Lambda.
struct KernelSpec {
  enum class Variant { StandardFractional, CoefficientScaled };
  Variant variant = Variant::StandardFractional;
  CoefficientField coeff{};

  static KernelSpec standard() { return KernelSpec{}; }
  static KernelSpec coefficient(CoefficientField f) {
    KernelSpec k;
    k.variant = Variant::CoefficientScaled;
    k.coeff = f;
    return k;
  }

  /// True when the kernel reduces exactly to the standard one (so assembly
  /// takes the standard code path and produces bit-identical weights).
  bool standard_equivalent() const {
    return variant == Variant::StandardFractional ||
           (coeff.kind == CoefficientField::Kind::Constant && coeff.value == 1.0);
  }

  void validate(const Params& params) const {
    if (variant == Variant::StandardFractional) return;
    double lo = coeff.min_value(), hi = coeff.max_value();
    if (!(lo >= 1.0 / params.lambda - 1e-12) || !(hi <= params.lambda + 1e-12))
      throw std::invalid_argument(
          "KernelSpec: coefficient range violates the ellipticity bounds [1/Lambda, Lambda]");
  }

  double coefficient_at(const Point& x, const Point& y, int dim) const {
    return variant == Variant::StandardFractional ? 1.0 : coeff.eval(x, y, dim);
  }
};

} // namespace nlpot
