#pragma once

#include <functional>

namespace lrq {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  /// The interval is pre-split into this many equal pieces before adaptive
  /// bisection starts; useful for oscillatory integrands.
  int initial_pieces = 1;
  int max_intervals = 20000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature on [a, b].
/// Throws QuadratureError (carrying the achieved error estimate) when the
/// tolerance is not reached within max_intervals.
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                const QuadratureOptions& options = {});

}  // namespace lrq
