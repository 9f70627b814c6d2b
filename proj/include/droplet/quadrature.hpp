#pragma once

#include <functional>

namespace droplet {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive 15-point Gauss-Kronrod on [a, b]; refines until the estimated
/// absolute error drops below abs_tol (or the depth limit is hit).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-10);

/// Integral over the real line of an integrand decaying exponentially in |z|,
/// truncated at |z| = cutoff and split at 0 so a jump there is harmless.
QuadratureResult integrate_line(const std::function<double(double)>& f, double abs_tol = 1e-10,
                                double cutoff = 40.0);

}  // namespace droplet
