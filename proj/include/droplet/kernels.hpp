#pragma once

// Cell-loop kernels shared by the energy, minimizer and diagnostics code.
//
// Two implementations live side by side: `kernels` runs the loops with
// OpenMP and reduces through fixed-size blocks whose partial sums are added
// serially, so results do not depend on the thread count; `reference` is a
// plain multi-index implementation kept for testing and benchmarking.

#include <span>

#include "droplet/field.hpp"

namespace droplet {

struct EnergyParts {
  double gradient = 0.0;   // (1/2) sum |grad m|^2 h^d, forward differences
  double potential = 0.0;  // sum F(m) h^d
};

/// Bulk density selector for the energy kernels.
struct Potential {
  enum class Kind { DoubleWell, Shifted } kind = Kind::DoubleWell;
  double n = 0.0;  // background for the shifted density G(w)

  static Potential double_well() { return {}; }
  static Potential shifted(double n) { return {Kind::Shifted, n}; }
};

namespace kernels {

double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
/// y += alpha x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// a -= c
void subtract_constant(std::span<double> a, double c);

EnergyParts energy(const Grid& grid, std::span<const double> m, Potential pot = {});
/// out = -Lap m + F'(m) with the (2d+1)-point periodic Laplacian.
void variation(const Grid& grid, std::span<const double> m, std::span<double> out);
/// Both of the above in one sweep.
EnergyParts energy_and_variation(const Grid& grid, std::span<const double> m, std::span<double> out);

}  // namespace kernels

namespace reference {

double sum(std::span<const double> a);
EnergyParts energy(const Grid& grid, std::span<const double> m, Potential pot = {});
void variation(const Grid& grid, std::span<const double> m, std::span<double> out);

}  // namespace reference

/// Shifted bulk density G(w) = (n^2-1) w^2 / 2 + w^2 (w + 2n)^2 / 4.
inline double shifted_well(double w, double n) {
  const double a = w + 2.0 * n;
  return 0.5 * (n * n - 1.0) * w * w + 0.25 * w * w * a * a;
}

}  // namespace droplet
