#pragma once

// One-dimensional planar interface: the optimal profile -tanh(z/sqrt 2),
// the surface tension as a quadrature, the mollified profile used to build
// droplets on a finite torus, and the first-moment constants M and B.

namespace droplet {

inline double double_well(double m) {
  const double a = m * m - 1.0;
  return 0.25 * a * a;
}
inline double double_well_derivative(double m) { return m * m * m - m; }

/// m(z) = -tanh(z / sqrt 2); +1 phase at z -> -infinity.
double planar_profile(double z);
double planar_profile_derivative(double z);
double planar_profile_second_derivative(double z);

/// S = \int_{-1}^{1} sqrt(2 F(h)) dh.
double surface_tension_quadrature();
/// \int (m')^2 dz over the line.
double surface_tension_gradient_form();
/// 2 \int F(m(z)) dz over the line.
double surface_tension_potential_form();

/// M = \int (sgn z - tanh(z/sqrt 2)) z dz.
double constant_M(double abs_tol = 1e-10);
/// B = \int (m^3 - m) z dz along the planar profile.
double constant_B(double abs_tol = 1e-10);

struct MollifierWidths {
  double inner = 0.0;  // L^{(d-1)/(d+1)}
  double outer = 0.0;  // 2 L^{(d-1)/(d+1)}
};

MollifierWidths mollifier_widths(double L, int d);

/// Odd C^1 profile equal to planar_profile on |z| < inner and to -sgn(z)
/// beyond outer. In between the tail m + 1 is faded out with a smoothstep
/// weight, which keeps the result inside [-1, 1].
double mollified_profile(double z, double L, int d);

/// \int (sgn z + m0(z)) z dz for the mollified profile at box size L; tends
/// to constant_M() as L grows.
double mollified_moment(double L, int d);

}  // namespace droplet
