#pragma once

// Order-by-order approximate solutions of the Euler-Lagrange equation around
// a circular interface (d = 2). Lengths inside ExpansionState are rescaled
// by the equimolar radius r0 (lambda = 1/r0); fields are always built in the
// original units of the grid.

#include <stdexcept>
#include <vector>

#include "droplet/analytic.hpp"
#include "droplet/errors.hpp"
#include "droplet/field.hpp"

namespace droplet {

/// Positive roots of 2 pi r^3 - 2 pi r + lambda |Omega^lambda| chi S / 2 = 0.
struct RadiusRoots {
  std::vector<double> real_roots;      // ascending
  std::vector<double> positive_roots;  // ascending
  bool no_droplet = true;              // no positive root
  double selected = 0.0;               // largest positive root when present
};

RadiusRoots solve_r1(double lambda, double omega_area, double S, double chi);

/// lambda^{-1} (2 pi r S + (lambda^{-3} L^{-2} / chi) 2 pi^2 (1 - r^2)^2), the
/// free energy of the first-order solution as a function of the rescaled radius.
double reduced_radius_energy(double r, double lambda, double L, double S, double chi);

struct ExpansionState {
  double lambda = 0.0;
  double omega_lambda_area = 0.0;  // L^2 lambda^2
  double r1 = 0.0;                 // rescaled radius, units of r0
  double K1 = 0.0;                 // 1 / r1
  double mu1 = 0.0;                // -K1 S / 2
  double phi1 = 0.0;               // chi K1 S / 2
  double r2 = 0.0;                 // -chi S / (8 r1^2)
  double r_second = 0.0;           // r1 + lambda r2
  std::vector<double> positive_roots;
  /// Droplet branch beats the uniform state in reduced_radius_energy.
  bool globally_stable = false;
};

class NoDropletError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Solves the first-order radius equation for a d = 2 spec. Throws
/// NoDropletError when the cubic has no positive root.
ExpansionState expansion_state(const ProblemSpec& spec);

/// r1 + lambda r2.
double second_order_radius(const ExpansionState& state);

struct ExpansionField {
  Field field;
  ExpansionState state;
  double radius = 0.0;        // interface radius in original units
  double constant = 0.0;      // additive constant before the mass fix
  double mass_defect = 0.0;   // mean(field) - n before the mass fix
  double shift = 0.0;         // constant added to make the mean exact
};

/// mbar(|x| - r1 r0) + chi S / (2 r1 r0), then shifted to mean exactly n.
ExpansionField first_order_solution(const ProblemSpec& spec, const Grid& grid);

/// Same construction on the circle of radius r_second r0 with the even
/// second-order constant lambda^2 chi S / (2 r_second) added.
ExpansionField second_order_solution(const ProblemSpec& spec, const Grid& grid);

/// sup over radii of |-m'' - (d-1) m'/rho + F'(m) + mu| for the radial field
/// mbar(rho - radius) + constant, with mu = -mean of the same expression over
/// the grid cells. Uses exact derivatives, so it isolates the expansion error
/// from finite-difference error.
double continuum_residual(const ExpansionField& solution);

}  // namespace droplet
