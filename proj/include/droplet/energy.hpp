#pragma once

// Discrete free energy (1/2) \int |grad m|^2 + \int F(m) on the periodic grid,
// its exact first variation, and the shifted functional G used to study
// perturbations w = m - n.

#include "droplet/field.hpp"

namespace droplet {

struct EnergyBreakdown {
  double gradient_part = 0.0;
  double potential_part = 0.0;
  double total = 0.0;
  double mass = 0.0;  // mean of m
};

/// Forward-difference gradient term plus midpoint bulk term. Throws
/// std::domain_error when the field holds non-finite values.
EnergyBreakdown free_energy(const Field& field);

/// -Lap m + F'(m) per cell. Multiplied by the cell volume this is the exact
/// gradient of free_energy().total with respect to the cell values.
Field first_variation(const Field& field);

/// (1/2)\int |grad w|^2 + \int G(w) for a zero-mean perturbation w of the
/// uniform state n, so that F(n + w) = F(n) + G(w).
double g_functional(const Field& w, double n);

/// mu = -mean(first_variation); at a constrained critical point
/// first_variation + mu vanishes identically.
double lagrange_multiplier_estimate(const Field& field);

/// sup |first_variation + mu| with mu from lagrange_multiplier_estimate.
double euler_lagrange_residual(const Field& field);

}  // namespace droplet
