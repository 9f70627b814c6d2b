#include "droplet/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "droplet/errors.hpp"
#include "droplet/kernels.hpp"

namespace droplet {

EnergyBreakdown free_energy(const Field& field) {
  const auto parts = kernels::energy(field.grid(), field.values());
  EnergyBreakdown e;
  e.gradient_part = parts.gradient;
  e.potential_part = parts.potential;
  e.total = parts.gradient + parts.potential;
  e.mass = field.mean();
  if (!std::isfinite(e.total) || !std::isfinite(e.mass)) {
    throw std::domain_error("free_energy: field holds non-finite values");
  }
  return e;
}

Field first_variation(const Field& field) {
  Field out(field.grid());
  kernels::variation(field.grid(), field.values(), out.values());
  return out;
}

double g_functional(const Field& w, double n) {
  if (std::abs(w.mean()) > 1e-12) throw PreconditionError("g_functional: perturbation must have zero mean");
  const auto parts = kernels::energy(w.grid(), w.values(), Potential::shifted(n));
  return parts.gradient + parts.potential;
}

double lagrange_multiplier_estimate(const Field& field) { return -first_variation(field).mean(); }

double euler_lagrange_residual(const Field& field) {
  Field v = first_variation(field);
  const double mean = v.mean();
  kernels::subtract_constant(v.values(), mean);
  return kernels::max_abs(v.values());
}

}  // namespace droplet
