#include "droplet/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "droplet/kernels.hpp"
#include "droplet/profile.hpp"

namespace droplet {

namespace {

constexpr double kPi = std::numbers::pi;

// Real roots of t^3 + p t + q = 0, polished with Newton steps.
std::vector<double> depressed_cubic_roots(double p, double q) {
  std::vector<double> roots;
  const double disc = -(4.0 * p * p * p + 27.0 * q * q);
  if (disc > 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double theta = std::acos(std::clamp(3.0 * q / (p * m), -1.0, 1.0)) / 3.0;
    for (int k = 0; k < 3; ++k) roots.push_back(m * std::cos(theta - 2.0 * kPi * k / 3.0));
  } else {
    const double s = std::sqrt(std::max(0.0, q * q / 4.0 + p * p * p / 27.0));
    roots.push_back(std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s));
  }
  for (auto& t : roots) {
    for (int it = 0; it < 4; ++it) {
      const double f = (t * t + p) * t + q;
      const double df = 3.0 * t * t + p;
      if (df == 0.0) break;
      t -= f / df;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double interface_constant(double chi, double S, double radius) { return chi * S / (2.0 * radius); }

// mbar(rho - R) + c, clamped to the pure phases more than L/4 from the interface.
double radial_value(double rho, double radius, double c, double L) {
  const double z = rho - radius;
  if (z > 0.25 * L) return -1.0 + c;
  if (z < -0.25 * L) return 1.0 + c;
  return planar_profile(z) + c;
}

ExpansionField build(const ProblemSpec& spec, const Grid& grid, const ExpansionState& state, double r_rescaled,
                     double constant) {
  if (grid.d != 2 || spec.d != 2) throw PreconditionError("the circular expansion is implemented for d = 2");
  grid.validate();
  const double r0 = 1.0 / state.lambda;
  const double radius = r_rescaled * r0;
  const auto rho = radial_distances(grid);
  std::vector<double> v(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) v[i] = radial_value(rho[i], radius, constant, grid.L);
  Field f(grid, std::move(v));
  const double defect = f.mean() - spec.n;
  kernels::subtract_constant(f.values(), defect);
  return {std::move(f), state, radius, constant, defect, -defect};
}

}  // namespace

RadiusRoots solve_r1(double lambda, double omega_area, double S, double chi) {
  if (!(lambda > 0.0) || !(omega_area > 0.0)) throw PreconditionError("solve_r1 needs lambda > 0 and area > 0");
  const double coeff = lambda * omega_area * chi * S / 2.0;
  RadiusRoots out;
  out.real_roots = depressed_cubic_roots(-1.0, coeff / (2.0 * kPi));
  for (double r : out.real_roots) {
    if (r > 1e-12) out.positive_roots.push_back(r);
  }
  out.no_droplet = out.positive_roots.empty();
  if (!out.no_droplet) out.selected = out.positive_roots.back();
  return out;
}

double reduced_radius_energy(double r, double lambda, double L, double S, double chi) {
  const double bulk = 1.0 - r * r;
  return (2.0 * kPi * r * S + std::pow(lambda, -3.0) / (L * L) / chi * 2.0 * kPi * kPi * bulk * bulk) / lambda;
}

ExpansionState expansion_state(const ProblemSpec& spec) {
  spec.validate();
  if (spec.d != 2) throw PreconditionError("the circular expansion is implemented for d = 2");
  const auto geo = geometry(spec);
  const double S = planar_surface_tension();
  const double chi = kChi;
  ExpansionState st;
  st.lambda = 1.0 / geo.r0;
  st.omega_lambda_area = spec.L * spec.L * st.lambda * st.lambda;
  const auto roots = solve_r1(st.lambda, st.omega_lambda_area, S, chi);
  if (roots.no_droplet) throw NoDropletError("first-order radius equation has no positive root");
  st.positive_roots = roots.positive_roots;
  st.r1 = roots.selected;
  st.K1 = 1.0 / st.r1;
  st.mu1 = -st.K1 * S / 2.0;
  st.phi1 = -chi * st.mu1;
  st.r2 = -chi * S / (8.0 * st.r1 * st.r1);
  st.r_second = second_order_radius(st);
  st.globally_stable = reduced_radius_energy(st.r1, st.lambda, spec.L, S, chi) <
                       reduced_radius_energy(0.0, st.lambda, spec.L, S, chi);
  return st;
}

double second_order_radius(const ExpansionState& state) { return state.r1 + state.lambda * state.r2; }

ExpansionField first_order_solution(const ProblemSpec& spec, const Grid& grid) {
  const auto st = expansion_state(spec);
  const double radius = st.r1 / st.lambda;
  return build(spec, grid, st, st.r1, interface_constant(kChi, planar_surface_tension(), radius));
}

ExpansionField second_order_solution(const ProblemSpec& spec, const Grid& grid) {
  const auto st = expansion_state(spec);
  const double S = planar_surface_tension();
  const double first = interface_constant(kChi, S, st.r1 / st.lambda);
  const double even_second = st.lambda * st.lambda * kChi * S / (2.0 * st.r_second);
  return build(spec, grid, st, st.r_second, first + even_second);
}

double continuum_residual(const ExpansionField& sol) {
  const Grid& g = sol.field.grid();
  const double c = sol.constant + sol.shift;
  const double R = sol.radius;
  const double L = g.L;
  auto variation = [&](double rho) {
    const double z = rho - R;
    if (std::abs(z) > 0.25 * L) return double_well_derivative(radial_value(rho, R, c, L));
    const double m = planar_profile(z) + c;
    const double lap = planar_profile_second_derivative(z) + (g.d - 1) * planar_profile_derivative(z) / rho;
    return -lap + double_well_derivative(m);
  };
  const auto rho = radial_distances(g);
  std::vector<double> v(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) v[i] = variation(rho[i]);
  const double mu = -kernels::sum(v) / static_cast<double>(v.size());
  // Radial sup on a fine 1-d sampling out to the cube corner.
  const double rho_max = 0.5 * L * std::sqrt(double(g.d));
  const int samples = 200000;
  double sup = 0.0;
  for (int k = 1; k <= samples; ++k) {
    const double r = rho_max * k / samples;
    sup = std::max(sup, std::abs(variation(r) + mu));
  }
  return sup;
}

}  // namespace droplet
