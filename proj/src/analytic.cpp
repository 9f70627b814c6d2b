#include "droplet/analytic.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "droplet/errors.hpp"

namespace droplet {

ProblemSpec ProblemSpec::from_K(int d, double L, double K) {
  ProblemSpec spec{d, L, -1.0 + K * std::pow(L, -double(d) / (d + 1))};
  spec.validate(true);
  return spec;
}

double ProblemSpec::K() const { return delta() * std::pow(L, double(d) / (d + 1)); }

void ProblemSpec::validate(bool allow_pure_phase) const {
  if (d < 2) throw PreconditionError("dimension must be >= 2, got " + std::to_string(d));
  if (!(L > 0.0) || !std::isfinite(L)) throw PreconditionError("box side L must be positive");
  const bool lower_ok = allow_pure_phase ? n >= -1.0 : n > -1.0;
  if (!lower_ok || !(n < 1.0)) {
    throw PreconditionError("mean order parameter n must lie in (-1, 1), got " + std::to_string(n));
  }
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Uniform: return "uniform";
    case Regime::Droplet: return "droplet";
    case Regime::Critical: return "critical";
  }
  return "?";
}

double planar_surface_tension() { return 2.0 * std::numbers::sqrt2 / 3.0; }

double sphere_area_constant(int d) {
  if (d < 1) throw std::domain_error("sphere_area_constant: d must be >= 1");
  const double half = 0.5 * d;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

GeometrySummary geometry(const ProblemSpec& spec) {
  spec.validate(true);
  const int d = spec.d;
  const double sigma = sphere_area_constant(d);
  const double Ld = std::pow(spec.L, d);
  GeometrySummary g;
  g.delta = spec.delta();
  g.V_plus = 0.5 * g.delta * Ld;
  g.r0 = std::pow(g.V_plus / (sigma / d), 1.0 / d);
  g.r_c = std::pow(double(d - 1) / d, d - 2) * (sphere_area_constant(d - 1) / sigma) * spec.L;
  g.Gamma0 = sigma * std::pow(g.r0, d - 1);
  g.below_crossover = g.r0 <= g.r_c;
  return g;
}

double uniform_energy(const ProblemSpec& spec) {
  const double a = spec.n * spec.n - 1.0;
  return 0.25 * a * a * std::pow(spec.L, spec.d);
}

double C_of_n(const ProblemSpec& spec, double S, double chi) {
  spec.validate(true);
  if (spec.delta() == 0.0) return 0.0;
  const int d = spec.d;
  const double sigma = sphere_area_constant(d);
  const double r0 = geometry(spec).r0;
  const double via_radius =
      sigma / (2.0 * chi * S) * (4.0 / (d * d)) * std::pow(r0, d + 1) / std::pow(spec.L, d);
  const double via_density = 2.0 / (d * chi * S) * std::pow(sigma / d, -1.0 / d) *
                             std::pow(0.5 * spec.delta(), double(d + 1) / d) * spec.L;
  if (std::abs(via_radius - via_density) > 1e-12 * std::abs(via_density)) {
    throw std::logic_error("C_of_n: radius and density forms disagree");
  }
  return via_density;
}

double reduced_phi(double eta, double C, int d) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::domain_error("phi: eta must lie in [0, 1]");
  const double bulk = 1.0 - eta;
  return std::pow(eta, 1.0 - 1.0 / d) + C * bulk * bulk;
}

double phi(double eta, double C, double S, double Gamma0, int d) {
  return S * Gamma0 * reduced_phi(eta, C, d);
}

double C_star(int d) { return std::pow(0.5 * (d + 1), double(d + 1) / d) / d; }

double C_star_printed(int d) { return std::pow(0.5 * (d + 1), 0.5 * (d + 1)) / d; }

double eta_tie(int d) { return 2.0 / (d + 1); }

double eta_star(int d) { return std::pow(d * C_star(d), -d); }

// Printed closed form; exceeds 1 for every d >= 2 and is kept only so the
// discrepancy with the defining relation stays visible.
double eta_star_printed(int d) { return std::pow(0.5 * (d + 1), double(d + 1) / (2.0 * d)); }

double K_star(int d, double S, double chi) {
  const double sigma = sphere_area_constant(d);
  return (d + 1) * std::pow(sigma / d, 1.0 / (d + 1)) * std::pow(0.5 * chi * S, double(d) / (d + 1));
}

double K_star_printed(int d, double S, double chi) {
  const double sigma = sphere_area_constant(d);
  return 2.0 * std::pow(0.5 * (d + 1), 0.5 * d) * std::pow(sigma / d, 1.0 / (d + 1)) *
         std::pow(0.5 * chi * S, double(d) / (d + 1));
}

double D_of_K(double K, int d, double S, double chi) {
  if (!(K >= 0.0)) throw std::domain_error("D_of_K: K must be non-negative");
  const double sigma = sphere_area_constant(d);
  return 2.0 / (d * chi * S) * std::pow(sigma / d, -1.0 / d) * std::pow(0.5 * K, double(d + 1) / d);
}

CriticalConstants critical_constants(int d) {
  CriticalConstants c;
  c.S = planar_surface_tension();
  c.chi = kChi;
  c.C_star = C_star(d);
  c.C_star_printed = C_star_printed(d);
  c.eta_star = eta_star(d);
  c.eta_star_printed = eta_star_printed(d);
  c.eta_tie = eta_tie(d);
  c.K_star = K_star(d, c.S, c.chi);
  c.K_star_printed = K_star_printed(d, c.S, c.chi);
  return c;
}

namespace {

// Larger root of (1 - 1/d) eta^{-1/d} = 2 C (1 - eta). eta^{1/d}(1 - eta)
// decreases on [1/(d+1), 1] and the root sits at eta_tie for C = C_star, so
// [eta_tie, 1] brackets it for every C >= C_star.
double interior_stationary_point(double C, int d) {
  auto g = [&](double eta) { return 2.0 * C * (1.0 - eta) - (1.0 - 1.0 / d) * std::pow(eta, -1.0 / d); };
  double lo = eta_tie(d);
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

PhenomenologicalResult minimize_phi(double C, int d) {
  if (!(C >= 0.0)) throw std::domain_error("minimize_phi: C must be non-negative");
  PhenomenologicalResult res;
  res.C_of_n = C;
  const double cs = C_star(d);
  if (std::abs(C - cs) <= kCriticalTieTolerance * cs) {
    res.regime = Regime::Critical;
    res.eta_c = eta_tie(d);
    res.reduced_min = reduced_phi(0.0, C, d);
    res.minimizers = {0.0, eta_tie(d)};
    return res;
  }
  if (C < cs) {
    res.regime = Regime::Uniform;
    res.eta_c = 0.0;
    res.reduced_min = C;
    res.minimizers = {0.0};
    return res;
  }
  res.regime = Regime::Droplet;
  res.eta_c = interior_stationary_point(C, d);
  res.reduced_min = reduced_phi(res.eta_c, C, d);
  res.minimizers = {res.eta_c};
  return res;
}

double C_spinodal(int d) {
  // eta^{1/d}(1 - eta) peaks at eta = 1/(d+1).
  const double peak = 1.0 / (d + 1);
  return (1.0 - 1.0 / d) / (2.0 * std::pow(peak, 1.0 / d) * (1.0 - peak));
}

namespace {

// (eta, reduced_phi(eta) - C) at the interior minimum; eta^{1-1/d} is concave
// and C(1-eta)^2 convex, so on [1/(d+1), 1] the sum is unimodal.
std::pair<double, double> interior_gap(double C, int d) {
  auto f = [&](double eta) { return reduced_phi(eta, C, d) - C; };
  auto [eta, val] = boost::math::tools::brent_find_minima(f, 1.0 / (d + 1), 1.0, std::numeric_limits<double>::digits);
  return {eta, val};
}

}  // namespace

double C_star_numeric(int d) {
  double lo = 0.5, hi = 2.0 * d;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (interior_gap(mid, d).second > 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double eta_tie_numeric(int d) { return interior_gap(C_star_numeric(d), d).first; }

double K_star_numeric(int d, double S, double chi) {
  const double target = C_star(d);
  auto f = [&](double K) { return D_of_K(K, d, S, chi) - target; };
  double lo = 1e-6, hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  std::uintmax_t max_iter = 200;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
  return 0.5 * (a + b);
}

}  // namespace droplet
