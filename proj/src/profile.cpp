#include "droplet/profile.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "droplet/quadrature.hpp"

namespace droplet {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol) {
  using boost::math::quadrature::gauss_kronrod;
  // The relative termination test is driven well below abs_tol; the error
  // Boost reports is per unit-interval, so rescale it to [a, b].
  QuadratureResult out;
  double err = 0.0;
  out.value = gauss_kronrod<double, 15>::integrate(f, a, b, 25, std::min(abs_tol, 1e-12), &err);
  out.error_estimate = err * 0.5 * std::abs(b - a);
  return out;
}

QuadratureResult integrate_line(const std::function<double(double)>& f, double abs_tol,
                                double cutoff) {
  const auto left = integrate(f, -cutoff, 0.0, 0.5 * abs_tol);
  const auto right = integrate(f, 0.0, cutoff, 0.5 * abs_tol);
  return {left.value + right.value, left.error_estimate + right.error_estimate};
}

namespace {
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

double sech2(double u) {
  const double c = std::cosh(u);
  return 1.0 / (c * c);
}
}  // namespace

double planar_profile(double z) { return -std::tanh(z * kInvSqrt2); }

double planar_profile_derivative(double z) { return -kInvSqrt2 * sech2(z * kInvSqrt2); }

double planar_profile_second_derivative(double z) {
  // m'' = F'(m) along the profile.
  return double_well_derivative(planar_profile(z));
}

double surface_tension_quadrature() {
  return integrate([](double h) { return std::sqrt(2.0 * double_well(h)); }, -1.0, 1.0, 1e-12).value;
}

double surface_tension_gradient_form() {
  return integrate_line([](double z) {
           const double p = planar_profile_derivative(z);
           return p * p;
         }, 1e-12).value;
}

double surface_tension_potential_form() {
  return integrate_line([](double z) { return 2.0 * double_well(planar_profile(z)); }, 1e-12).value;
}

double constant_M(double abs_tol) {
  return integrate_line([](double z) {
           const double s = z > 0 ? 1.0 : (z < 0 ? -1.0 : 0.0);
           return (s - std::tanh(z * kInvSqrt2)) * z;
         }, abs_tol).value;
}

double constant_B(double abs_tol) {
  return integrate_line([](double z) {
           const double m = planar_profile(z);
           return (m * m * m - m) * z;
         }, abs_tol).value;
}

MollifierWidths mollifier_widths(double L, int d) {
  const double w = std::pow(L, double(d - 1) / (d + 1));
  return {w, 2.0 * w};
}

double mollified_profile(double z, double L, int d) {
  const auto w = mollifier_widths(L, d);
  const double a = std::abs(z);
  const double sign = z < 0 ? -1.0 : 1.0;
  if (a < w.inner) return planar_profile(z);
  if (a >= w.outer) return -sign;
  const double t = (a - w.inner) / (w.outer - w.inner);
  const double fade = t * t * (3.0 - 2.0 * t);
  const double tail = 1.0 + planar_profile(a);  // m + 1 on the positive side
  return sign * (-1.0 + tail * (1.0 - fade));
}

double mollified_moment(double L, int d) {
  const double cutoff = mollifier_widths(L, d).outer + 1.0;
  return integrate_line([=](double z) {
           const double s = z > 0 ? 1.0 : (z < 0 ? -1.0 : 0.0);
           return (s + mollified_profile(z, L, d)) * z;
         }, 1e-10, std::max(cutoff, 40.0)).value;
}

}  // namespace droplet
