#pragma once

// Closed-form droplet phenomenology on the periodic torus: constraint
// geometry, the volume-fraction free energy Phi(eta) and the critical
// constants separating uniform from droplet minimizers. Everything here is
// generic in the dimension d >= 2 and works in units where the gradient
// coefficient is 1 and F(m) = (m^2 - 1)^2 / 4.

#include <vector>

namespace droplet {

/// One instance of the mass-constrained minimization problem.
struct ProblemSpec {
  int d = 2;
  double L = 200.0;
  double n = -0.9;

  /// Critical-regime coordinate: n = -1 + K L^{-d/(d+1)}.
  static ProblemSpec from_K(int d, double L, double K);

  double delta() const { return n + 1.0; }
  /// Inverse of from_K.
  double K() const;
  /// Throws PreconditionError unless d >= 2, L > 0 and -1 < n < 1.
  /// n = -1 is accepted when allow_pure_phase is set (empty + phase).
  void validate(bool allow_pure_phase = false) const;
};

struct GeometrySummary {
  double V_plus = 0.0;
  double r0 = 0.0;      // equimolar radius
  double r_c = 0.0;     // sphere / cylinder crossover radius
  double Gamma0 = 0.0;  // sigma_d r0^{d-1}
  double delta = 0.0;
  bool below_crossover = true;  // r0 <= r_c
};

struct CriticalConstants {
  double S = 0.0;
  double chi = 0.0;
  double C_star = 0.0;            // C at which Phi(0) ties the interior minimum
  double C_star_printed = 0.0;    // (1/d)((d+1)/2)^{(d+1)/2}; equals C_star only for d = 2
  double eta_star = 0.0;          // (d C_star)^{-d}
  double eta_star_printed = 0.0;  // ((d+1)/2)^{(d+1)/(2d)}, the misprinted closed form
  double eta_tie = 0.0;           // 2/(d+1), the droplet minimizer at C = C_star
  double K_star = 0.0;            // D(K_star) = C_star
  double K_star_printed = 0.0;    // closed form built on C_star_printed
};

enum class Regime { Uniform, Droplet, Critical };

const char* to_string(Regime r);

struct PhenomenologicalResult {
  double eta_c = 0.0;
  /// min over eta of eta^{1-1/d} + C (1-eta)^2, i.e. Phi / (S |Gamma0|).
  double reduced_min = 0.0;
  double C_of_n = 0.0;
  Regime regime = Regime::Uniform;
  /// All global minimizers; two entries {0, eta_tie} in the Critical case.
  std::vector<double> minimizers;
};

inline constexpr double kChi = 0.5;  // 1 / F''(-1)
/// Relative |C - C_star| below which minimize_phi reports Regime::Critical.
inline constexpr double kCriticalTieTolerance = 1e-9;

double planar_surface_tension();  // closed form 2^{3/2}/3

/// Surface area of the unit sphere in R^d, 2 pi^{d/2} / Gamma(d/2).
double sphere_area_constant(int d);

GeometrySummary geometry(const ProblemSpec& spec);

/// Free energy of the uniform field m = n, (n^2 - 1)^2 L^d / 4.
double uniform_energy(const ProblemSpec& spec);

/// Bulk-to-surface coefficient C(n). Both algebraic forms are evaluated and
/// required to agree.
double C_of_n(const ProblemSpec& spec, double S, double chi);

/// Phi(eta) = S |Gamma0| (eta^{1-1/d} + C (1-eta)^2).
double phi(double eta, double C, double S, double Gamma0, int d);

/// Reduced form eta^{1-1/d} + C (1-eta)^2.
double reduced_phi(double eta, double C, int d);

/// ((d+1)/2)^{(d+1)/d} / d: the tangency of eta^{1-1/d} + C(1-eta)^2 with C.
double C_star(int d);
double C_star_printed(int d);
double eta_star(int d);
double eta_star_printed(int d);
/// 2/(d+1), where the tangency happens.
double eta_tie(int d);
/// Solves D(K) = C_star(d) in closed form.
double K_star(int d, double S, double chi);
double K_star_printed(int d, double S, double chi);
double D_of_K(double K, int d, double S, double chi);

CriticalConstants critical_constants(int d);

PhenomenologicalResult minimize_phi(double C, int d);

/// Smallest C for which Phi has an interior stationary point (a metastable
/// droplet); below it the only critical point on [0, 1] is eta = 0.
double C_spinodal(int d);

// Numerical counterparts of the closed forms, used as cross-checks.

/// C at which min over eta in (0, 1] of reduced_phi touches reduced_phi(0):
/// Brent minimization inside a bisection on C.
double C_star_numeric(int d);
/// Location of that touching minimum.
double eta_tie_numeric(int d);
/// Root of D(K) = C_star(d) in K.
double K_star_numeric(int d, double S, double chi);

}  // namespace droplet
