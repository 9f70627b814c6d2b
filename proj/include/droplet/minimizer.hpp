#pragma once

// Mass-constrained minimization of the discrete free energy. Every seed is
// relaxed independently on the affine set {mean(m) = n}; the lowest-energy
// critical point wins.

#include <string>
#include <vector>

#include "droplet/analytic.hpp"
#include "droplet/energy.hpp"
#include "droplet/errors.hpp"
#include "droplet/field.hpp"

namespace droplet {

enum class FlowMethod {
  Explicit,  // projected steepest descent with step halving
  Lbfgs,     // projected limited-memory BFGS with Armijo backtracking
};

const char* to_string(FlowMethod m);
FlowMethod parse_flow_method(const std::string& s);

struct Seed {
  std::string label;
  Field field;
};

struct FlowConfig {
  double step_tau = 0.0;  // 0 selects h^2 / (4d)
  long max_iters = 200000;
  double tol_residual = 1e-6;
  FlowMethod method = FlowMethod::Lbfgs;
  int lbfgs_memory = 8;
  int trace_stride = 50;
  /// Empty selects default_seeds().
  std::vector<Seed> seeds;
};

struct TracePoint {
  long iter = 0;
  double energy = 0.0;
  double residual = 0.0;
};

struct SeedRun {
  std::string label;
  Field field;
  EnergyBreakdown energy;
  double mu_hat = 0.0;
  double residual = 0.0;
  long iterations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

struct SeedSummary {
  std::string label;
  double energy = 0.0;
  double residual = 0.0;
  long iterations = 0;
  bool converged = false;
};

struct MinimizeReport {
  Field best_field;
  std::string best_seed;
  EnergyBreakdown energy;
  double mu_hat = 0.0;
  double residual = 0.0;
  long iterations = 0;
  bool converged = false;
  /// Another seed ended within 1e-10 relative of the best energy.
  bool tie = false;
  /// max(m) <= 1 + delta + 10 tol, the a priori pointwise bound for minimizers.
  bool apriori_bound_ok = true;
  std::vector<SeedSummary> per_seed;
  std::vector<TracePoint> energy_trace;  // best seed, subsampled
};

class MinimizeError : public ConvergenceError {
 public:
  MinimizeError(const std::string& what, MinimizeReport partial)
      : ConvergenceError(what), partial_(std::move(partial)) {}
  const MinimizeReport& partial() const { return partial_; }

 private:
  MinimizeReport partial_;
};

/// Explicit-stability step h^2 / (4d).
double stable_step(const Grid& grid);

/// Removes the mean, so the result is tangent to the mass constraint.
Field project_zero_mean(const Field& direction);

struct FlowStep {
  Field field;
  double tau = 0.0;  // step actually taken after halvings
  double energy = 0.0;
};

/// m <- m - tau P(first_variation(m)). tau is halved until the energy does
/// not increase; ConvergenceError after 30 halvings.
FlowStep flow_step(const Field& field, double tau);

/// Uniform, eta_star droplet, analytic eta_c droplet and equimolar droplet
/// (duplicates and degenerate radii dropped), each with mean exactly n.
std::vector<Seed> default_seeds(const ProblemSpec& spec, const Grid& grid);

/// Relaxes one seed with the configured method. The seed mean defines n.
SeedRun relax(const Seed& seed, const FlowConfig& config);

MinimizeReport minimize(const ProblemSpec& spec, const Grid& grid, const FlowConfig& config);

}  // namespace droplet
