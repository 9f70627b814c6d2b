#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "droplet/analytic.hpp"
#include "droplet/diagnostics.hpp"
#include "droplet/energy.hpp"
#include "droplet/minimizer.hpp"

using namespace droplet;

namespace {

ProblemSpec at_ratio(int d, double L, double ratio) {
  return ProblemSpec::from_K(d, L, ratio * critical_constants(d).K_star);
}

bool trace_monotone(const std::vector<TracePoint>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].energy > trace[i - 1].energy + 1e-12 * std::abs(trace[i - 1].energy)) return false;
  }
  return true;
}

Seed droplet_seed(const Grid& g, const ProblemSpec& spec, double eta) {
  return {"eta=" + std::to_string(eta), fractional_droplet(g, spec.n, eta).field};
}

}  // namespace

TEST_CASE("flow method names") {
  CHECK(parse_flow_method("lbfgs") == FlowMethod::Lbfgs);
  CHECK(parse_flow_method("explicit") == FlowMethod::Explicit);
  CHECK(std::string(to_string(FlowMethod::Explicit)) == "explicit");
  CHECK_THROWS_AS(parse_flow_method("newton"), PreconditionError);
}

TEST_CASE("project_zero_mean") {
  const Grid g{2, 32, 10.0};
  const auto zero = project_zero_mean(Field(g, 0.37));
  CHECK(zero.max() == 0.0);
  CHECK(zero.min() == 0.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(g.size());
  for (auto& x : v) x = u(rng) + 0.3;
  const auto p = project_zero_mean(Field(g, v));
  CHECK(std::abs(p.mean()) < 1e-15);
  const auto pp = project_zero_mean(p);
  double diff = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) diff = std::max(diff, std::abs(pp[i] - p[i]));
  CHECK(diff < 1e-15);
}

TEST_CASE("stable step") {
  CHECK(stable_step(Grid{2, 100, 50.0}) == doctest::Approx(0.25 / 8.0));
  CHECK(stable_step(Grid{3, 20, 10.0}) == doctest::Approx(0.25 / 12.0));
}

TEST_CASE("flow_step") {
  const Grid g{2, 512, 200.0};
  const auto spec = at_ratio(2, 200.0, 2.0);
  SUBCASE("constant field is a fixed point") {
    const auto s = flow_step(uniform_field(g, spec.n), stable_step(g));
    CHECK(s.field.max() == doctest::Approx(spec.n).epsilon(1e-15));
    CHECK(s.field.min() == doctest::Approx(spec.n).epsilon(1e-15));
  }
  SUBCASE("energy strictly decreases from an eta = 0.5 droplet and mass is kept") {
    Field m = fractional_droplet(g, spec.n, 0.5).field;
    double e = free_energy(m).total;
    for (int k = 0; k < 20; ++k) {
      const auto s = flow_step(m, stable_step(g));
      CHECK(s.energy < e);
      CHECK(std::abs(s.field.mean() - spec.n) < 1e-12);
      CHECK(s.tau == stable_step(g));
      e = s.energy;
      m = s.field;
    }
  }
  SUBCASE("too large a step is halved") {
    const Field m = fractional_droplet(g, spec.n, 0.5).field;
    const auto s = flow_step(m, 1e4 * stable_step(g));
    CHECK(s.tau < 1e4 * stable_step(g));
    CHECK(s.energy <= free_energy(m).total);
  }
}

TEST_CASE("relax with both methods") {
  const Grid g{2, 64, 24.0};
  const auto spec = at_ratio(2, 24.0, 3.0);
  FlowConfig cfg;
  cfg.trace_stride = 1;
  cfg.tol_residual = 1e-7;
  const Seed seed = droplet_seed(g, spec, 1.0);
  const auto lb = relax(seed, cfg);
  CHECK(lb.converged);
  CHECK(lb.residual < cfg.tol_residual);
  CHECK(euler_lagrange_residual(lb.field) < cfg.tol_residual);
  CHECK(std::abs(lb.field.mean() - spec.n) < 1e-12);
  CHECK(trace_monotone(lb.trace));
  CHECK(lb.mu_hat == doctest::Approx(lagrange_multiplier_estimate(lb.field)).epsilon(1e-9));

  cfg.method = FlowMethod::Explicit;
  cfg.trace_stride = 10;
  const auto ex = relax(seed, cfg);
  CHECK(ex.converged);
  CHECK(std::abs(ex.field.mean() - spec.n) < 1e-12);
  CHECK(trace_monotone(ex.trace));
  // Both reach the same critical point.
  CHECK(ex.energy.total == doctest::Approx(lb.energy.total).epsilon(1e-9));

  // A converged droplet barely moves under another explicit step.
  const auto again = flow_step(lb.field, stable_step(g));
  double change = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) change = std::max(change, std::abs(again.field[i] - lb.field[i]));
  CHECK(change < cfg.tol_residual);

  FlowConfig bad;
  bad.tol_residual = 0.0;
  CHECK_THROWS_AS(relax(seed, bad), PreconditionError);
  bad = FlowConfig{};
  bad.step_tau = 2.0 * stable_step(g);
  CHECK_THROWS_AS(relax(seed, bad), PreconditionError);
}

TEST_CASE("default seeds") {
  const Grid g{2, 128, 50.0};
  const auto super = default_seeds(at_ratio(2, 50.0, 2.0), g);
  REQUIRE(super.size() == 4);
  CHECK(super[0].label == "uniform");
  CHECK(super[1].label == "eta_star");
  CHECK(super[2].label == "eta_c");
  CHECK(super[3].label == "equimolar");
  const auto sub = default_seeds(at_ratio(2, 50.0, 0.5), g);
  CHECK(sub.size() == 3);
  for (const auto& s : super) CHECK(std::abs(s.field.mean() - at_ratio(2, 50.0, 2.0).n) < 1e-14);
}

TEST_CASE("minimize on small problems") {
  const double L = 50.0;
  const Grid g{2, 128, L};
  FlowConfig cfg;
  SUBCASE("subcritical returns the uniform field") {
    const auto spec = at_ratio(2, L, 0.5);
    const auto r = minimize(spec, g, cfg);
    CHECK(r.converged);
    CHECK(r.best_seed == "uniform");
    CHECK(std::max(r.best_field.max() - spec.n, spec.n - r.best_field.min()) < 1e-3);
    for (const auto& s : r.per_seed) CHECK(s.energy >= r.energy.total * (1.0 - 1e-12));
    CHECK(r.apriori_bound_ok);
  }
  SUBCASE("supercritical returns a droplet") {
    const auto spec = at_ratio(2, L, 2.0);
    const auto r = minimize(spec, g, cfg);
    CHECK(r.converged);
    CHECK(r.best_seed != "uniform");
    CHECK(r.residual < cfg.tol_residual);
    CHECK(euler_lagrange_residual(r.best_field) < cfg.tol_residual);
    CHECK(std::abs(r.best_field.mean() - spec.n) < 1e-12);
    CHECK(r.apriori_bound_ok);
    CHECK(r.best_field.max() <= 1.0 + spec.delta() + 10.0 * cfg.tol_residual);
    CHECK(trace_monotone(r.energy_trace));
    const auto diag = partition_volumes(r.best_field, spec.n);
    CHECK(diag.classification == Classification::Droplet);
    // Determinism: a second run is bit-identical.
    const auto again = minimize(spec, g, cfg);
    CHECK(again.energy.total == r.energy.total);
    CHECK(again.best_field.storage() == r.best_field.storage());
    CHECK(again.iterations == r.iterations);
  }
  SUBCASE("unresolvable droplet evaporates") {
    const double rhat = 0.5;
    const ProblemSpec spec{2, L, -1.0 + 2.0 * std::numbers::pi * rhat * rhat / (L * L)};
    const auto r = minimize(spec, g, cfg);
    CHECK(r.best_seed == "uniform");
  }
  SUBCASE("ties prefer the uniform seed") {
    const auto spec = at_ratio(2, L, 0.5);
    FlowConfig c = cfg;
    c.seeds = {{"copy", uniform_field(g, spec.n)}, {"uniform", uniform_field(g, spec.n)}};
    const auto r = minimize(spec, g, c);
    CHECK(r.tie);
    CHECK(r.best_seed == "uniform");
  }
}

TEST_CASE("minimize preconditions and failure") {
  const auto spec = at_ratio(2, 50.0, 2.0);
  FlowConfig cfg;
  CHECK_THROWS_AS(minimize(spec, Grid{2, 64, 50.0}, cfg), PreconditionError);
  CHECK_THROWS_AS(minimize(spec, Grid{2, 128, 60.0}, cfg), PreconditionError);
  CHECK_THROWS_AS(minimize(ProblemSpec{2, 50.0, 0.0}, Grid{2, 128, 50.0}, cfg), PreconditionError);
  FlowConfig other = cfg;
  other.seeds = {{"wrong", uniform_field(Grid{2, 256, 50.0}, spec.n)}};
  CHECK_THROWS_AS(minimize(spec, Grid{2, 128, 50.0}, other), PreconditionError);

  const Grid g{2, 128, 50.0};
  FlowConfig starved = cfg;
  starved.max_iters = 2;
  starved.seeds = {droplet_seed(g, spec, 0.8)};
  try {
    minimize(spec, g, starved);
    FAIL("expected MinimizeError");
  } catch (const MinimizeError& e) {
    CHECK_FALSE(e.partial().converged);
    CHECK(e.partial().iterations == 2);
    CHECK(e.partial().per_seed.size() == 1);
  }
}

TEST_CASE("three-dimensional run") {
  const Grid g{3, 48, 24.0};
  const auto spec = at_ratio(3, 24.0, 1.5);
  REQUIRE(geometry(spec).below_crossover);
  FlowConfig cfg;
  const auto r = minimize(spec, g, cfg);
  CHECK(r.converged);
  CHECK(std::abs(r.best_field.mean() - spec.n) < 1e-12);
}
