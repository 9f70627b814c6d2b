#include "droplet/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

#include "droplet/kernels.hpp"

namespace droplet {

const char* to_string(FlowMethod m) { return m == FlowMethod::Explicit ? "explicit" : "lbfgs"; }

FlowMethod parse_flow_method(const std::string& s) {
  if (s == "explicit") return FlowMethod::Explicit;
  if (s == "lbfgs") return FlowMethod::Lbfgs;
  throw PreconditionError("unknown flow method '" + s + "'");
}

double stable_step(const Grid& grid) { return grid.h() * grid.h() / (4.0 * grid.d); }

Field project_zero_mean(const Field& direction) {
  Field out = direction;
  kernels::subtract_constant(out.values(), out.mean());
  return out;
}

namespace {

using Vec = std::vector<double>;

constexpr double kEnergySlack = 1e-12;
constexpr double kArmijo = 1e-4;
constexpr double kSanityBound = 2.0;

// Energy and projected variation at the current iterate.
struct State {
  double energy = 0.0;
  Vec pg;  // variation minus its mean
  double mu = 0.0;
  double residual = 0.0;
};

State evaluate(const Grid& g, const Vec& x) {
  State s;
  s.pg.resize(x.size());
  const auto parts = kernels::energy_and_variation(g, x, s.pg);
  s.energy = parts.gradient + parts.potential;
  const double mean = kernels::sum(s.pg) / static_cast<double>(s.pg.size());
  s.mu = -mean;
  kernels::subtract_constant(s.pg, mean);
  s.residual = kernels::max_abs(s.pg);
  return s;
}

double energy_only(const Grid& g, const Vec& x) {
  const auto parts = kernels::energy(g, x);
  return parts.gradient + parts.potential;
}

void recenter(Vec& x, double n) {
  const double drift = kernels::sum(x) / static_cast<double>(x.size()) - n;
  kernels::subtract_constant(x, drift);
}

void check_sane(const Vec& x) {
  if (kernels::max_abs(x) > kSanityBound || !std::isfinite(kernels::sum(x))) {
    throw ConvergenceError("flow left the sanity bound |m| <= 2");
  }
}

// Two-loop recursion; q enters as the projected gradient and leaves as H q.
void apply_inverse_hessian(const std::deque<std::pair<Vec, Vec>>& history, const std::deque<double>& rho,
                           double gamma, Vec& q) {
  const std::size_t k = history.size();
  std::vector<double> a(k);
  for (std::size_t i = k; i-- > 0;) {
    a[i] = rho[i] * kernels::dot(history[i].first, q);
    kernels::axpy(-a[i], history[i].second, q);
  }
  for (auto& v : q) v *= gamma;
  for (std::size_t i = 0; i < k; ++i) {
    const double b = rho[i] * kernels::dot(history[i].second, q);
    kernels::axpy(a[i] - b, history[i].first, q);
  }
}

SeedRun finish_run(const Seed& seed, const Grid& g, Vec x, const State& st, long iters, bool converged,
                   std::vector<TracePoint> trace) {
  SeedRun run{seed.label, Field(g, std::move(x)), {}, st.mu, st.residual, iters, converged, std::move(trace)};
  run.energy = free_energy(run.field);
  return run;
}

SeedRun relax_explicit(const Seed& seed, const FlowConfig& cfg) {
  const Grid& g = seed.field.grid();
  const double n = seed.field.mean();
  double tau = cfg.step_tau > 0.0 ? cfg.step_tau : stable_step(g);
  Field m = seed.field;
  std::vector<TracePoint> trace;
  long it = 0;
  double residual = euler_lagrange_residual(m);
  double energy = free_energy(m).total;
  trace.push_back({0, energy, residual});
  for (; it < cfg.max_iters && residual >= cfg.tol_residual; ++it) {
    auto step = flow_step(m, tau);
    m = std::move(step.field);
    energy = step.energy;
    residual = euler_lagrange_residual(m);
    if ((it + 1) % cfg.trace_stride == 0) {
      recenter(m.storage(), n);
      check_sane(m.storage());
      trace.push_back({it + 1, energy, residual});
    }
  }
  recenter(m.storage(), n);
  State st = evaluate(g, m.storage());
  if (trace.back().iter != it) trace.push_back({it, st.energy, st.residual});
  return finish_run(seed, g, std::move(m.storage()), st, it, st.residual < cfg.tol_residual, std::move(trace));
}

SeedRun relax_lbfgs(const Seed& seed, const FlowConfig& cfg) {
  const Grid& g = seed.field.grid();
  const double n = seed.field.mean();
  const double vol = g.cell_volume();
  const double tau0 = cfg.step_tau > 0.0 ? cfg.step_tau : stable_step(g);
  const std::size_t memory = static_cast<std::size_t>(std::max(1, cfg.lbfgs_memory));

  Vec x(seed.field.values().begin(), seed.field.values().end());
  State st = evaluate(g, x);
  std::vector<TracePoint> trace{{0, st.energy, st.residual}};
  std::deque<std::pair<Vec, Vec>> history;
  std::deque<double> rho;
  double gamma = tau0;
  Vec dir(x.size()), trial(x.size());
  long it = 0;
  int stalls = 0;

  for (; it < cfg.max_iters && st.residual >= cfg.tol_residual; ++it) {
    dir = st.pg;
    apply_inverse_hessian(history, rho, gamma, dir);
    for (auto& v : dir) v = -v;
    kernels::subtract_constant(dir, kernels::sum(dir) / static_cast<double>(dir.size()));
    double slope = vol * kernels::dot(st.pg, dir);
    if (!(slope < 0.0)) {
      history.clear();
      rho.clear();
      dir = st.pg;
      for (auto& v : dir) v *= -tau0;
      slope = vol * kernels::dot(st.pg, dir);
    }

    // Armijo first. Close to convergence the energy decrease drops below
    // rounding, so a step whose energy stays within the per-step slack is
    // also taken when the directional derivative satisfies the approximate
    // Wolfe test.
    double t = 1.0;
    bool accepted = false;
    std::optional<State> trial_state;
    for (int halving = 0; halving < 40; ++halving) {
      std::copy(x.begin(), x.end(), trial.begin());
      kernels::axpy(t, dir, trial);
      const double e_trial = energy_only(g, trial);
      if (e_trial <= st.energy + kArmijo * t * slope) {
        accepted = true;
        break;
      }
      if (e_trial <= st.energy + kEnergySlack * std::abs(st.energy)) {
        State probe = evaluate(g, trial);
        const double slope_t = vol * kernels::dot(probe.pg, dir);
        if (slope_t <= (2.0 * kArmijo - 1.0) * slope && slope_t >= 0.9 * slope) {
          trial_state = std::move(probe);
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) {
      // Line search exhausted: restart from steepest descent once, then give up.
      if (!history.empty() && stalls == 0) {
        history.clear();
        rho.clear();
        gamma = tau0;
        ++stalls;
        continue;
      }
      break;
    }
    stalls = 0;

    State next = trial_state ? std::move(*trial_state) : evaluate(g, trial);
    Vec s = dir;
    for (auto& v : s) v *= t;
    Vec y = next.pg;
    kernels::axpy(-1.0, st.pg, y);
    const double sy = kernels::dot(s, y);
    const double yy = kernels::dot(y, y);
    if (sy > 1e-14 * std::sqrt(kernels::dot(s, s) * yy)) {
      if (history.size() == memory) {
        history.pop_front();
        rho.pop_front();
      }
      history.emplace_back(std::move(s), std::move(y));
      rho.push_back(1.0 / sy);
      gamma = sy / yy;
    }
    std::swap(x, trial);
    st = std::move(next);

    if ((it + 1) % cfg.trace_stride == 0) {
      recenter(x, n);
      check_sane(x);
      trace.push_back({it + 1, st.energy, st.residual});
    }
  }
  recenter(x, n);
  st = evaluate(g, x);
  if (trace.back().iter != it) trace.push_back({it, st.energy, st.residual});
  return finish_run(seed, g, std::move(x), st, it, st.residual < cfg.tol_residual, std::move(trace));
}

}  // namespace

FlowStep flow_step(const Field& field, double tau) {
  const Grid& g = field.grid();
  Vec pg(field.size());
  const auto parts = kernels::energy_and_variation(g, field.values(), pg);
  const double e0 = parts.gradient + parts.potential;
  kernels::subtract_constant(pg, kernels::sum(pg) / static_cast<double>(pg.size()));
  for (int halving = 0; halving <= 30; ++halving) {
    Field next = field;
    kernels::axpy(-tau, pg, next.values());
    const double e1 = free_energy(next).total;
    if (e1 <= e0 + kEnergySlack * std::abs(e0)) return {std::move(next), tau, e1};
    tau *= 0.5;
  }
  throw ConvergenceError("flow_step: energy still increases after 30 step halvings");
}

std::vector<Seed> default_seeds(const ProblemSpec& spec, const Grid& grid) {
  std::vector<Seed> seeds;
  seeds.push_back({"uniform", uniform_field(grid, spec.n)});
  const auto geo = geometry(spec);
  if (!(geo.r0 > 0.0)) return seeds;
  const auto consts = critical_constants(spec.d);
  const double C = C_of_n(spec, consts.S, consts.chi);
  const auto pheno = minimize_phi(C, spec.d);
  std::vector<std::pair<std::string, double>> etas{{"eta_star", consts.eta_star}};
  if (pheno.eta_c > 0.0 && std::abs(pheno.eta_c - consts.eta_star) > 1e-6) etas.emplace_back("eta_c", pheno.eta_c);
  etas.emplace_back("equimolar", 1.0);
  for (const auto& [label, eta] : etas) {
    seeds.push_back({label, fractional_droplet(grid, spec.n, eta).field});
  }
  return seeds;
}

SeedRun relax(const Seed& seed, const FlowConfig& config) {
  if (!(config.tol_residual > 0.0)) throw PreconditionError("tol_residual must be positive");
  if (config.step_tau > stable_step(seed.field.grid()) * (1.0 + 1e-12)) {
    throw PreconditionError("step_tau exceeds the explicit stability bound h^2/(4d)");
  }
  return config.method == FlowMethod::Explicit ? relax_explicit(seed, config) : relax_lbfgs(seed, config);
}

MinimizeReport minimize(const ProblemSpec& spec, const Grid& grid, const FlowConfig& config) {
  spec.validate();
  grid.validate();
  if (grid.d != spec.d || grid.L != spec.L) throw PreconditionError("grid and problem disagree on d or L");
  if (!grid.resolves_interface()) {
    throw PreconditionError("grid spacing h = " + std::to_string(grid.h()) + " exceeds 0.5");
  }
  if (!geometry(spec).below_crossover) throw PreconditionError("equimolar radius exceeds crossover radius r_c");

  auto seeds = config.seeds.empty() ? default_seeds(spec, grid) : config.seeds;
  for (auto& s : seeds) {
    if (!(s.field.grid() == grid)) throw PreconditionError("seed '" + s.label + "' lives on a different grid");
    // Exact constraint for every seed, whatever its origin.
    recenter(s.field.storage(), spec.n);
  }

  std::vector<SeedRun> runs;
  runs.reserve(seeds.size());
  for (const auto& s : seeds) runs.push_back(relax(s, config));

  MinimizeReport report{runs.front().field, {}, {}, 0.0, 0.0, 0, false, false, true, {}, {}};
  const SeedRun* best = nullptr;
  const SeedRun* best_converged = nullptr;
  for (const auto& r : runs) {
    report.per_seed.push_back({r.label, r.energy.total, r.residual, r.iterations, r.converged});
    if (!best || r.energy.total < best->energy.total) best = &r;
    if (r.converged && (!best_converged || r.energy.total < best_converged->energy.total)) best_converged = &r;
  }
  const SeedRun* chosen = best_converged ? best_converged : best;
  // Near-degenerate energies: prefer the uniform state and flag the tie.
  for (const auto& r : runs) {
    if (&r == chosen || !r.converged) continue;
    if (std::abs(r.energy.total - chosen->energy.total) <= 1e-10 * std::abs(chosen->energy.total)) {
      report.tie = true;
      if (r.label == "uniform") chosen = &r;
    }
  }

  report.best_field = chosen->field;
  report.best_seed = chosen->label;
  report.energy = chosen->energy;
  report.mu_hat = chosen->mu_hat;
  report.residual = chosen->residual;
  report.iterations = chosen->iterations;
  report.converged = chosen->converged;
  report.energy_trace = chosen->trace;
  report.apriori_bound_ok = chosen->field.max() <= 1.0 + spec.delta() + 10.0 * config.tol_residual;
  if (!best_converged) throw MinimizeError("no seed reached the residual tolerance", std::move(report));
  return report;
}

}  // namespace droplet
