// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "droplet/analytic.hpp"
#include "droplet/diagnostics.hpp"
#include "droplet/energy.hpp"
#include "droplet/expansion.hpp"
#include "droplet/field.hpp"
#include "droplet/kernels.hpp"
#include "droplet/minimizer.hpp"
#include "droplet/profile.hpp"
#include "oracles.hpp"

using namespace droplet;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [FAILED]");
  }
};

std::string num(double x, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

// Minimizer runs shared between criteria 6-10.
struct Run {
  ProblemSpec spec;
  MinimizeReport report;
  DropletDiagnostics diag;
};

class RunCache {
 public:
  const Run& get(double L, int N, double ratio) {
    const auto key = std::make_tuple(L, N, ratio);
    auto it = runs_.find(key);
    if (it != runs_.end()) return it->second;
    const auto spec = ProblemSpec::from_K(2, L, ratio * critical_constants(2).K_star);
    const Grid grid{2, N, L};
    const auto t0 = std::chrono::steady_clock::now();
    auto report = minimize(spec, grid, FlowConfig{});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "  run L=%g N=%d K/K*=%g: %s, E=%.10g, %.1f s\n", L, N, ratio, report.best_seed.c_str(),
                 report.energy.total, secs);
    const auto pheno = minimize_phi(C_of_n(spec, planar_surface_tension(), kChi), 2);
    auto diag = diagnose(report.best_field, spec.n, pheno.eta_c > 0.0 ? pheno.eta_c : eta_tie(2));
    return runs_.emplace(key, Run{spec, std::move(report), diag}).first->second;
  }

 private:
  std::map<std::tuple<double, int, double>, Run> runs_;
};

RunCache cache;

Outcome surface_tension() {
  Outcome o;
  const double closed = 2.0 * std::numbers::sqrt2 / 3.0;
  const double q = surface_tension_quadrature();
  const double g = surface_tension_gradient_form();
  const double p = surface_tension_potential_form();
  o.require(std::abs(q - closed) < 1e-8, "quadrature - 2^{3/2}/3 = " + num(q - closed, 3));
  o.require(std::abs(g - q) < 1e-8 && std::abs(p - q) < 1e-8 && std::abs(g - p) < 1e-8,
            "three-way spread " + num(std::max({q, g, p}) - std::min({q, g, p}), 3));
  return o;
}

Outcome constants() {
  Outcome o;
  const auto cc = critical_constants(2);
  const double oracle_C = static_cast<double>(oracle::C_tangency(2));
  o.require(std::abs(cc.C_star - oracle_C) < 1e-9 && std::abs(cc.C_star - 0.9185586535) < 1e-9,
            "C* = " + num(cc.C_star, 12));
  o.require(std::abs(cc.eta_star - 8.0 / 27.0) < 1e-12, "eta* - 8/27 = " + num(cc.eta_star - 8.0 / 27.0, 3));
  const double S = planar_surface_tension();
  const double root = K_star_numeric(2, S, kChi);
  const double oracle_K = static_cast<double>(oracle::K_root(2, oracle::C_tangency(2)));
  o.require(std::abs(cc.K_star - root) < 1e-10 && std::abs(cc.K_star - oracle_K) < 1e-10,
            "K* = " + num(cc.K_star, 12) + " vs root " + num(root, 12));
  const double M = constant_M(), B = constant_B();
  o.require(std::abs(M - oracle::series_M()) < 1e-8 && std::abs(M - kPi * kPi / 6.0) < 1e-8,
            "M - pi^2/6 = " + num(M - kPi * kPi / 6.0, 3));
  o.require(std::abs(B - oracle::by_parts_B()) < 1e-8 && std::abs(B - 2.0) < 1e-8, "B - 2 = " + num(B - 2.0, 3));
  return o;
}

Outcome phenomenological() {
  Outcome o;
  std::mt19937_64 rng(2024);
  for (int d : {2, 3}) {
    const double Cs = C_star(d);
    std::uniform_real_distribution<double> below(0.05, 0.999), above(1.001, 10.0);
    std::vector<double> Cs_list;
    for (int i = 0; i < 100; ++i) Cs_list.push_back(Cs * below(rng));
    for (int i = 0; i < 100; ++i) Cs_list.push_back(Cs * above(rng));
    const oracle::PhiScan scan(d, 10'000'000);
    const auto brute = scan.scan(Cs_list);
    double worst_eta = 0.0, worst_phi = 0.0;
    int regime_mismatch = 0;
    for (std::size_t i = 0; i < Cs_list.size(); ++i) {
      const auto r = minimize_phi(Cs_list[i], d);
      worst_eta = std::max(worst_eta, std::abs(r.eta_c - brute[i].first));
      worst_phi = std::max(worst_phi, std::abs(r.reduced_min - brute[i].second) / brute[i].second);
      const bool droplet_expected = Cs_list[i] > Cs;
      const bool droplet_found = r.regime == Regime::Droplet;
      const bool brute_droplet = brute[i].first > 0.0;
      if (droplet_found != droplet_expected || brute_droplet != droplet_expected) ++regime_mismatch;
    }
    o.require(worst_eta < 1e-6, "d=" + std::to_string(d) + " max |d eta_c| " + num(worst_eta, 3));
    o.require(worst_phi < 1e-10, "d=" + std::to_string(d) + " max rel d Phi " + num(worst_phi, 3));
    o.require(regime_mismatch == 0, "d=" + std::to_string(d) + " regime mismatches " + std::to_string(regime_mismatch));
  }
  return o;
}

Field noise(const Grid& g, std::mt19937_64& rng, double scale, bool zero_mean) {
  std::normal_distribution<double> nd(0.0, scale);
  std::vector<double> v(g.size());
  for (auto& x : v) x = nd(rng);
  Field f(g, std::move(v));
  if (zero_mean) kernels::subtract_constant(f.values(), f.mean());
  return f;
}

Outcome grid_identities() {
  Outcome o;
  std::mt19937_64 rng(7);
  const Grid g{2, 256, 100.0};

  double worst_ftog = 0.0;
  for (double n : {-0.95, -0.8, -0.5, 0.0, 0.4}) {
    for (int k = 0; k < 50; ++k) {
      const auto w = noise(g, rng, 0.3, true);
      Field m(g);
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = n + w[i];
      const double lhs = free_energy(m).total - uniform_energy({2, g.L, n});
      const double rhs = g_functional(w, n);
      worst_ftog = std::max(worst_ftog, std::abs(lhs - rhs) / std::abs(rhs));
    }
  }
  o.require(worst_ftog < 1e-10, "FtoG max rel " + num(worst_ftog, 3));

  const auto spec = ProblemSpec::from_K(2, g.L, 2.0 * critical_constants(2).K_star);
  Field m = fractional_droplet(g, spec.n, 0.7).field;
  const auto bump = noise(g, rng, 0.05, true);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] += bump[i];
  const auto var = first_variation(m);
  double worst_grad = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto dir = noise(g, rng, 1.0, false);
    const double eps = 1e-5;
    Field plus = m, minus = m;
    kernels::axpy(eps, dir.values(), plus.values());
    kernels::axpy(-eps, dir.values(), minus.values());
    const double fd = (free_energy(plus).total - free_energy(minus).total) / (2.0 * eps);
    const double exact = kernels::dot(var.values(), dir.values()) * g.cell_volume();
    worst_grad = std::max(worst_grad, std::abs(fd - exact) / std::abs(exact));
  }
  o.require(worst_grad < 1e-6, "gradient check max rel " + num(worst_grad, 3));

  const double e0 = free_energy(m).total;
  std::uniform_int_distribution<int> us(0, g.N - 1);
  double worst_shift = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::array<int, 2> s{us(rng), us(rng)};
    worst_shift = std::max(worst_shift, std::abs(free_energy(translate(m, s)).total - e0) / e0);
  }
  o.require(worst_shift < 1e-12, "translation max rel " + num(worst_shift, 3));
  return o;
}

Outcome planar_interface() {
  Outcome o;
  const Grid g{2, 512, 40.0};
  Field f(g);
  for (int i = 0; i < g.N; ++i) {
    const double v = planar_profile(std::abs(g.coordinate(i)) - 0.25 * g.L);
    for (int j = 0; j < g.N; ++j) f[static_cast<std::size_t>(i) * g.N + j] = v;
  }
  const double target = 2.0 * planar_surface_tension() * g.L;
  const double rel = std::abs(free_energy(f).total - target) / target;
  o.require(rel < 0.01, "|E - 2SL|/2SL = " + num(rel, 3));
  return o;
}

Outcome subcritical() {
  Outcome o;
  const auto& run = cache.get(200.0, 1024, 0.5);
  const auto& r = run.report;
  const double sup = std::max(r.best_field.max() - run.spec.n, run.spec.n - r.best_field.min());
  o.require(r.converged, "converged");
  o.require(r.best_seed == "uniform", "best seed " + r.best_seed);
  o.require(sup < 1e-3, "sup |m - n| = " + num(sup, 3));
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& s : r.per_seed) {
    if (s.label == "uniform") continue;
    min_gap = std::min(min_gap, s.energy - r.energy.total);
  }
  o.require(min_gap >= 0.0, "min droplet-seed energy gap " + num(min_gap, 3));
  return o;
}

double energy_gap(const Run& run) {
  const double gamma0 = geometry(run.spec).Gamma0;
  const auto pheno = minimize_phi(C_of_n(run.spec, planar_surface_tension(), kChi), 2);
  const double analytic = planar_surface_tension() * pheno.reduced_min;
  return std::abs(run.report.energy.total / gamma0 - analytic) / analytic;
}

Outcome supercritical_energy() {
  Outcome o;
  const auto& small = cache.get(100.0, 512, 2.0);
  const auto& large = cache.get(200.0, 1024, 2.0);
  o.require(small.report.converged && large.report.converged, "converged");
  const double g100 = energy_gap(small), g200 = energy_gap(large);
  o.require(g200 < 0.15, "rel gap f_L/|Gamma0| vs min Phi/|Gamma0| at L=200: " + num(g200, 4));
  o.require(g200 < g100, "gap at L=100: " + num(g100, 4));
  return o;
}

Outcome supercritical_shape() {
  Outcome o;
  const auto& small = cache.get(100.0, 512, 2.0);
  const auto& large = cache.get(200.0, 1024, 2.0);
  const auto eta_c = minimize_phi(C_of_n(large.spec, planar_surface_tension(), kChi), 2).eta_c;
  const double rel = std::abs(large.diag.eta_measured - eta_c) / eta_c;
  o.require(rel < 0.15, "eta " + num(large.diag.eta_measured, 4) + " vs eta_c " + num(eta_c, 4));
  const double l4_small = small.diag.l4_distance.value_or(INFINITY);
  const double l4_large = large.diag.l4_distance.value_or(INFINITY);
  o.require(l4_large < 0.5, "L4 at L=200: " + num(l4_large, 4));
  o.require(l4_large < l4_small, "L4 at L=100: " + num(l4_small, 4));
  const double delta = large.spec.delta(), kappa = large.diag.kappa;
  const double bound = 4.0 * delta * delta / (kappa * kappa) * 200.0 * 200.0;
  o.require(large.diag.vol_A <= bound, "|A| = " + num(large.diag.vol_A, 4) + " <= " + num(bound, 4));
  return o;
}

std::vector<double> sweep_ratios() {
  std::vector<double> r;
  for (int i = 0; i <= 10; ++i) r.push_back(0.5 + 0.15 * i);
  r.back() = 2.0;
  return r;
}

Outcome transition() {
  Outcome o;
  const auto ratios = sweep_ratios();
  std::vector<bool> droplet;
  for (double ratio : ratios) droplet.push_back(cache.get(200.0, 1024, ratio).diag.classification == Classification::Droplet);
  int flips = 0;
  std::size_t at = 0;
  for (std::size_t i = 1; i < droplet.size(); ++i) {
    if (droplet[i] != droplet[i - 1]) ++flips, at = i;
  }
  o.require(flips == 1, "flips " + std::to_string(flips));
  if (flips == 1) {
    o.require(!droplet.front() && droplet.back(), "uniform below, droplet above");
    o.require(ratios[at - 1] <= 1.0 && 1.0 <= ratios[at],
              "bracket [" + num(ratios[at - 1], 3) + ", " + num(ratios[at], 3) + "] K*");
  }
  return o;
}

Outcome expansion() {
  Outcome o;
  const double S = planar_surface_tension();
  double worst_cubic = 0.0, worst_r1 = 0.0;
  for (double ratio : {1.1, 1.5, 2.0, 3.0}) {
    for (double L : {100.0, 200.0, 400.0}) {
      const auto spec = ProblemSpec::from_K(2, L, ratio * critical_constants(2).K_star);
      const auto st = expansion_state(spec);
      const double coeff = st.lambda * st.omega_lambda_area * kChi * S / 2.0;
      const double r = st.r1;
      worst_cubic = std::max(worst_cubic, std::abs(2.0 * kPi * r * r * r - 2.0 * kPi * r + coeff));
      const auto pheno = minimize_phi(C_of_n(spec, S, kChi), 2);
      worst_r1 = std::max(worst_r1, std::abs(r - std::sqrt(pheno.eta_c)));
    }
  }
  o.require(worst_cubic < 1e-10, "cubic residual " + num(worst_cubic, 3));
  o.require(worst_r1 < 1e-6, "max |r1 - sqrt(eta_c)| " + num(worst_r1, 3));

  const double K = 2.0 * critical_constants(2).K_star;
  std::vector<double> radii, residuals;
  for (double r0 : {20.0, 40.0, 80.0}) {
    const double L = std::pow(2.0 * kPi * r0 * r0 / K, 0.75);
    const int N = static_cast<int>(std::ceil(L / 0.5 / 2.0)) * 2;
    const auto sol = first_order_solution(ProblemSpec::from_K(2, L, K), Grid{2, N, L});
    radii.push_back(r0);
    residuals.push_back(continuum_residual(sol));
  }
  const double slope = -oracle::loglog_slope(radii, residuals);
  o.require(slope >= 1.5 && slope <= 2.5, "residual decay exponent " + num(slope, 4));

  int checked = 0, violations = 0;
  double smallest = std::numeric_limits<double>::infinity();
  auto compare = [&](const Run& run) {
    const auto m1 = first_order_solution(run.spec, run.report.best_field.grid());
    const double gap = free_energy(m1.field).total - run.report.energy.total;
    ++checked;
    smallest = std::min(smallest, gap);
    if (gap < 0.0) ++violations;
  };
  compare(cache.get(100.0, 512, 2.0));
  for (double ratio : sweep_ratios()) {
    if (ratio > 1.0) compare(cache.get(200.0, 1024, ratio));
  }
  o.require(violations == 0,
            "E(m1) >= E(min) in " + std::to_string(checked - violations) + "/" + std::to_string(checked) +
                " specs, smallest gap " + num(smallest, 4));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 surface tension", surface_tension},
      {"2 constants", constants},
      {"3 phenomenological minimization", phenomenological},
      {"4 exact grid identities", grid_identities},
      {"5 planar interface energy", planar_interface},
      {"6 subcritical uniform minimizer", subcritical},
      {"7 supercritical energy", supercritical_energy},
      {"8 supercritical droplet shape", supercritical_shape},
      {"9 transition bracketing", transition},
      {"10 expansion consistency", expansion},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.str().c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
