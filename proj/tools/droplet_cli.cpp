// droplet: command-line driver for the droplet laboratory.
//
//   droplet constants --d 2
//   droplet phi-scan  --d 2 --L 200 --k-ratio 2
//   droplet minimize  --L 200 --N 1024 --k-ratio 2 --out runs/super
//   droplet sweep     --L 200 --N 1024 --from 0.5 --to 2 --count 11
//   droplet expand    --L 200 --N 1024 --k-ratio 2
//
// Exit codes: 0 success, 2 precondition failure, 3 convergence failure.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "droplet/analytic.hpp"
#include "droplet/diagnostics.hpp"
#include "droplet/energy.hpp"
#include "droplet/expansion.hpp"
#include "droplet/field.hpp"
#include "droplet/minimizer.hpp"
#include "droplet/profile.hpp"
#include "droplet/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace droplet;

namespace {

constexpr int kExitPrecondition = 2;
constexpr int kExitConvergence = 3;
constexpr const char* kOutEnv = "DROPLET_OUT_DIR";

struct Options {
  int d = 2;
  double L = 200.0;
  int N = 1024;
  std::optional<double> K;
  std::optional<double> k_ratio;
  std::optional<double> n;
  std::string out;
  std::string seeds;
  double tol = 1e-6;
  long max_iters = 200000;
  double tau = 0.0;
  std::string method = "lbfgs";
  int threads = 0;
  int points = 1001;
  double from = 0.5;
  double to = 2.0;
  int count = 11;
  bool skip_minimize = false;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

fs::path output_dir(const Options& o, const std::string& command) {
  if (!o.out.empty()) return o.out;
  const char* env = std::getenv(kOutEnv);
  return fs::path(env && *env ? env : "droplet_out") / command;
}

ProblemSpec make_spec(const Options& o) {
  const int given = int(o.K.has_value()) + int(o.k_ratio.has_value()) + int(o.n.has_value());
  if (given > 1) throw PreconditionError("give at most one of --K, --k-ratio, --n");
  ProblemSpec spec;
  if (o.n) {
    spec = ProblemSpec{o.d, o.L, *o.n};
  } else {
    if (o.d < 2) throw PreconditionError("d must be at least 2");
    const double K_star_d = critical_constants(o.d).K_star;
    const double K = o.K ? *o.K : (o.k_ratio ? *o.k_ratio : 2.0) * K_star_d;
    spec = ProblemSpec::from_K(o.d, o.L, K);
  }
  spec.validate();
  return spec;
}

Grid make_grid(const Options& o) {
  Grid g{o.d, o.N, o.L};
  g.validate();
  if (!g.resolves_interface()) {
    std::ostringstream os;
    os << "resolution error: h = L/N = " << g.h() << " exceeds 0.5; increase --N to at least "
       << static_cast<long>(std::ceil(2.0 * o.L));
    throw PreconditionError(os.str());
  }
  return g;
}

FlowConfig make_flow(const Options& o) {
  FlowConfig cfg;
  cfg.tol_residual = o.tol;
  cfg.max_iters = o.max_iters;
  cfg.step_tau = o.tau;
  cfg.method = parse_flow_method(o.method);
  return cfg;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

/// Labels from default_seeds plus "eta=<x>" fractional droplets.
std::vector<Seed> make_seeds(const std::string& list, const ProblemSpec& spec, const Grid& grid) {
  if (list.empty()) return {};
  const auto defaults = default_seeds(spec, grid);
  std::vector<Seed> seeds;
  for (const auto& tok : split_list(list)) {
    if (tok.rfind("eta=", 0) == 0) {
      double eta = 0.0;
      try {
        eta = std::stod(tok.substr(4));
      } catch (const std::exception&) {
        throw PreconditionError("bad seed '" + tok + "'");
      }
      seeds.push_back({tok, fractional_droplet(grid, spec.n, eta).field});
      continue;
    }
    bool found = false;
    for (const auto& s : defaults) {
      if (s.label == tok) {
        seeds.push_back(s);
        found = true;
      }
    }
    if (!found) throw PreconditionError("seed '" + tok + "' is not available for this problem");
  }
  return seeds;
}

struct Analytic {
  CriticalConstants consts;
  GeometrySummary geo;
  double C = 0.0;
  PhenomenologicalResult pheno;
};

Analytic analytic_for(const ProblemSpec& spec) {
  Analytic a;
  a.consts = critical_constants(spec.d);
  a.geo = geometry(spec);
  a.C = C_of_n(spec, a.consts.S, a.consts.chi);
  a.pheno = minimize_phi(a.C, spec.d);
  return a;
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

// constants ---------------------------------------------------------------

int cmd_constants(const Options& o) {
  const auto t0 = Clock::now();
  if (o.d != 2 && o.d != 3) throw PreconditionError("constants: d must be 2 or 3");
  const int d = o.d;
  const auto c = critical_constants(d);

  CsvTable table({"quantity", "closed_form", "numeric", "abs_gap", "note"});
  json rows = json::array();
  auto row = [&](const std::string& name, double closed, double numeric, const std::string& note) {
    const double gap = std::abs(closed - numeric);
    table.add_row({name, format_double(closed), format_double(numeric), format_double(gap), note});
    rows.push_back({{"quantity", name}, {"closed_form", closed}, {"numeric", numeric}, {"abs_gap", gap}, {"note", note}});
  };
  const double fd = 1e-4;
  const double F2 = (double_well_derivative(-1.0 + fd) - double_well_derivative(-1.0 - fd)) / (2.0 * fd);

  row("S", c.S, surface_tension_quadrature(), "2^{3/2}/3 vs quadrature of sqrt(2F)");
  row("S_gradient_form", c.S, surface_tension_gradient_form(), "integral of mbar'^2");
  row("S_potential_form", c.S, surface_tension_potential_form(), "2 x integral of F(mbar)");
  row("chi", c.chi, 1.0 / F2, "1/F''(-1), central difference");
  row("sigma_d", sphere_area_constant(d), d == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi,
      "unit sphere area");
  row("C_star", c.C_star, C_star_numeric(d), "tangency value vs bisection on the interior minimum");
  row("C_star_printed", c.C_star_printed, c.C_star,
      d == 2 ? "printed closed form, agrees in d=2" : "printed closed form DISAGREES with the tangency value");
  row("eta_star", c.eta_star, std::pow(d * C_star_numeric(d), -d), "(d C_star)^{-d}");
  row("eta_star_printed", c.eta_star_printed, c.eta_star, "printed closed form, exceeds 1: DISCREPANCY");
  row("eta_tie", c.eta_tie, eta_tie_numeric(d), "second minimizer at C = C_star");
  row("K_star", c.K_star, K_star_numeric(d, c.S, c.chi), "closed form vs root of D(K) = C_star");
  row("K_star_printed", c.K_star_printed, c.K_star,
      d == 2 ? "printed closed form, agrees in d=2" : "printed closed form DISAGREES");
  row("M", std::numbers::pi * std::numbers::pi / 6.0, constant_M(), "pi^2/6 vs quadrature");
  row("B", 2.0, constant_B(), "2 vs quadrature");

  std::cout << table.str();

  const fs::path dir = output_dir(o, "constants");
  fs::create_directories(dir);
  write_text_atomic(dir / "constants.csv", table.str());
  write_text_atomic(dir / "constants.json", json{{"d", d}, {"rows", rows}}.dump(2) + "\n");
  RunManifest m;
  m.command = "constants";
  m.spec = {{"d", d}};
  m.output_dir = dir;
  m.artifacts = {"constants.csv", "constants.json"};
  m.wall_clock_seconds = seconds_since(t0);
  write_manifest(m);
  return 0;
}

// phi-scan ----------------------------------------------------------------

int cmd_phi_scan(const Options& o) {
  const auto t0 = Clock::now();
  const auto spec = make_spec(o);
  if (o.points < 2) throw PreconditionError("phi-scan: --points must be at least 2");
  const auto a = analytic_for(spec);
  const double S = a.consts.S;

  CsvTable table({"eta", "phi", "reduced_phi"});
  PlotSeries curve{"Phi(eta)", {}, {}, "#1f77b4", false};
  for (int i = 0; i < o.points; ++i) {
    const double eta = double(i) / (o.points - 1);
    const double r = reduced_phi(eta, a.C, spec.d);
    const double p = phi(eta, a.C, S, a.geo.Gamma0, spec.d);
    table.add_row({format_double(eta), format_double(p), format_double(r)});
    curve.x.push_back(eta);
    curve.y.push_back(p);
  }
  Plot plot{"Phi(eta), regime " + std::string(to_string(a.pheno.regime)), "eta", "Phi", {curve}, {}, {}};
  for (double eta : a.pheno.minimizers) {
    plot.markers.push_back({eta, phi(eta, a.C, S, a.geo.Gamma0, spec.d), "min"});
  }

  json summary = {{"spec", to_json(spec)},
                  {"geometry", to_json(a.geo)},
                  {"phenomenology", to_json(a.pheno)},
                  {"C_star", a.consts.C_star},
                  {"eta_star", a.consts.eta_star},
                  {"phi_min", S * a.geo.Gamma0 * a.pheno.reduced_min}};
  print_json(summary);

  const fs::path dir = output_dir(o, "phi-scan");
  fs::create_directories(dir);
  write_text_atomic(dir / "phi_scan.csv", table.str());
  write_text_atomic(dir / "phi_scan.json", summary.dump(2) + "\n");
  RunManifest m;
  m.command = "phi-scan";
  m.spec = to_json(spec);
  m.output_dir = dir;
  m.artifacts = {"phi_scan.csv", "phi_scan.json"};
  if (write_svg(dir / "phi_scan.svg", plot)) m.artifacts.push_back("phi_scan.svg");
  m.wall_clock_seconds = seconds_since(t0);
  write_manifest(m);
  return 0;
}

// minimize ----------------------------------------------------------------

json field_diagnostics(const Field& field, const ProblemSpec& spec, const Analytic& a) {
  const auto diag = diagnose(field, spec.n, a.pheno.eta_c);
  json conn = json::array();
  for (double level : {diag.h_minus, 0.0, diag.h_plus}) {
    const auto c = level_set_connected(field, level);
    conn.push_back({{"level", level}, {"components", c.components}, {"connected", c.connected}});
  }
  json j = to_json(diag);
  j["connectivity"] = conn;
  j["uniform_sup_distance"] = std::max(field.max() - spec.n, spec.n - field.min());
  j["eta_c_analytic"] = a.pheno.eta_c;
  if (field.grid().d == 2) j["isoperimetric_deficit"] = isoperimetric_deficit(field);
  return j;
}

int cmd_minimize(const Options& o) {
  const auto t0 = Clock::now();
  const auto spec = make_spec(o);
  const auto grid = make_grid(o);
  auto cfg = make_flow(o);
  cfg.seeds = make_seeds(o.seeds, spec, grid);
  const auto a = analytic_for(spec);

  // Everything is computed before the output directory is touched.
  const auto report = minimize(spec, grid, cfg);
  const double gamma0 = a.geo.Gamma0;
  json out = {{"spec", to_json(spec)},
              {"grid", to_json(grid)},
              {"geometry", to_json(a.geo)},
              {"phenomenology", to_json(a.pheno)},
              {"report", to_json(report)},
              {"diagnostics", field_diagnostics(report.best_field, spec, a)}};
  if (gamma0 > 0.0) {
    out["f_L_over_Gamma0"] = report.energy.total / gamma0;
    out["analytic_min_over_Gamma0"] = a.consts.S * a.pheno.reduced_min;
  }
  print_json(out);

  const fs::path dir = output_dir(o, "minimize");
  fs::create_directories(dir);
  write_snapshot((dir / "field.bin").string(), report.best_field, spec.n, report.best_seed);
  write_text_atomic(dir / "energy_trace.csv", trace_table(report.energy_trace).str());
  write_text_atomic(dir / "diagnostics.json", out.dump(2) + "\n");
  RunManifest m;
  m.command = "minimize";
  m.spec = to_json(spec);
  m.grid = to_json(grid);
  m.flow = to_json(cfg);
  m.output_dir = dir;
  m.artifacts = {"field.bin", "energy_trace.csv", "diagnostics.json"};
  PlotSeries tr{"energy", {}, {}, "#1f77b4", false};
  for (const auto& p : report.energy_trace) {
    tr.x.push_back(double(p.iter));
    tr.y.push_back(p.energy);
  }
  if (write_svg(dir / "energy_trace.svg", Plot{"Energy along the flow", "iteration", "energy", {tr}, {}, {}}))
    m.artifacts.push_back("energy_trace.svg");
  m.wall_clock_seconds = seconds_since(t0);
  write_manifest(m);
  return 0;
}

// sweep -------------------------------------------------------------------

struct SweepPoint {
  double ratio = 0.0;
  ProblemSpec spec;
  Analytic analytic;
  std::optional<MinimizeReport> report;
  DropletDiagnostics diag;
  bool converged = false;
  std::string error;
};

int cmd_sweep(const Options& o) {
  const auto t0 = Clock::now();
  if (o.count < 2) throw PreconditionError("sweep: --count must be at least 2");
  if (!(o.from > 0.0 && o.to > o.from)) throw PreconditionError("sweep: need 0 < --from < --to");
  if (!(o.from < 1.0 && o.to > 1.0)) throw PreconditionError("sweep: K range must span K_star");
  const auto grid = make_grid(o);
  const auto cfg = make_flow(o);
  if (!o.seeds.empty()) throw PreconditionError("sweep: --seeds is not supported, every point uses the default seeds");
  const double K_star_d = critical_constants(o.d).K_star;

  std::vector<SweepPoint> pts(o.count);
  for (int i = 0; i < o.count; ++i) {
    pts[i].ratio = o.from + (o.to - o.from) * i / (o.count - 1);
    pts[i].spec = ProblemSpec::from_K(o.d, o.L, pts[i].ratio * K_star_d);
    pts[i].spec.validate();
    pts[i].analytic = analytic_for(pts[i].spec);
  }

  // Points are independent; the kernels inside each run stay serial here
  // because nested parallelism is off.
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < o.count; ++i) {
    auto& p = pts[i];
    try {
      p.report = minimize(p.spec, grid, cfg);
      p.converged = true;
    } catch (const MinimizeError& e) {
      p.report = e.partial();
      p.error = e.what();
    }
    p.diag = diagnose(p.report->best_field, p.spec.n, p.analytic.pheno.eta_c);
  }

  CsvTable table({"K", "K_over_Kstar", "n", "f_L", "f_L_over_Gamma0", "analytic_min_over_Gamma0", "rel_gap",
                  "eta_measured", "eta_c", "classification", "l4_distance", "best_seed", "converged", "residual"});
  PlotSeries numeric{"numeric f_L/|Gamma0|", {}, {}, "#1f77b4", true};
  PlotSeries analytic{"analytic min Phi/|Gamma0|", {}, {}, "#d62728", false};
  int flips = 0;
  std::optional<std::pair<double, double>> bracket;
  bool all_converged = true;
  for (int i = 0; i < o.count; ++i) {
    const auto& p = pts[i];
    const double gamma0 = p.analytic.geo.Gamma0;
    const double f_over = p.report->energy.total / gamma0;
    const double ana = p.analytic.consts.S * p.analytic.pheno.reduced_min;
    table.add_row({format_double(p.spec.K()), format_double(p.ratio), format_double(p.spec.n),
                   format_double(p.report->energy.total), format_double(f_over), format_double(ana),
                   format_double((f_over - ana) / ana), format_double(p.diag.eta_measured),
                   format_double(p.analytic.pheno.eta_c), to_string(p.diag.classification),
                   format_double(p.diag.l4_distance.value_or(0.0)), p.report->best_seed,
                   p.converged ? "1" : "0", format_double(p.report->residual)});
    numeric.x.push_back(p.ratio);
    numeric.y.push_back(f_over);
    analytic.x.push_back(p.ratio);
    analytic.y.push_back(ana);
    all_converged = all_converged && p.converged;
    if (i > 0 && pts[i - 1].diag.classification != p.diag.classification) {
      ++flips;
      if (!bracket) bracket = {pts[i - 1].ratio * K_star_d, p.ratio * K_star_d};
    }
  }

  json summary = {{"d", o.d},
                  {"L", o.L},
                  {"N", o.N},
                  {"K_star", K_star_d},
                  {"flips", flips},
                  {"monotone", flips <= 1},
                  {"all_converged", all_converged}};
  if (bracket) {
    summary["transition_bracket"] = {bracket->first, bracket->second};
    summary["transition_estimate"] = 0.5 * (bracket->first + bracket->second);
    summary["bracket_contains_K_star"] = bracket->first <= K_star_d && K_star_d <= bracket->second;
  } else {
    summary["transition_bracket"] = nullptr;
    summary["transition_estimate"] = nullptr;
    summary["bracket_contains_K_star"] = false;
  }
  json errors = json::array();
  for (const auto& p : pts)
    if (!p.error.empty()) errors.push_back({{"K_over_Kstar", p.ratio}, {"error", p.error}});
  summary["errors"] = errors;
  std::cout << table.str();
  print_json(summary);

  const fs::path dir = output_dir(o, "sweep");
  fs::create_directories(dir);
  write_text_atomic(dir / "sweep.csv", table.str());
  write_text_atomic(dir / "sweep.json", summary.dump(2) + "\n");
  RunManifest m;
  m.command = "sweep";
  m.spec = {{"d", o.d}, {"L", o.L}, {"K_over_Kstar_from", o.from}, {"K_over_Kstar_to", o.to}, {"count", o.count}};
  m.grid = to_json(grid);
  m.flow = to_json(cfg);
  m.output_dir = dir;
  m.artifacts = {"sweep.csv", "sweep.json"};
  Plot plot{"K sweep", "K / K_star", "energy / |Gamma0|", {numeric, analytic}, {}, {1.0}};
  if (write_svg(dir / "sweep.svg", plot)) m.artifacts.push_back("sweep.svg");
  m.wall_clock_seconds = seconds_since(t0);
  write_manifest(m);
  return all_converged ? 0 : kExitConvergence;
}

// expand ------------------------------------------------------------------

int cmd_expand(const Options& o) {
  const auto t0 = Clock::now();
  if (o.d != 2) throw PreconditionError("expand: only d = 2 is supported");
  const auto spec = make_spec(o);
  const auto grid = make_grid(o);
  const auto a = analytic_for(spec);

  auto build = [&](auto&& builder) {
    try {
      return builder(spec, grid);
    } catch (const NoDropletError& e) {
      throw NoDropletError(std::string("expand: no droplet solution at this K (") + e.what() +
                           "); the uniform state is the only first-order critical point");
    }
  };
  const ExpansionField first = build(first_order_solution);
  const ExpansionField second = build(second_order_solution);
  const auto e1 = free_energy(first.field);
  const auto e2 = free_energy(second.field);
  json out = {{"spec", to_json(spec)},
              {"grid", to_json(grid)},
              {"state", to_json(first.state)},
              {"sqrt_eta_c", std::sqrt(a.pheno.eta_c)},
              {"r1_minus_sqrt_eta_c", first.state.r1 - std::sqrt(a.pheno.eta_c)},
              {"first_order",
               {{"energy", e1.total},
                {"radius", first.radius},
                {"mass_defect", first.mass_defect},
                {"discrete_el_residual", euler_lagrange_residual(first.field)},
                {"continuum_residual", continuum_residual(first)}}},
              {"second_order",
               {{"energy", e2.total},
                {"radius", second.radius},
                {"mass_defect", second.mass_defect},
                {"discrete_el_residual", euler_lagrange_residual(second.field)},
                {"continuum_residual", continuum_residual(second)}}}};

  std::optional<MinimizeReport> report;
  if (!o.skip_minimize) {
    auto cfg = make_flow(o);
    cfg.seeds = make_seeds(o.seeds, spec, grid);
    report = minimize(spec, grid, cfg);
    out["minimizer"] = to_json(*report);
    out["energy_gap_first_minus_minimizer"] = e1.total - report->energy.total;
    out["first_order_above_minimizer"] = e1.total >= report->energy.total;
  }
  print_json(out);

  const fs::path dir = output_dir(o, "expand");
  fs::create_directories(dir);
  write_text_atomic(dir / "expand.json", out.dump(2) + "\n");
  write_snapshot((dir / "first_order.bin").string(), first.field, spec.n, "first_order");
  RunManifest m;
  m.command = "expand";
  m.spec = to_json(spec);
  m.grid = to_json(grid);
  if (report) m.flow = to_json(make_flow(o));
  m.output_dir = dir;
  m.artifacts = {"expand.json", "first_order.bin"};
  m.wall_clock_seconds = seconds_since(t0);
  write_manifest(m);
  return 0;
}

void add_problem_flags(CLI::App* sub, Options& o, bool grid) {
  sub->add_option("--d", o.d, "Dimension")->capture_default_str();
  sub->add_option("--L", o.L, "Box side length")->capture_default_str();
  if (grid) sub->add_option("--N", o.N, "Grid cells per side")->capture_default_str();
  sub->add_option("--K", o.K, "Critical-regime coordinate K (n = -1 + K L^{-d/(d+1)})");
  sub->add_option("--k-ratio", o.k_ratio, "K in units of K_star (default 2)");
  sub->add_option("--n", o.n, "Mean magnetization n");
}

void add_flow_flags(CLI::App* sub, Options& o) {
  sub->add_option("--tol", o.tol, "Residual tolerance (sup norm)")->capture_default_str();
  sub->add_option("--max-iters", o.max_iters, "Iteration cap per seed")->capture_default_str();
  sub->add_option("--tau", o.tau, "Explicit step size (0: h^2/(4d))")->capture_default_str();
  sub->add_option("--method", o.method, "Flow method: lbfgs or explicit")->capture_default_str();
  sub->add_option("--seeds", o.seeds, "Comma list: uniform,eta_star,eta_c,equimolar,eta=<x>");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mass-constrained droplet laboratory"};
  app.require_subcommand(1);
  Options o;
  std::string out_help = std::string("Output directory (default: $") + kOutEnv + "/<command> or droplet_out/<command>)";
  app.add_option("--threads", o.threads, "OpenMP threads (0: runtime default)");

  auto* constants = app.add_subcommand("constants", "Critical constants, closed form vs numerics");
  constants->add_option("--d", o.d, "Dimension (2 or 3)")->capture_default_str();
  constants->add_option("--out", o.out, out_help);

  auto* scan = app.add_subcommand("phi-scan", "Tabulate Phi(eta) and mark its minimizers");
  add_problem_flags(scan, o, false);
  scan->add_option("--points", o.points, "Grid points on [0, 1]")->capture_default_str();
  scan->add_option("--out", o.out, out_help);

  auto* mini = app.add_subcommand("minimize", "Minimize the discrete energy at fixed mass");
  add_problem_flags(mini, o, true);
  add_flow_flags(mini, o);
  mini->add_option("--out", o.out, out_help);

  auto* sweep = app.add_subcommand("sweep", "Minimize across K and locate the transition");
  sweep->add_option("--d", o.d, "Dimension")->capture_default_str();
  sweep->add_option("--L", o.L, "Box side length")->capture_default_str();
  sweep->add_option("--N", o.N, "Grid cells per side")->capture_default_str();
  sweep->add_option("--from", o.from, "First K / K_star")->capture_default_str();
  sweep->add_option("--to", o.to, "Last K / K_star")->capture_default_str();
  sweep->add_option("--count", o.count, "Number of K values")->capture_default_str();
  add_flow_flags(sweep, o);
  sweep->add_option("--out", o.out, out_help);

  auto* expand = app.add_subcommand("expand", "Second-order expansion vs direct minimization (d = 2)");
  add_problem_flags(expand, o, true);
  add_flow_flags(expand, o);
  expand->add_flag("--skip-minimize", o.skip_minimize, "Do not run the direct minimizer");
  expand->add_option("--out", o.out, out_help);

  for (auto* sub : {constants, scan, mini, sweep, expand}) {
    sub->add_option("--threads", o.threads, "OpenMP threads (0: runtime default)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitPrecondition;
  }
  if (o.threads > 0) omp_set_num_threads(o.threads);

  try {
    if (*constants) return cmd_constants(o);
    if (*scan) return cmd_phi_scan(o);
    if (*mini) return cmd_minimize(o);
    if (*sweep) return cmd_sweep(o);
    if (*expand) return cmd_expand(o);
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "precondition failure: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::domain_error& e) {
    std::cerr << "precondition failure: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
