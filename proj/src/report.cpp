#include "droplet/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace droplet {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::invalid_argument("CSV row width does not match header");
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string());
    os << text;
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

}  // namespace

std::string render_svg(const Plot& plot) {
  constexpr double W = 720, H = 460, left = 80, right = 170, top = 40, bottom = 60;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  auto take = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    xmin = std::min(xmin, x), xmax = std::max(xmax, x);
    ymin = std::min(ymin, y), ymax = std::max(ymax, y);
  };
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) take(s.x[i], s.y[i]);
  for (const auto& m : plot.markers) take(m.x, m.y);
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad, ymax += pad;

  const double pw = W - left - right, ph = H - top - bottom;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(plot.title)
     << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = xmin + k * (xmax - xmin) / 5, yv = ymin + k * (ymax - ymin) / 5;
    os << "<line x1=\"" << sx(xv) << "\" y1=\"" << top + ph << "\" x2=\"" << sx(xv) << "\" y2=\"" << top + ph + 5
       << "\" stroke=\"black\"/>";
    os << "<text x=\"" << sx(xv) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << fmt(xv)
       << "</text>\n";
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(yv) << "\" x2=\"" << left << "\" y2=\"" << sy(yv)
       << "\" stroke=\"black\"/>";
    os << "<text x=\"" << left - 8 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << fmt(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
     << escape_xml(plot.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape_xml(plot.y_label) << "</text>\n";
  for (double xv : plot.vertical_lines) {
    if (xv < xmin || xv > xmax) continue;
    os << "<line x1=\"" << sx(xv) << "\" y1=\"" << top << "\" x2=\"" << sx(xv) << "\" y2=\"" << top + ph
       << "\" stroke=\"gray\" stroke-dasharray=\"4,3\"/>\n";
  }
  double legend_y = top + 10;
  for (const auto& s : plot.series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      os << sx(s.x[i]) << ',' << sy(s.y[i]) << ' ';
    }
    os << "\"/>\n";
    if (s.markers) {
      for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        os << "<circle cx=\"" << sx(s.x[i]) << "\" cy=\"" << sy(s.y[i]) << "\" r=\"3\" fill=\"" << s.color
           << "\"/>";
      }
      os << '\n';
    }
    os << "<line x1=\"" << W - right + 10 << "\" y1=\"" << legend_y << "\" x2=\"" << W - right + 30 << "\" y2=\""
       << legend_y << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>";
    os << "<text x=\"" << W - right + 35 << "\" y=\"" << legend_y + 4 << "\">" << escape_xml(s.name)
       << "</text>\n";
    legend_y += 18;
  }
  for (const auto& m : plot.markers) {
    os << "<circle cx=\"" << sx(m.x) << "\" cy=\"" << sy(m.y) << "\" r=\"5\" fill=\"none\" stroke=\"red\"/>";
    os << "<text x=\"" << sx(m.x) + 7 << "\" y=\"" << sy(m.y) - 7 << "\" fill=\"red\">" << escape_xml(m.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

bool write_svg(const std::filesystem::path& path, const Plot& plot) noexcept {
  try {
    write_text_atomic(path, render_svg(plot));
    return true;
  } catch (...) {
    return false;
  }
}

json to_json(const ProblemSpec& spec) {
  return {{"d", spec.d}, {"L", spec.L}, {"n", spec.n}, {"delta", spec.delta()}, {"K", spec.K()}};
}

json to_json(const Grid& grid) {
  return {{"d", grid.d}, {"N", grid.N}, {"L", grid.L}, {"h", grid.h()}};
}

json to_json(const GeometrySummary& g) {
  return {{"V_plus", g.V_plus}, {"r0", g.r0},       {"r_c", g.r_c},
          {"Gamma0", g.Gamma0}, {"delta", g.delta}, {"r0_below_crossover", g.below_crossover}};
}

json to_json(const FlowConfig& c) {
  json seeds = json::array();
  for (const auto& s : c.seeds) seeds.push_back(s.label);
  return {{"method", to_string(c.method)}, {"step_tau", c.step_tau},         {"max_iters", c.max_iters},
          {"tol_residual", c.tol_residual}, {"lbfgs_memory", c.lbfgs_memory}, {"seeds", seeds}};
}

json to_json(const DropletDiagnostics& diag) {
  json j = {{"kappa", diag.kappa},
            {"h_plus", diag.h_plus},
            {"h_minus", diag.h_minus},
            {"vol_A", diag.vol_A},
            {"vol_B", diag.vol_B},
            {"vol_C", diag.vol_C},
            {"R", diag.R},
            {"eta_measured", diag.eta_measured},
            {"classification", to_string(diag.classification)}};
  j["l4_distance"] = diag.l4_distance ? json(*diag.l4_distance) : json(nullptr);
  return j;
}

json to_json(const ExpansionState& s) {
  return {{"lambda", s.lambda}, {"omega_lambda_area", s.omega_lambda_area},
          {"r1", s.r1},         {"K1", s.K1},
          {"mu1", s.mu1},       {"phi1", s.phi1},
          {"r2", s.r2},         {"r_second", s.r_second},
          {"positive_roots", s.positive_roots}, {"globally_stable", s.globally_stable}};
}

json to_json(const PhenomenologicalResult& r) {
  return {{"eta_c", r.eta_c},
          {"reduced_min", r.reduced_min},
          {"C", r.C_of_n},
          {"regime", to_string(r.regime)},
          {"minimizers", r.minimizers}};
}

json to_json(const MinimizeReport& r) {
  json seeds = json::array();
  for (const auto& s : r.per_seed) {
    seeds.push_back({{"label", s.label},
                     {"energy", s.energy},
                     {"residual", s.residual},
                     {"iterations", s.iterations},
                     {"converged", s.converged}});
  }
  return {{"best_seed", r.best_seed},
          {"energy", r.energy.total},
          {"gradient_part", r.energy.gradient_part},
          {"potential_part", r.energy.potential_part},
          {"mass", r.energy.mass},
          {"mu_hat", r.mu_hat},
          {"residual", r.residual},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"tie", r.tie},
          {"apriori_bound_ok", r.apriori_bound_ok},
          {"seeds", seeds}};
}

CsvTable trace_table(const std::vector<TracePoint>& trace) {
  CsvTable t({"iter", "energy", "residual"});
  for (const auto& p : trace) t.add_row({std::to_string(p.iter), format_double(p.energy), format_double(p.residual)});
  return t;
}

json RunManifest::to_json() const {
  return {{"command", command},
          {"format_version", format_version},
          {"spec", spec},
          {"grid", grid},
          {"flow", flow},
          {"output_dir", output_dir.string()},
          {"wall_clock_seconds", wall_clock_seconds},
          {"artifacts", artifacts}};
}

void write_manifest(const RunManifest& manifest) {
  for (const auto& a : manifest.artifacts) {
    if (!std::filesystem::exists(manifest.output_dir / a))
      throw std::runtime_error("manifest names a missing artifact: " + a);
  }
  write_text_atomic(manifest.output_dir / "manifest.json", manifest.to_json().dump(2) + "\n");
}

}  // namespace droplet
