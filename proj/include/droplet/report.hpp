#pragma once

// Output plumbing shared by the CLI: CSV tables, JSON encodings of the
// numerical reports, minimal SVG line plots and the run manifest.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "droplet/analytic.hpp"
#include "droplet/diagnostics.hpp"
#include "droplet/expansion.hpp"
#include "droplet/minimizer.hpp"

namespace droplet {

inline constexpr int kFormatVersion = 1;

/// Shortest round-trip decimal form; identical doubles print identically.
std::string format_double(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& add_row(std::vector<std::string> cells);
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes through a temporary file and renames, so readers never see a
/// half-written artifact.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool markers = false;
};

struct PlotMarker {
  double x = 0.0;
  double y = 0.0;
  std::string label;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<PlotMarker> markers;
  std::vector<double> vertical_lines;
};

std::string render_svg(const Plot& plot);

/// Best effort: returns false instead of throwing.
bool write_svg(const std::filesystem::path& path, const Plot& plot) noexcept;

nlohmann::json to_json(const ProblemSpec& spec);
nlohmann::json to_json(const Grid& grid);
nlohmann::json to_json(const GeometrySummary& g);
nlohmann::json to_json(const FlowConfig& config);
nlohmann::json to_json(const DropletDiagnostics& diag);
nlohmann::json to_json(const ExpansionState& state);
nlohmann::json to_json(const PhenomenologicalResult& result);
/// Everything except the fields and the trace.
nlohmann::json to_json(const MinimizeReport& report);

CsvTable trace_table(const std::vector<TracePoint>& trace);

struct RunManifest {
  std::string command;
  nlohmann::json spec = nlohmann::json::object();
  nlohmann::json grid = nlohmann::json::object();
  nlohmann::json flow = nlohmann::json::object();
  std::filesystem::path output_dir;
  int format_version = kFormatVersion;
  double wall_clock_seconds = 0.0;
  std::vector<std::string> artifacts;  // relative to output_dir

  nlohmann::json to_json() const;
};

/// Writes manifest.json into output_dir after checking every artifact exists.
void write_manifest(const RunManifest& manifest);

}  // namespace droplet
