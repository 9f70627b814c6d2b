#pragma once

// Droplet measurements on a field: the three-way partition at thresholds
// +-(1 - kappa), the effective radius and volume fraction of the near-+1
// set, the normalized L^4 distance to a sharp droplet, and connectivity of
// superlevel sets.

#include <optional>
#include <string>

#include "droplet/field.hpp"

namespace droplet {

enum class Classification { Uniform, Droplet };

const char* to_string(Classification c);

struct DropletDiagnostics {
  double kappa = 0.0;
  double h_plus = 0.0;   // 1 - kappa
  double h_minus = 0.0;  // -1 + kappa
  double vol_A = 0.0;    // h_minus < m < h_plus
  double vol_B = 0.0;    // m <= h_minus
  double vol_C = 0.0;    // m >= h_plus
  double R = 0.0;        // (sigma_d/d) R^d = vol_C
  double eta_measured = 0.0;
  std::optional<double> l4_distance;
  Classification classification = Classification::Uniform;
};

/// kappa = max(delta^{1/3}, |mbar'(0)| h): delta^{1/3} unless that is
/// thinner than the jump of the interface profile across one cell.
double partition_kappa(double n, const Grid& grid);

/// Volumes, R and eta only; classification uses the default threshold.
DropletDiagnostics partition_volumes(const Field& field, double n);

/// min over translations of (1/r0^d) \int |m - m_sharp|^4, with m_sharp the
/// sharp droplet of volume fraction eta. The search is centered on the
/// field's peak region and covers +-4 cells on every axis.
double l4_distance_to_sharp(const Field& field, double n, double eta);

/// Half the minimal droplet volume fraction eta_star.
double default_eta_threshold(int d);

Classification classify(const DropletDiagnostics& diag, double eta_threshold);

struct Connectivity {
  bool connected = true;  // at most one component
  int components = 0;
};

/// Face-adjacent periodic components of {m > level}.
Connectivity level_set_connected(const Field& field, double level);

/// d = 2 only: |Gamma|^2 - 4 pi |U| for U = {m > 0}, with |Gamma| from a
/// marching-squares contour. Informational; discretization error is large.
double isoperimetric_deficit(const Field& field);

/// partition_volumes plus the L^4 distance to the eta_c sharp droplet.
DropletDiagnostics diagnose(const Field& field, double n, double eta_c);

}  // namespace droplet
