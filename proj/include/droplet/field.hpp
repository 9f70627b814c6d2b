#pragma once

// Discrete order-parameter fields on the periodic d-torus, stored at cell
// centers of the centered cube [-L/2, L/2)^d in row-major order, together
// with the radial trial-function constructors.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace droplet {

struct Grid {
  int d = 2;
  int N = 256;
  double L = 100.0;

  double h() const { return L / N; }
  std::size_t size() const;
  double cell_volume() const;
  double volume() const;
  /// Cell-center coordinate along one axis.
  double coordinate(int i) const { return -0.5 * L + (i + 0.5) * h(); }
  /// An interface of width ~sqrt 2 must span at least ~3 cells.
  bool resolves_interface() const { return h() <= 0.5; }
  /// d in {2, 3}, N >= 8, L > 0; d = 3 limited to N <= 128.
  void validate() const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

class Field {
 public:
  explicit Field(const Grid& grid, double value = 0.0);
  Field(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& storage() { return values_; }
  const std::vector<double>& storage() const { return values_; }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  double mean() const;
  double max() const;
  double min() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Euclidean distance of every cell center from the origin of the centered cube.
std::vector<double> radial_distances(const Grid& grid);

Field uniform_field(const Grid& grid, double n);

struct TrialField {
  Field field;
  double radius = 0.0;  // interface radius used
  double alpha = 0.0;   // constant added to the profile
};

/// m0(|x| - r0) with no mean correction; requires 0 < r0 <= r_c.
TrialField equimolar_droplet(const Grid& grid, double n);

/// m0(|x| - eta^{1/d} r0) + alpha with alpha fixed by the discrete mean.
TrialField fractional_droplet(const Grid& grid, double n, double eta);

/// +1 inside |x| < eta^{1/d} r0, -1 elsewhere.
Field sharp_droplet(const Grid& grid, double n, double eta);

/// Cyclic shift: out[i + shift] = in[i] componentwise modulo N.
Field translate(const Field& field, std::span<const int> shift);

/// Snapshot file: one JSON header line {"d","N","L","n","tag"} followed by
/// N^d little-endian doubles.
struct Snapshot {
  Field field;
  double n = 0.0;
  std::string tag;
};

void write_snapshot(const std::string& path, const Field& field, double n, const std::string& tag);
Snapshot read_snapshot(const std::string& path);

}  // namespace droplet
