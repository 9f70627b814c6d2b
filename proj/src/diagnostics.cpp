#include "droplet/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "droplet/analytic.hpp"
#include "droplet/errors.hpp"
#include "droplet/profile.hpp"

namespace droplet {

const char* to_string(Classification c) { return c == Classification::Droplet ? "droplet" : "uniform"; }

double partition_kappa(double n, const Grid& grid) {
  const double delta = n + 1.0;
  return std::max(std::cbrt(delta), std::abs(planar_profile_derivative(0.0)) * grid.h());
}

double default_eta_threshold(int d) { return 0.5 * eta_star(d); }

Classification classify(const DropletDiagnostics& diag, double eta_threshold) {
  return diag.eta_measured >= eta_threshold ? Classification::Droplet : Classification::Uniform;
}

DropletDiagnostics partition_volumes(const Field& field, double n) {
  const Grid& g = field.grid();
  if (!(n > -1.0)) throw PreconditionError("partition_volumes needs n > -1");
  DropletDiagnostics diag;
  diag.kappa = partition_kappa(n, g);
  diag.h_plus = 1.0 - diag.kappa;
  diag.h_minus = -1.0 + diag.kappa;
  long long a = 0, b = 0, c = 0;
  const auto v = field.values();
  const std::ptrdiff_t size = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for reduction(+ : a, b, c) schedule(static)
  for (std::ptrdiff_t i = 0; i < size; ++i) {
    if (v[i] >= diag.h_plus) ++c;
    else if (v[i] <= diag.h_minus) ++b;
    else ++a;
  }
  const double cell = g.cell_volume();
  diag.vol_A = a * cell;
  diag.vol_B = b * cell;
  diag.vol_C = c * cell;
  const double ball = sphere_area_constant(g.d) / g.d;
  diag.R = std::pow(diag.vol_C / ball, 1.0 / g.d);
  const double r0 = geometry(ProblemSpec{g.d, g.L, n}).r0;
  diag.eta_measured = r0 > 0.0 ? std::pow(diag.R / r0, g.d) : 0.0;
  diag.classification = classify(diag, default_eta_threshold(g.d));
  return diag;
}

namespace {

std::vector<int> unravel(std::size_t idx, const Grid& g) {
  std::vector<int> c(g.d);
  for (int a = g.d - 1; a >= 0; --a) {
    c[a] = static_cast<int>(idx % g.N);
    idx /= g.N;
  }
  return c;
}

// Circular mean per axis of the cells above the mid-range level; lands on the
// peak for a single droplet, wherever it sits on the torus.
std::vector<int> peak_center(const Field& f) {
  const Grid& g = f.grid();
  const double level = 0.5 * (f.max() + f.min());
  std::vector<double> cs(g.d, 0.0), sn(g.d, 0.0);
  bool any = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] <= level) continue;
    any = true;
    const auto c = unravel(i, g);
    for (int a = 0; a < g.d; ++a) {
      const double th = 2.0 * std::numbers::pi * c[a] / g.N;
      cs[a] += std::cos(th);
      sn[a] += std::sin(th);
    }
  }
  std::vector<int> center(g.d, g.N / 2);
  if (!any) return center;
  for (int a = 0; a < g.d; ++a) {
    double th = std::atan2(sn[a], cs[a]);
    if (th < 0) th += 2.0 * std::numbers::pi;
    center[a] = static_cast<int>(std::lround(th * g.N / (2.0 * std::numbers::pi))) % g.N;
  }
  return center;
}

}  // namespace

double l4_distance_to_sharp(const Field& field, double n, double eta) {
  const Grid& g = field.grid();
  const double r0 = geometry(ProblemSpec{g.d, g.L, n}).r0;
  if (!(r0 > 0.0)) throw PreconditionError("l4_distance_to_sharp needs r0 > 0");
  const auto v = field.values();
  const std::ptrdiff_t size = static_cast<std::ptrdiff_t>(v.size());

  // Outside the ball every cell compares against -1; inside the ball the
  // integrand switches from |m+1|^4 to |m-1|^4.
  double base = 0.0;
#pragma omp parallel for reduction(+ : base) schedule(static)
  for (std::ptrdiff_t i = 0; i < size; ++i) {
    const double e = v[i] + 1.0;
    base += e * e * e * e;
  }

  const Field sharp = sharp_droplet(g, n, eta);
  std::vector<std::vector<int>> ball;
  for (std::size_t i = 0; i < sharp.size(); ++i)
    if (sharp[i] > 0.0) ball.push_back(unravel(i, g));

  const double norm = g.cell_volume() / std::pow(r0, g.d);
  if (ball.empty()) return base * norm;

  const auto center = peak_center(field);
  std::vector<int> origin(g.d);
  for (int a = 0; a < g.d; ++a) origin[a] = center[a] - g.N / 2;

  constexpr int kRadius = 4;
  const int span = 2 * kRadius + 1;
  int total_shifts = 1;
  for (int a = 0; a < g.d; ++a) total_shifts *= span;

  std::vector<double> corrections(total_shifts);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < total_shifts; ++k) {
    std::vector<int> shift(g.d);
    int rem = k;
    for (int a = 0; a < g.d; ++a) {
      shift[a] = origin[a] + rem % span - kRadius;
      rem /= span;
    }
    double corr = 0.0;
    for (const auto& c : ball) {
      std::size_t idx = 0;
      for (int a = 0; a < g.d; ++a) idx = idx * g.N + static_cast<std::size_t>(((c[a] + shift[a]) % g.N + g.N) % g.N);
      const double m = v[idx];
      const double up = m - 1.0, dn = m + 1.0;
      corr += up * up * up * up - dn * dn * dn * dn;
    }
    corrections[k] = corr;
  }
  const double best = *std::min_element(corrections.begin(), corrections.end());
  return std::max(0.0, base + best) * norm;
}

Connectivity level_set_connected(const Field& field, double level) {
  const Grid& g = field.grid();
  const std::size_t size = field.size();
  std::vector<std::size_t> parent(size);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<std::size_t> stride(g.d);
  stride[g.d - 1] = 1;
  for (int a = g.d - 2; a >= 0; --a) stride[a] = stride[a + 1] * g.N;
  for (std::size_t i = 0; i < size; ++i) {
    if (!(field[i] > level)) continue;
    for (int a = 0; a < g.d; ++a) {
      const std::size_t coord = (i / stride[a]) % g.N;
      const std::size_t j = coord + 1 < static_cast<std::size_t>(g.N) ? i + stride[a] : i - coord * stride[a];
      if (field[j] > level) {
        const auto ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  int components = 0;
  for (std::size_t i = 0; i < size; ++i)
    if (field[i] > level && find(i) == i) ++components;
  return {components <= 1, components};
}

double isoperimetric_deficit(const Field& field) {
  const Grid& g = field.grid();
  if (g.d != 2) throw PreconditionError("isoperimetric_deficit is defined for d = 2");
  const int N = g.N;
  const double h = g.h();
  auto at = [&](int i, int j) { return field[static_cast<std::size_t>(((i % N) + N) % N) * N + ((j % N) + N) % N]; };
  double length = 0.0;
  long long inside = 0;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (at(i, j) > 0.0) ++inside;
      // Square with corners (i,j), (i,j+1), (i+1,j+1), (i+1,j); collect the
      // zero crossings on its edges.
      const std::array<double, 4> val{at(i, j), at(i, j + 1), at(i + 1, j + 1), at(i + 1, j)};
      const std::array<std::array<double, 2>, 4> pos{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}};
      std::vector<std::array<double, 2>> cross;
      for (int e = 0; e < 4; ++e) {
        const double a = val[e], b = val[(e + 1) % 4];
        if ((a > 0.0) != (b > 0.0)) {
          const double t = a / (a - b);
          cross.push_back({pos[e][0] + t * (pos[(e + 1) % 4][0] - pos[e][0]),
                           pos[e][1] + t * (pos[(e + 1) % 4][1] - pos[e][1])});
        }
      }
      for (std::size_t k = 0; k + 1 < cross.size(); k += 2) {
        length += h * std::hypot(cross[k][0] - cross[k + 1][0], cross[k][1] - cross[k + 1][1]);
      }
    }
  }
  const double area = inside * h * h;
  return length * length - 4.0 * std::numbers::pi * area;
}

DropletDiagnostics diagnose(const Field& field, double n, double eta_c) {
  auto diag = partition_volumes(field, n);
  if (geometry(ProblemSpec{field.grid().d, field.grid().L, n}).r0 > 0.0) {
    diag.l4_distance = l4_distance_to_sharp(field, n, eta_c);
  }
  return diag;
}

}  // namespace droplet
