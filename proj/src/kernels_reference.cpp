#include <cmath>
#include <vector>

#include "droplet/kernels.hpp"
#include "droplet/profile.hpp"

// Straightforward serial versions of the cell kernels. Every neighbor is
// located through an explicit multi-index, which is slow but obviously
// correct; the parallel kernels are checked against these.

namespace droplet::reference {

namespace {

std::vector<int> unravel(std::size_t idx, const Grid& g) {
  std::vector<int> c(g.d);
  for (int a = g.d - 1; a >= 0; --a) {
    c[a] = static_cast<int>(idx % g.N);
    idx /= g.N;
  }
  return c;
}

std::size_t ravel(const std::vector<int>& c, const Grid& g) {
  std::size_t idx = 0;
  for (int a = 0; a < g.d; ++a) idx = idx * g.N + static_cast<std::size_t>(((c[a] % g.N) + g.N) % g.N);
  return idx;
}

std::size_t neighbor(std::size_t idx, int axis, int step, const Grid& g) {
  auto c = unravel(idx, g);
  c[axis] += step;
  return ravel(c, g);
}

}  // namespace

double sum(std::span<const double> a) {
  long double s = 0.0L;
  for (double v : a) s += v;
  return static_cast<double>(s);
}

EnergyParts energy(const Grid& g, std::span<const double> m, Potential pot) {
  const double h = g.h();
  const double vol = std::pow(h, g.d);
  EnergyParts e;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (int a = 0; a < g.d; ++a) {
      const double diff = (m[neighbor(i, a, 1, g)] - m[i]) / h;
      e.gradient += 0.5 * diff * diff * vol;
    }
    const double bulk =
        pot.kind == Potential::Kind::DoubleWell ? double_well(m[i]) : shifted_well(m[i], pot.n);
    e.potential += bulk * vol;
  }
  return e;
}

void variation(const Grid& g, std::span<const double> m, std::span<double> out) {
  const double h = g.h();
  for (std::size_t i = 0; i < m.size(); ++i) {
    double lap = 0.0;
    for (int a = 0; a < g.d; ++a) {
      lap += (m[neighbor(i, a, 1, g)] - 2.0 * m[i] + m[neighbor(i, a, -1, g)]) / (h * h);
    }
    out[i] = -lap + double_well_derivative(m[i]);
  }
}

}  // namespace droplet::reference
