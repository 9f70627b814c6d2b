#include "droplet/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "droplet/profile.hpp"

namespace droplet::kernels {

namespace {

constexpr std::ptrdiff_t kBlock = 8192;

// Adds per-block partial sums in block order; the block size is fixed, so
// the result is independent of how OpenMP distributes the blocks.
template <typename BlockFn>
double blocked_sum(std::ptrdiff_t n, BlockFn&& block) {
  const std::ptrdiff_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    const std::ptrdiff_t lo = b * kBlock;
    const std::ptrdiff_t hi = std::min(n, lo + kBlock);
    partial[b] = block(lo, hi);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

struct RowNeighbors {
  int count = 0;                         // d - 1 transverse axes
  std::array<std::ptrdiff_t, 2> next{};  // row index one step forward per axis
  std::array<std::ptrdiff_t, 2> prev{};
};

RowNeighbors row_neighbors(const Grid& g, std::ptrdiff_t r) {
  const std::ptrdiff_t N = g.N;
  RowNeighbors nb;
  nb.count = g.d - 1;
  if (g.d == 2) {
    nb.next[0] = (r + 1) % N;
    nb.prev[0] = (r + N - 1) % N;
  } else {
    const std::ptrdiff_t i0 = r / N, i1 = r % N;
    nb.next[0] = ((i0 + 1) % N) * N + i1;
    nb.prev[0] = ((i0 + N - 1) % N) * N + i1;
    nb.next[1] = i0 * N + (i1 + 1) % N;
    nb.prev[1] = i0 * N + (i1 + N - 1) % N;
  }
  return nb;
}

double bulk(double m, const Potential& pot) {
  return pot.kind == Potential::Kind::DoubleWell ? double_well(m) : shifted_well(m, pot.n);
}

// Per-row sums of squared forward differences and bulk density.
struct RowSums {
  double grad = 0.0;
  double pot = 0.0;
};

RowSums row_energy(const Grid& g, const double* m, std::ptrdiff_t r, const Potential& pot) {
  const std::ptrdiff_t N = g.N;
  const double* row = m + r * N;
  const auto nb = row_neighbors(g, r);
  RowSums s;
  for (std::ptrdiff_t j = 0; j + 1 < N; ++j) {
    const double dx = row[j + 1] - row[j];
    s.grad += dx * dx;
  }
  const double wrap = row[0] - row[N - 1];
  s.grad += wrap * wrap;
  for (int a = 0; a < nb.count; ++a) {
    const double* up = m + nb.next[a] * N;
    for (std::ptrdiff_t j = 0; j < N; ++j) {
      const double dy = up[j] - row[j];
      s.grad += dy * dy;
    }
  }
  for (std::ptrdiff_t j = 0; j < N; ++j) s.pot += bulk(row[j], pot);
  return s;
}

void row_variation(const Grid& g, const double* m, double* out, std::ptrdiff_t r) {
  const std::ptrdiff_t N = g.N;
  const double inv_h2 = 1.0 / (g.h() * g.h());
  const double center = 2.0 * g.d;
  const double* row = m + r * N;
  double* o = out + r * N;
  const auto nb = row_neighbors(g, r);
  for (std::ptrdiff_t j = 0; j < N; ++j) o[j] = center * row[j];
  o[0] -= row[N - 1] + row[1];
  for (std::ptrdiff_t j = 1; j + 1 < N; ++j) o[j] -= row[j - 1] + row[j + 1];
  o[N - 1] -= row[N - 2] + row[0];
  for (int a = 0; a < nb.count; ++a) {
    const double* up = m + nb.next[a] * N;
    const double* dn = m + nb.prev[a] * N;
    for (std::ptrdiff_t j = 0; j < N; ++j) o[j] -= up[j] + dn[j];
  }
  for (std::ptrdiff_t j = 0; j < N; ++j) {
    const double v = row[j];
    o[j] = o[j] * inv_h2 + v * v * v - v;
  }
}

std::ptrdiff_t row_count(const Grid& g) {
  return static_cast<std::ptrdiff_t>(g.size()) / g.N;
}

EnergyParts finish(const Grid& g, const std::vector<RowSums>& rows) {
  double grad = 0.0, pot = 0.0;
  for (const auto& s : rows) {
    grad += s.grad;
    pot += s.pot;
  }
  const double h = g.h();
  return {0.5 * grad * std::pow(h, g.d - 2), pot * g.cell_volume()};
}

}  // namespace

// Neumaier-compensated within each block and across the block partials;
// means of O(1) fields come out exact to a few ulps at any grid size.
double sum(std::span<const double> a) {
  struct Acc {
    double s = 0.0, c = 0.0;
    void add(double x) {
      const double t = s + x;
      c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
      s = t;
    }
  };
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
  const std::ptrdiff_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<Acc> partial(static_cast<std::size_t>(nblocks));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    const std::ptrdiff_t hi = std::min(n, (b + 1) * kBlock);
    for (std::ptrdiff_t i = b * kBlock; i < hi; ++i) partial[b].add(a[i]);
  }
  Acc total;
  for (const auto& p : partial) {
    total.add(p.s);
    total.add(p.c);
  }
  return total.s + total.c;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return blocked_sum(static_cast<std::ptrdiff_t>(a.size()), [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    double s = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

double max_abs(std::span<const double> a) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
  double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void subtract_constant(std::span<double> a, double c) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) a[i] -= c;
}

EnergyParts energy(const Grid& grid, std::span<const double> m, Potential pot) {
  const std::ptrdiff_t rows = row_count(grid);
  std::vector<RowSums> partial(static_cast<std::size_t>(rows));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) partial[r] = row_energy(grid, m.data(), r, pot);
  return finish(grid, partial);
}

void variation(const Grid& grid, std::span<const double> m, std::span<double> out) {
  const std::ptrdiff_t rows = row_count(grid);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) row_variation(grid, m.data(), out.data(), r);
}

EnergyParts energy_and_variation(const Grid& grid, std::span<const double> m, std::span<double> out) {
  const std::ptrdiff_t rows = row_count(grid);
  std::vector<RowSums> partial(static_cast<std::size_t>(rows));
  const Potential pot{};
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    partial[r] = row_energy(grid, m.data(), r, pot);
    row_variation(grid, m.data(), out.data(), r);
  }
  return finish(grid, partial);
}

}  // namespace droplet::kernels
