#include "droplet/field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "droplet/analytic.hpp"
#include "droplet/errors.hpp"
#include "droplet/kernels.hpp"
#include "droplet/profile.hpp"

namespace droplet {

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int a = 0; a < d; ++a) s *= static_cast<std::size_t>(N);
  return s;
}

double Grid::cell_volume() const { return std::pow(h(), d); }

double Grid::volume() const { return std::pow(L, d); }

void Grid::validate() const {
  if (d != 2 && d != 3) throw PreconditionError("grid dimension must be 2 or 3");
  if (N < 8) throw PreconditionError("grid needs at least 8 points per side");
  if (d == 3 && N > 128) throw PreconditionError("3-d grids are limited to N <= 128");
  if (!(L > 0.0)) throw PreconditionError("grid side length must be positive");
}

Field::Field(const Grid& grid, double value) : grid_(grid), values_(grid.size(), value) {}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw PreconditionError("field payload does not match grid size");
}

double Field::mean() const { return kernels::sum(values_) / static_cast<double>(values_.size()); }

double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }

std::vector<double> radial_distances(const Grid& g) {
  std::vector<double> coord(g.N);
  for (int i = 0; i < g.N; ++i) coord[i] = g.coordinate(i);
  std::vector<double> r(g.size());
  const std::ptrdiff_t N = g.N;
  if (g.d == 2) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < N; ++i)
      for (std::ptrdiff_t j = 0; j < N; ++j) r[i * N + j] = std::hypot(coord[i], coord[j]);
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < N; ++i)
      for (std::ptrdiff_t j = 0; j < N; ++j)
        for (std::ptrdiff_t k = 0; k < N; ++k)
          r[(i * N + j) * N + k] = std::sqrt(coord[i] * coord[i] + coord[j] * coord[j] + coord[k] * coord[k]);
  }
  return r;
}

Field uniform_field(const Grid& grid, double n) {
  grid.validate();
  return Field(grid, n);
}

namespace {

double equimolar_radius(const Grid& grid, double n) {
  return geometry(ProblemSpec{grid.d, grid.L, n}).r0;
}

Field radial_profile(const Grid& grid, double radius) {
  const auto r = radial_distances(grid);
  std::vector<double> v(r.size());
  const std::ptrdiff_t size = static_cast<std::ptrdiff_t>(r.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < size; ++i) v[i] = mollified_profile(r[i] - radius, grid.L, grid.d);
  return Field(grid, std::move(v));
}

}  // namespace

TrialField equimolar_droplet(const Grid& grid, double n) {
  grid.validate();
  const auto geo = geometry(ProblemSpec{grid.d, grid.L, n});
  if (!(geo.r0 > 0.0)) throw PreconditionError("equimolar droplet needs r0 > 0");
  if (!geo.below_crossover) {
    throw PreconditionError("equimolar radius exceeds the sphere/cylinder crossover radius");
  }
  return {radial_profile(grid, geo.r0), geo.r0, 0.0};
}

TrialField fractional_droplet(const Grid& grid, double n, double eta) {
  grid.validate();
  if (!(eta >= 0.0 && eta <= 1.0)) throw PreconditionError("volume fraction must lie in [0, 1]");
  const double radius = std::pow(eta, 1.0 / grid.d) * equimolar_radius(grid, n);
  Field f = radius > 0.0 ? radial_profile(grid, radius) : Field(grid, -1.0);
  const double alpha = n - f.mean();
  for (auto& v : f.values()) v += alpha;
  return {std::move(f), radius, alpha};
}

Field sharp_droplet(const Grid& grid, double n, double eta) {
  grid.validate();
  if (!(eta >= 0.0 && eta <= 1.0)) throw PreconditionError("volume fraction must lie in [0, 1]");
  const double radius = std::pow(eta, 1.0 / grid.d) * equimolar_radius(grid, n);
  const auto r = radial_distances(grid);
  std::vector<double> v(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) v[i] = r[i] < radius ? 1.0 : -1.0;
  return Field(grid, std::move(v));
}

Field translate(const Field& field, std::span<const int> shift) {
  const Grid& g = field.grid();
  if (static_cast<int>(shift.size()) != g.d) throw PreconditionError("shift must have one entry per axis");
  std::vector<std::ptrdiff_t> s(g.d);
  for (int a = 0; a < g.d; ++a) s[a] = ((shift[a] % g.N) + g.N) % g.N;
  const std::ptrdiff_t N = g.N;
  Field out(g);
  const auto in = field.values();
  auto dst = out.values();
  if (g.d == 2) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < N; ++i) {
      const std::ptrdiff_t ti = (i + s[0]) % N;
      for (std::ptrdiff_t j = 0; j < N; ++j) dst[ti * N + (j + s[1]) % N] = in[i * N + j];
    }
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < N; ++i) {
      const std::ptrdiff_t ti = (i + s[0]) % N;
      for (std::ptrdiff_t j = 0; j < N; ++j) {
        const std::ptrdiff_t tj = (j + s[1]) % N;
        for (std::ptrdiff_t k = 0; k < N; ++k)
          dst[(ti * N + tj) * N + (k + s[2]) % N] = in[(i * N + j) * N + k];
      }
    }
  }
  return out;
}

namespace {

void to_little_endian(std::vector<double>& v) {
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& x : v) {
      auto bits = std::bit_cast<std::uint64_t>(x);
      bits = __builtin_bswap64(bits);
      x = std::bit_cast<double>(bits);
    }
  }
}

}  // namespace

void write_snapshot(const std::string& path, const Field& field, double n, const std::string& tag) {
  const Grid& g = field.grid();
  nlohmann::json header{{"d", g.d}, {"N", g.N}, {"L", g.L}, {"n", n}, {"tag", tag}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << header.dump() << '\n';
  std::vector<double> payload(field.values().begin(), field.values().end());
  to_little_endian(payload);
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(double)));
  if (!out) throw std::runtime_error("failed writing " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": missing header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": bad header: " + e.what());
  }
  Grid g{header.at("d").get<int>(), header.at("N").get<int>(), header.at("L").get<double>()};
  g.validate();
  const std::streamoff start = in.tellg();
  in.seekg(0, std::ios::end);
  const std::streamoff bytes = in.tellg() - start;
  const auto expected = static_cast<std::streamoff>(g.size() * sizeof(double));
  if (bytes != expected) {
    throw std::runtime_error(path + ": payload has " + std::to_string(bytes) + " bytes, header implies " +
                             std::to_string(expected));
  }
  in.seekg(start);
  std::vector<double> v(g.size());
  in.read(reinterpret_cast<char*>(v.data()), expected);
  to_little_endian(v);
  return {Field(g, std::move(v)), header.at("n").get<double>(), header.value("tag", std::string{})};
}

}  // namespace droplet
