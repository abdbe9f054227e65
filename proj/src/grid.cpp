#include "doifbp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace doifbp {

Grid::Grid(int dim, std::array<int, 2> cells, std::array<double, 2> spacing, Boundary bc)
    : dim_(dim), cells_(cells), h_(spacing), bc_(bc) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  if (dim == 1) {
    cells_[1] = 1;
    h_[1] = 1.0;
  }
  for (int a = 0; a < dim; ++a) {
    if (cells_[a] < 4) throw std::invalid_argument("grid needs at least 4 cells per axis");
    if (!(h_[a] > 0.0) || !std::isfinite(h_[a])) throw std::invalid_argument("grid spacing must be positive");
  }
}

Grid Grid::uniform(int dim, int cells, double length, Boundary bc) {
  return Grid(dim, {cells, cells}, {length / cells, length / cells}, bc);
}

ScalarField::ScalarField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != g.size()) throw std::invalid_argument("scalar field size does not match grid");
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string("grid mismatch in ") + what);
}

double neighbor(const Grid& g, std::span<const double> s, int i, int j, int di, int dj, Ghost rule) {
  int ni = i + di;
  int nj = j + dj;
  const int nx = g.cells(0);
  const int ny = g.cells(1);
  if (g.bc() == Boundary::periodic) {
    ni = (ni % nx + nx) % nx;
    nj = (nj % ny + ny) % ny;
    return s[g.index(ni, nj)];
  }
  // Dirichlet: one ghost layer mirrored across the wall.
  const bool outside = ni < 0 || ni >= nx || nj < 0 || nj >= ny;
  if (!outside) return s[g.index(ni, nj)];
  const double inner_value = s[g.index(i, j)];
  return rule == Ghost::odd ? -inner_value : inner_value;
}

void centered_derivative(const Grid& g, std::span<const double> s, int axis, Ghost rule, std::span<double> out) {
  const double inv = 1.0 / (2.0 * g.h(axis));
  const int di = axis == 0 ? 1 : 0;
  const int dj = axis == 1 ? 1 : 0;
  for (int j = 0; j < g.cells(1); ++j) {
    for (int i = 0; i < g.cells(0); ++i) {
      out[g.index(i, j)] = (neighbor(g, s, i, j, di, dj, rule) - neighbor(g, s, i, j, -di, -dj, rule)) * inv;
    }
  }
}

VectorField grad(const ScalarField& s, Ghost rule) {
  VectorField out(s.grid);
  for (int a = 0; a < s.grid.dim(); ++a) centered_derivative(s.grid, s.values, a, rule, out.component(a));
  return out;
}

ScalarField div(const VectorField& v, Ghost rule) {
  ScalarField out(v.grid);
  std::vector<double> tmp(v.grid.size());
  for (int a = 0; a < v.grid.dim(); ++a) {
    centered_derivative(v.grid, v.component(a), a, rule, tmp);
    for (std::size_t i = 0; i < tmp.size(); ++i) out[i] += tmp[i];
  }
  return out;
}

void laplacian(const Grid& g, std::span<const double> s, Ghost rule, std::span<double> out) {
  for (int j = 0; j < g.cells(1); ++j) {
    for (int i = 0; i < g.cells(0); ++i) {
      const double c = s[g.index(i, j)];
      double acc = 0.0;
      for (int a = 0; a < g.dim(); ++a) {
        const int di = a == 0 ? 1 : 0;
        const int dj = a == 1 ? 1 : 0;
        const double hh = g.h(a) * g.h(a);
        acc += (neighbor(g, s, i, j, di, dj, rule) - 2.0 * c + neighbor(g, s, i, j, -di, -dj, rule)) / hh;
      }
      out[g.index(i, j)] = acc;
    }
  }
}

ScalarField laplacian(const ScalarField& s, Ghost rule) {
  ScalarField out(s.grid);
  laplacian(s.grid, s.values, rule, out.values);
  return out;
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid, "inner");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc * a.grid.cell_volume();
}

double inner(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid, "inner");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) acc += a.values[i] * b.values[i];
  return acc * a.grid.cell_volume();
}

double lp_norm(const ScalarField& s, double p) {
  if (std::isnan(p) || p < 1.0) throw std::invalid_argument("lp_norm requires p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : s.values) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  if (p == 1.0) {
    for (double v : s.values) acc += std::abs(v);
    return acc * s.grid.cell_volume();
  }
  for (double v : s.values) acc += std::pow(std::abs(v), p);
  return std::pow(acc * s.grid.cell_volume(), 1.0 / p);
}

double integral(const ScalarField& s) {
  double acc = 0.0;
  for (double v : s.values) acc += v;
  return acc * s.grid.cell_volume();
}

}  // namespace doifbp
