#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace doifbp {

enum class Boundary { periodic, dirichlet };

/// How the ghost layer is filled on a Dirichlet grid.
///
/// `odd` reflects with a sign flip so the face value is zero (u = 0, f = 0,
/// eta = 0 on the wall). `even` copies the interior value (zero normal
/// gradient); it is the ghost rule for density and for potentials such as
/// the pressure, and it makes `grad` the negative adjoint of an odd-ghost
/// `div`. Periodic grids ignore the rule.
enum class Ghost { odd, even };

/// Uniform rectangular cell-centered grid in one or two dimensions.
class Grid {
 public:
  Grid(int dim, std::array<int, 2> cells, std::array<double, 2> spacing, Boundary bc);

  /// Unit-aspect convenience: `cells` cells per axis covering `length`.
  static Grid uniform(int dim, int cells, double length, Boundary bc);

  int dim() const noexcept { return dim_; }
  int cells(int axis) const noexcept { return cells_[axis]; }
  double h(int axis) const noexcept { return h_[axis]; }
  double length(int axis) const noexcept { return cells_[axis] * h_[axis]; }
  Boundary bc() const noexcept { return bc_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(cells_[0]) * cells_[1]; }
  double cell_volume() const noexcept { return dim_ == 1 ? h_[0] : h_[0] * h_[1]; }
  double volume() const noexcept { return cell_volume() * static_cast<double>(size()); }

  std::size_t index(int i, int j = 0) const noexcept { return static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * cells_[0]; }
  /// Cell-center coordinate along `axis` of cell number `i` on that axis.
  double center(int axis, int i) const noexcept { return (i + 0.5) * h_[axis]; }

  bool operator==(const Grid&) const = default;

 private:
  int dim_;
  std::array<int, 2> cells_;
  std::array<double, 2> h_;
  Boundary bc_;
};

/// One real per cell.
struct ScalarField {
  Grid grid;
  std::vector<double> values;

  explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
  ScalarField(const Grid& g, std::vector<double> v);

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const noexcept { return values.size(); }
};

/// `dim` reals per cell, stored component-major: component c of cell i is
/// values[c * size + i].
struct VectorField {
  Grid grid;
  std::vector<double> values;

  explicit VectorField(const Grid& g, double fill = 0.0) : grid(g), values(g.size() * g.dim(), fill) {}

  std::span<double> component(int c) { return {values.data() + c * grid.size(), grid.size()}; }
  std::span<const double> component(int c) const { return {values.data() + c * grid.size(), grid.size()}; }
  int dim() const noexcept { return grid.dim(); }
};

/// Value of `s` at integer offset (di, dj) from cell (i, j), resolving the
/// ghost layer according to the grid's boundary and `rule`.
double neighbor(const Grid& g, std::span<const double> s, int i, int j, int di, int dj, Ghost rule);

/// Second-order centered derivative along `axis`.
void centered_derivative(const Grid& g, std::span<const double> s, int axis, Ghost rule, std::span<double> out);

/// Second-order centered gradient. Default ghost rule is `even` (potentials).
VectorField grad(const ScalarField& s, Ghost rule = Ghost::even);
/// Centered divergence. Default ghost rule is `odd` (velocity vanishes on the wall).
ScalarField div(const VectorField& v, Ghost rule = Ghost::odd);
/// Five-point (three-point in 1D) Laplacian. Default ghost rule `odd`.
ScalarField laplacian(const ScalarField& s, Ghost rule = Ghost::odd);
void laplacian(const Grid& g, std::span<const double> s, Ghost rule, std::span<double> out);

/// Cell-sum inner product weighted by cell volume.
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);

/// (sum |s|^p dV)^(1/p); p = infinity gives the max norm.
double lp_norm(const ScalarField& s, double p);
/// Integral of s over the domain.
double integral(const ScalarField& s);

void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace doifbp
