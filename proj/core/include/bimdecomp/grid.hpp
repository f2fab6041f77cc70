#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bimdecomp/expr.hpp"
#include "bimdecomp/mat3.hpp"
#include "bimdecomp/tolerances.hpp"

namespace bimdecomp {

// Uniform tensor-product grid over the chart domain, with ghost layers
// extending past the bounds so interior stencils stay central.  A
// dimension with a single point is inactive (symmetry direction):
// derivatives along it vanish identically.
struct GridSpec {
  Chart chart;
  std::array<int, 3> points{1, 1, 1};  // interior points per dimension
  int ghosts = 2;

  // derived
  std::array<bool, 3> active{false, false, false};
  std::array<int, 3> stored{1, 1, 1};  // points + 2*ghosts on active dims
  std::array<double, 3> spacing{0.0, 0.0, 0.0};

  // Validates (>= 9 interior points per active dimension, ghosts >= 2,
  // positivity assumptions hold over the ghost-extended domain) and fills
  // the derived members.  Throws ConfigError.
  static GridSpec create(const Chart& chart, const std::array<int, 3>& points,
                         int ghosts);

  double coord(int dim, int stored_index) const {
    if (!active[static_cast<std::size_t>(dim)])
      return 0.5 * (chart.lower[static_cast<std::size_t>(dim)] +
                    chart.upper[static_cast<std::size_t>(dim)]);
    return chart.lower[static_cast<std::size_t>(dim)] +
           (stored_index - ghosts) * spacing[static_cast<std::size_t>(dim)];
  }

  std::array<double, 3> point(int i, int j, int k) const {
    return {coord(0, i), coord(1, j), coord(2, k)};
  }

  std::size_t total_stored() const {
    return static_cast<std::size_t>(stored[0]) * static_cast<std::size_t>(stored[1]) *
           static_cast<std::size_t>(stored[2]);
  }

  std::size_t flat(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(stored[1]) +
            static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(stored[2]) +
           static_cast<std::size_t>(k);
  }

  bool interior_index(int dim, int stored_index) const {
    if (!active[static_cast<std::size_t>(dim)]) return stored_index == 0;
    return stored_index >= ghosts &&
           stored_index < ghosts + points[static_cast<std::size_t>(dim)];
  }
};

// Per-point tensor components over the stored grid, flattened
// point-major.  `index_flags` records the index positions ('u' up,
// 'd' down) in storage order; symmetric rank-2 fields store the six
// independent entries in the order 11,12,13,22,23,33.
struct GridField {
  std::array<int, 3> stored{1, 1, 1};
  int ncomp = 1;
  std::string index_flags;
  bool symmetric = false;
  std::vector<double> values;

  static GridField scalar(const GridSpec& spec);
  static GridField vector(const GridSpec& spec, std::string flags);
  static GridField sym_rank2(const GridSpec& spec, std::string flags);
  static GridField rank2(const GridSpec& spec, std::string flags);
  static GridField rank3(const GridSpec& spec, std::string flags);
  static GridField rank4(const GridSpec& spec, std::string flags);
  static GridField components(const GridSpec& spec, int ncomp, std::string flags);

  double& at(const GridSpec& spec, int i, int j, int k, int c = 0) {
    return values[spec.flat(i, j, k) * static_cast<std::size_t>(ncomp) +
                  static_cast<std::size_t>(c)];
  }
  double at(const GridSpec& spec, int i, int j, int k, int c = 0) const {
    return values[spec.flat(i, j, k) * static_cast<std::size_t>(ncomp) +
                  static_cast<std::size_t>(c)];
  }

  // max |value| over interior points, all components
  double max_abs_interior(const GridSpec& spec) const;
};

// ---- pointwise views ------------------------------------------------------

// Rank-3 component index (k,i,j) -> flat; rank-4 (j,k,l,m) -> flat.
constexpr int comp3(int k, int i, int j) { return (k * 3 + i) * 3 + j; }
constexpr int comp4(int j, int k, int l, int m) { return ((j * 3 + k) * 3 + l) * 3 + m; }

SymMat3 get_sym(const GridField& f, const GridSpec& spec, int i, int j, int k);
void set_sym(GridField& f, const GridSpec& spec, int i, int j, int k, const SymMat3& v);
Mat3 get_mat(const GridField& f, const GridSpec& spec, int i, int j, int k);
void set_mat(GridField& f, const GridSpec& spec, int i, int j, int k, const Mat3& v);
Vec3 get_vec(const GridField& f, const GridSpec& spec, int i, int j, int k);
void set_vec(GridField& f, const GridSpec& spec, int i, int j, int k, const Vec3& v);

// Finite-difference weights for the m-th derivative at offset positions
// (in grid-spacing units); exact for polynomials through degree
// npts-1-... (Fornberg's algorithm).
std::vector<double> fd_weights(std::span<const int> offsets, int deriv_order);

// 4th-order derivative of every component along `dim`: central five-point
// stencils in the interior of the stored array, one-sided stencils at the
// stored edges (first derivative five points, second derivative six).
// Inactive dimensions give a zero field.  Throws InsufficientGhost when
// the stored extent cannot hold the stencil.
GridField fd_derivative(const GridSpec& spec, const GridField& field, int dim,
                        int order);

// Pointwise evaluation of an expression (and of its analytic derivative)
// over the stored grid, ghosts included.
GridField eval_over_grid(const GridSpec& spec, const Expr& e,
                         std::span<const double> param_values = {},
                         const ToleranceProfile& tol = {});
GridField analytic_derivative(const GridSpec& spec, const Expr& e, int dim,
                              std::span<const double> param_values = {},
                              const ToleranceProfile& tol = {});

} // namespace bimdecomp
