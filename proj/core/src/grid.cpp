#include "bimdecomp/grid.hpp"

#include <cmath>

#include "bimdecomp/errors.hpp"

namespace bimdecomp {

GridSpec GridSpec::create(const Chart& chart, const std::array<int, 3>& points,
                          int ghosts) {
  chart.validate();
  if (ghosts < 2) throw ConfigError("grid: ghosts must be >= 2");

  GridSpec s;
  s.chart = chart;
  s.points = points;
  s.ghosts = ghosts;
  for (int d = 0; d < 3; ++d) {
    const auto ud = static_cast<std::size_t>(d);
    const int n = points[ud];
    if (n < 1) throw ConfigError("grid: points must be positive");
    if (n == 1) {
      s.active[ud] = false;
      s.stored[ud] = 1;
      s.spacing[ud] = 0.0;
      continue;
    }
    if (n < 9)
      throw ConfigError("grid: active dimension '" + chart.coords[ud] +
                        "' needs at least 9 interior points");
    s.active[ud] = true;
    s.stored[ud] = n + 2 * ghosts;
    s.spacing[ud] = (chart.upper[ud] - chart.lower[ud]) / (n - 1);
    if (!(s.spacing[ud] > 0.0))
      throw ConfigError("grid: nonpositive spacing along '" + chart.coords[ud] + "'");
    if (chart.strictly_positive[ud]) {
      const double lowest = chart.lower[ud] - ghosts * s.spacing[ud];
      if (lowest <= 0.0)
        throw ConfigError(
            "grid: coordinate '" + chart.coords[ud] +
            "' is flagged strictly positive but the ghost-extended domain "
            "reaches " +
            std::to_string(lowest) +
            "; shrink the grid or move the lower bound away from the "
            "singular value");
    }
  }
  // Inactive dims with a positivity flag: the representative point is the
  // interval midpoint, which the chart guarantees positive already.
  return s;
}

namespace {

GridField make_field(const GridSpec& spec, int ncomp, std::string flags, bool sym) {
  GridField f;
  f.stored = spec.stored;
  f.ncomp = ncomp;
  f.index_flags = std::move(flags);
  f.symmetric = sym;
  f.values.assign(spec.total_stored() * static_cast<std::size_t>(ncomp), 0.0);
  return f;
}

} // namespace

GridField GridField::scalar(const GridSpec& spec) {
  return make_field(spec, 1, "", false);
}
GridField GridField::vector(const GridSpec& spec, std::string flags) {
  return make_field(spec, 3, std::move(flags), false);
}
GridField GridField::sym_rank2(const GridSpec& spec, std::string flags) {
  return make_field(spec, 6, std::move(flags), true);
}
GridField GridField::rank2(const GridSpec& spec, std::string flags) {
  return make_field(spec, 9, std::move(flags), false);
}
GridField GridField::rank3(const GridSpec& spec, std::string flags) {
  return make_field(spec, 27, std::move(flags), false);
}
GridField GridField::rank4(const GridSpec& spec, std::string flags) {
  return make_field(spec, 81, std::move(flags), false);
}
GridField GridField::components(const GridSpec& spec, int ncomp, std::string flags) {
  return make_field(spec, ncomp, std::move(flags), false);
}

SymMat3 get_sym(const GridField& f, const GridSpec& spec, int i, int j, int k) {
  SymMat3 v;
  for (int c = 0; c < 6; ++c) v.s[static_cast<std::size_t>(c)] = f.at(spec, i, j, k, c);
  return v;
}

void set_sym(GridField& f, const GridSpec& spec, int i, int j, int k, const SymMat3& v) {
  for (int c = 0; c < 6; ++c) f.at(spec, i, j, k, c) = v.s[static_cast<std::size_t>(c)];
}

Mat3 get_mat(const GridField& f, const GridSpec& spec, int i, int j, int k) {
  Mat3 v;
  for (int c = 0; c < 9; ++c) v.m[static_cast<std::size_t>(c)] = f.at(spec, i, j, k, c);
  return v;
}

void set_mat(GridField& f, const GridSpec& spec, int i, int j, int k, const Mat3& v) {
  for (int c = 0; c < 9; ++c) f.at(spec, i, j, k, c) = v.m[static_cast<std::size_t>(c)];
}

Vec3 get_vec(const GridField& f, const GridSpec& spec, int i, int j, int k) {
  Vec3 v;
  for (int c = 0; c < 3; ++c) v.v[static_cast<std::size_t>(c)] = f.at(spec, i, j, k, c);
  return v;
}

void set_vec(GridField& f, const GridSpec& spec, int i, int j, int k, const Vec3& v) {
  for (int c = 0; c < 3; ++c) f.at(spec, i, j, k, c) = v.v[static_cast<std::size_t>(c)];
}

double GridField::max_abs_interior(const GridSpec& spec) const {
  double m = 0.0;
  for (int i = 0; i < stored[0]; ++i) {
    if (!spec.interior_index(0, i)) continue;
    for (int j = 0; j < stored[1]; ++j) {
      if (!spec.interior_index(1, j)) continue;
      for (int k = 0; k < stored[2]; ++k) {
        if (!spec.interior_index(2, k)) continue;
        for (int c = 0; c < ncomp; ++c)
          m = std::max(m, std::fabs(at(spec, i, j, k, c)));
      }
    }
  }
  return m;
}

std::vector<double> fd_weights(std::span<const int> offsets, int deriv_order) {
  // Fornberg's recursion for weights at x0 = 0 on arbitrary nodes.
  const int n = static_cast<int>(offsets.size());
  const int m = deriv_order;
  std::vector<double> delta(static_cast<std::size_t>((m + 1) * n * n), 0.0);
  auto d = [&](int mm, int nn, int nu) -> double& {
    return delta[static_cast<std::size_t>((mm * n + nn) * n + nu)];
  };
  d(0, 0, 0) = 1.0;
  double c1 = 1.0;
  for (int nn = 1; nn < n; ++nn) {
    double c2 = 1.0;
    for (int nu = 0; nu < nn; ++nu) {
      const double c3 = offsets[static_cast<std::size_t>(nn)] -
                        offsets[static_cast<std::size_t>(nu)];
      c2 *= c3;
      for (int mm = 0; mm <= std::min(nn, m); ++mm)
        d(mm, nn, nu) =
            (offsets[static_cast<std::size_t>(nn)] * d(mm, nn - 1, nu) -
             (mm > 0 ? mm * d(mm - 1, nn - 1, nu) : 0.0)) /
            c3;
    }
    for (int mm = 0; mm <= std::min(nn, m); ++mm)
      d(mm, nn, nn) = (c1 / c2) * ((mm > 0 ? mm * d(mm - 1, nn - 1, nn - 1) : 0.0) -
                                   offsets[static_cast<std::size_t>(nn - 1)] *
                                       d(mm, nn - 1, nn - 1));
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int nu = 0; nu < n; ++nu) w[static_cast<std::size_t>(nu)] = d(m, n - 1, nu);
  return w;
}

GridField fd_derivative(const GridSpec& spec, const GridField& field, int dim,
                        int order) {
  if (order != 1 && order != 2)
    throw InvalidInput("fd_derivative: order must be 1 or 2");
  GridField out = field;
  const auto ud = static_cast<std::size_t>(dim);
  if (!spec.active[ud]) {
    std::fill(out.values.begin(), out.values.end(), 0.0);
    return out;
  }

  const int npts = (order == 1) ? 5 : 6;
  const int extent = spec.stored[ud];
  if (extent < npts)
    throw InsufficientGhost("fd_derivative: stored extent along dimension " +
                            std::to_string(dim) + " cannot hold the stencil");

  // One weight table per window shift; the central five-point table is
  // used wherever it fits (for order 2 a five-point central stencil is
  // already 4th order, the six-point windows cover the edges).
  const double h = spec.spacing[ud];
  const double hpow = (order == 1) ? h : h * h;

  std::array<std::vector<double>, 8> shift_w;
  std::vector<double> central_w;
  {
    std::array<int, 5> c5 = {-2, -1, 0, 1, 2};
    central_w = fd_weights(std::span<const int>(c5.data(), 5), order);
    for (int s = 0; s < npts; ++s) {
      std::vector<int> offs(static_cast<std::size_t>(npts));
      for (int t = 0; t < npts; ++t) offs[static_cast<std::size_t>(t)] = t - s;
      shift_w[static_cast<std::size_t>(s)] =
          fd_weights(std::span<const int>(offs.data(), offs.size()), order);
    }
  }

  const int nc = field.ncomp;
  for (int i = 0; i < spec.stored[0]; ++i)
    for (int j = 0; j < spec.stored[1]; ++j)
      for (int k = 0; k < spec.stored[2]; ++k) {
        const int t = (dim == 0) ? i : (dim == 1) ? j : k;
        const bool central = (t - 2 >= 0 && t + 2 < extent);
        const int wstart = central ? t - 2 : std::clamp(t - 2, 0, extent - npts);
        const int used = central ? 5 : npts;
        const std::vector<double>& wts =
            central ? central_w : shift_w[static_cast<std::size_t>(t - wstart)];
        for (int c = 0; c < nc; ++c) {
          double acc = 0.0;
          for (int s = 0; s < used; ++s) {
            const int idx = wstart + s;
            const int ii = (dim == 0) ? idx : i;
            const int jj = (dim == 1) ? idx : j;
            const int kk = (dim == 2) ? idx : k;
            acc += wts[static_cast<std::size_t>(s)] * field.at(spec, ii, jj, kk, c);
          }
          out.at(spec, i, j, k, c) = acc / hpow;
        }
      }
  return out;
}

GridField eval_over_grid(const GridSpec& spec, const Expr& e,
                         std::span<const double> param_values,
                         const ToleranceProfile& tol) {
  GridField f = GridField::scalar(spec);
  for (int i = 0; i < spec.stored[0]; ++i)
    for (int j = 0; j < spec.stored[1]; ++j)
      for (int k = 0; k < spec.stored[2]; ++k)
        f.at(spec, i, j, k) = eval(e, spec.point(i, j, k), param_values, tol);
  return f;
}

GridField analytic_derivative(const GridSpec& spec, const Expr& e, int dim,
                              std::span<const double> param_values,
                              const ToleranceProfile& tol) {
  if (!spec.active[static_cast<std::size_t>(dim)]) {
    // Constant along the direction on this grid; consistent with fd_derivative.
    return GridField::scalar(spec);
  }
  return eval_over_grid(spec, diff(e, dim), param_values, tol);
}

} // namespace bimdecomp
