#include "heis/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heis {

namespace {

constexpr double kSpacingTol = 1e-12;

}  // namespace

Grid::Grid(double x0, double x1, int nx, double y0, double y1, int ny,
           double t0, double t1, int nt)
    : x0_(x0), x1_(x1), y0_(y0), y1_(y1), t0_(t0), t1_(t1), nx_(nx), ny_(ny),
      nt_(nt) {
  if (nx < 2 || ny < 2 || nt < 2) {
    throw std::invalid_argument("grid needs at least 2 nodes per axis");
  }
  if (!(x1 > x0) || !(y1 > y0) || !(t1 > t0)) {
    throw std::invalid_argument("grid box must have positive extent");
  }
  hx_ = (x1 - x0) / (nx - 1);
  hy_ = (y1 - y0) / (ny - 1);
  ht_ = (t1 - t0) / (nt - 1);
  if (std::abs(hx_ - hy_) > kSpacingTol * std::max(hx_, hy_)) {
    throw std::invalid_argument("grid requires equal x and y spacing");
  }
  if (ht_ > hx_ * (1.0 + kSpacingTol)) {
    throw std::invalid_argument(
        "grid requires vertical spacing h_t <= h_xy");
  }
}

Grid Grid::centered_cube(double half_width, int n_xy, int n_t) {
  return Grid(-half_width, half_width, n_xy, -half_width, half_width, n_xy,
              -half_width, half_width, n_t);
}

bool Grid::contains(const GroupPoint& p) const {
  const double px = p.x(0), py = p.y(0), pt = p.t;
  return px >= x0_ && px <= x1_ && py >= y0_ && py <= y1_ && pt >= t0_ &&
         pt <= t1_;
}

double parabolic_t_spacing(double h_xy) { return h_xy * h_xy; }

FieldWithExterior::FieldWithExterior(Grid grid, std::vector<double> values,
                                     SmoothFn exterior)
    : grid_(grid), values_(std::move(values)), exterior_(std::move(exterior)) {
  if (grid_.node(0, 0, 0).N() != 1) {
    throw std::invalid_argument("fields are defined over H^1 grids");
  }
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("nodal value count does not match the grid");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("nodal values must be finite");
    }
  }
  if (!exterior_.eval) {
    throw std::invalid_argument("field needs an exterior rule");
  }
  if (!exterior_.sup_abs || !std::isfinite(*exterior_.sup_abs) ||
      *exterior_.sup_abs < 0.0) {
    throw std::domain_error(
        "exterior rule must declare a finite sup bound (bounded data)");
  }
  exterior_sup_ = *exterior_.sup_abs;
}

double FieldWithExterior::operator()(const GroupPoint& p) const {
  if (!grid_.contains(p)) {
    return exterior_.eval(p);
  }
  // Cell-local trilinear interpolation; clamp so the far box faces land in
  // the last cell with unit fractional coordinate.
  const auto locate = [](double v, double v0, double h, int n, int& cell,
                         double& frac) {
    double u = (v - v0) / h;
    cell = std::min(static_cast<int>(u), n - 2);
    cell = std::max(cell, 0);
    frac = u - cell;
    frac = std::clamp(frac, 0.0, 1.0);
  };
  int i, j, k;
  double fx, fy, ft;
  locate(p.x(0), grid_.x0(), grid_.hxy(), grid_.nx(), i, fx);
  locate(p.y(0), grid_.y0(), grid_.hxy(), grid_.ny(), j, fy);
  locate(p.t, grid_.t0(), grid_.ht(), grid_.nt(), k, ft);

  double c[2][2][2];
  for (int dk = 0; dk < 2; ++dk) {
    for (int dj = 0; dj < 2; ++dj) {
      for (int di = 0; di < 2; ++di) {
        c[di][dj][dk] = values_[grid_.index(i + di, j + dj, k + dk)];
      }
    }
  }
  const double c00 = c[0][0][0] * (1 - fx) + c[1][0][0] * fx;
  const double c10 = c[0][1][0] * (1 - fx) + c[1][1][0] * fx;
  const double c01 = c[0][0][1] * (1 - fx) + c[1][0][1] * fx;
  const double c11 = c[0][1][1] * (1 - fx) + c[1][1][1] * fx;
  const double c0 = c00 * (1 - fy) + c10 * fy;
  const double c1 = c01 * (1 - fy) + c11 * fy;
  return c0 * (1 - ft) + c1 * ft;
}

double FieldWithExterior::sup_abs() const {
  double m = exterior_sup_;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

SmoothFn FieldWithExterior::as_smooth_fn() const {
  SmoothFn f;
  f.eval = [*this](const GroupPoint& p) { return (*this)(p); };
  f.sup_abs = sup_abs();
  return f;
}

}  // namespace heis
