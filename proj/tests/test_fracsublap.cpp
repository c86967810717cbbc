// Tests for the fractional sub-Laplacian quadrature. Independent oracles:
//  - closed-form origin value for exp(-|.|^4):
//      (-Delta_H)^s u(0) = -(c sigma_gauge / 4) Gamma(-s/2),
//    obtained by reducing the radial integral to Int (e^{-v}-1) v^{-1-s/2} dv
//    (frozen literals below, cross-checked against std::tgamma);
//  - closed-form small-ball moments for quadratic models:
//      Int_{|eta|<r} eta_x^2 |eta|^{-4-2s} = 2 pi r^{2-2s} / (2-2s),
//      Int_{|eta|<r} eta_t^2 |eta|^{-4-2s} = pi^2 r^{4-2s} / (4-2s);
//  - a dense Cartesian-cylindrical quadrature of the full symmetric
//    difference integral with exact vertical slab limits per column (no
//    indicator staircase), dyadic refinement zones in the horizontal
//    radius, and Gauss nodes in both directions;
//  - a midpoint-lattice measurement of the unit gauge annulus volume.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "heis/fracsublap.hpp"
#include "heis/hcalculus.hpp"
#include "heis/hgroup.hpp"

#include "oracles.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

using oracles::gauge_gaussian;
using oracles::inner_oracle;

// Second moments of a gauge shell a < |eta| < b by a subsampled midpoint
// lattice (independent route for the K_z / K_t constants).
void shell_moments_lattice(double a, double b, double s, double& mom_x,
                           double& mom_t) {
  const int n = 96;
  const double hz = 2.0 * b / n;
  const double ht = 2.0 * b * b / n;
  mom_x = 0.0;
  mom_t = 0.0;
  const double cell = hz * hz * ht;
  for (int i = 0; i < n; ++i) {
    const double x = -b + (i + 0.5) * hz;
    for (int j = 0; j < n; ++j) {
      const double y = -b + (j + 0.5) * hz;
      for (int k = 0; k < n; ++k) {
        const double t = -b * b + (k + 0.5) * ht;
        // classify by rigorous per-cell gauge-radius bounds (the gauge
        // norm is monotone in each |coordinate|)
        auto absrange = [](double lo, double hi, double& alo, double& ahi) {
          if (lo <= 0.0 && hi >= 0.0) {
            alo = 0.0;
          } else {
            alo = std::min(std::abs(lo), std::abs(hi));
          }
          ahi = std::max(std::abs(lo), std::abs(hi));
        };
        double xlo, xhi, ylo, yhi, tlo, thi;
        absrange(x - 0.5 * hz, x + 0.5 * hz, xlo, xhi);
        absrange(y - 0.5 * hz, y + 0.5 * hz, ylo, yhi);
        absrange(t - 0.5 * ht, t + 0.5 * ht, tlo, thi);
        auto gauge4 = [](double xx, double yy, double tt) {
          const double rho = xx * xx + yy * yy;
          return rho * rho + tt * tt;
        };
        const double g4lo = gauge4(xlo, ylo, tlo);
        const double g4hi = gauge4(xhi, yhi, thi);
        const double a4 = a * a * a * a, b4 = b * b * b * b;
        if (g4hi < a4 || g4lo >= b4) continue;
        double fx = 0.0, ft = 0.0;
        if (g4lo >= a4 && g4hi < b4) {
          const double r = std::pow(gauge4(x, y, t), 0.25);
          const double k = std::pow(r, -4.0 - 2.0 * s);
          fx = x * x * k;
          ft = t * t * k;
        } else {
          // straddles a shell face: subsample 4x4x4
          for (int si = 0; si < 4; ++si) {
            for (int sj = 0; sj < 4; ++sj) {
              for (int sk = 0; sk < 4; ++sk) {
                const double sx = x + hz * ((si + 0.5) / 4.0 - 0.5);
                const double sy = y + hz * ((sj + 0.5) / 4.0 - 0.5);
                const double st = t + ht * ((sk + 0.5) / 4.0 - 0.5);
                const double g4 = gauge4(sx, sy, st);
                if (g4 < a4 || g4 >= b4) continue;
                const double k = std::pow(g4, (-4.0 - 2.0 * s) / 4.0);
                fx += sx * sx * k / 64.0;
                ft += st * st * k / 64.0;
              }
            }
          }
        }
        mom_x += fx * cell;
        mom_t += ft * cell;
      }
    }
  }
}

// Volume of the gauge annulus a < |eta| < b by the same lattice scheme.
double annulus_volume_lattice(double a, double b) {
  double sdummy, vol = 0.0;
  (void)sdummy;
  const int n = 128;
  const double hz = 2.0 * b / n;
  const double ht = 2.0 * b * b / n;
  const double cell = hz * hz * ht;
  const double a4 = a * a * a * a, b4 = b * b * b * b;
  auto gauge4 = [](double xx, double yy, double tt) {
    const double rho = xx * xx + yy * yy;
    return rho * rho + tt * tt;
  };
  for (int i = 0; i < n; ++i) {
    const double x = -b + (i + 0.5) * hz;
    for (int j = 0; j < n; ++j) {
      const double y = -b + (j + 0.5) * hz;
      for (int k = 0; k < n; ++k) {
        const double t = -b * b + (k + 0.5) * ht;
        auto absr = [](double c, double h) {
          const double lo = c - 0.5 * h, hi = c + 0.5 * h;
          const double alo = (lo <= 0.0 && hi >= 0.0)
                                 ? 0.0
                                 : std::min(std::abs(lo), std::abs(hi));
          return std::pair<double, double>(
              alo, std::max(std::abs(lo), std::abs(hi)));
        };
        auto [xlo, xhi] = absr(x, hz);
        auto [ylo, yhi] = absr(y, hz);
        auto [tlo, thi] = absr(t, ht);
        const double g4lo = gauge4(xlo, ylo, tlo);
        const double g4hi = gauge4(xhi, yhi, thi);
        if (g4hi < a4 || g4lo >= b4) continue;
        if (g4lo >= a4 && g4hi < b4) {
          vol += cell;
          continue;
        }
        int inside = 0;
        for (int si = 0; si < 4; ++si) {
          for (int sj = 0; sj < 4; ++sj) {
            for (int sk = 0; sk < 4; ++sk) {
              const double sx = x + hz * ((si + 0.5) / 4.0 - 0.5);
              const double sy = y + hz * ((sj + 0.5) / 4.0 - 0.5);
              const double st = t + ht * ((sk + 0.5) / 4.0 - 0.5);
              const double g4 = gauge4(sx, sy, st);
              if (g4 >= a4 && g4 < b4) ++inside;
            }
          }
        }
        vol += cell * inside / 64.0;
      }
    }
  }
  return vol;
}

using oracles::dense_frac_oracle;

heis::OperatorParams params_with_s(double s) {
  heis::OperatorParams p;
  p.s = s;
  return p;
}

heis::QuadratureSpec spec_for(const heis::OperatorParams& p, double sup_u,
                              double abs_tail_tol) {
  heis::QuadratureSpec q;
  q.inner_radius = 1e-6;
  q.tail_tolerance = abs_tail_tol;
  q.tail_radius =
      1.01 * heis::tail_radius_for_tolerance(p, sup_u, abs_tail_tol);
  return q;
}

}  // namespace

TEST_CASE("gauge-sphere surface constant") {
  CHECK(heis::sigma_gauge(1) ==
        doctest::Approx(2.0 * kPi * kPi).epsilon(1e-13));
  CHECK(heis::sigma_gauge(2) ==
        doctest::Approx(4.0 * kPi * kPi).epsilon(1e-13));
  // lattice measurement of vol{1 < |eta| < 2} = sigma (2^4 - 1)/4
  const double expected = heis::sigma_gauge(1) * 15.0 / 4.0;
  const double measured = annulus_volume_lattice(1.0, 2.0);
  CHECK(measured == doctest::Approx(expected).epsilon(2e-2));
  CHECK_THROWS_AS(heis::sigma_gauge(0), std::invalid_argument);
}

TEST_CASE("kernel mass of the annular rule matches the exact integral") {
  for (double s : {0.25, 0.5, 0.75}) {
    const heis::GaugePolarRule rule(0.5, 50.0, 4, 512, s, 1);
    const double exact = heis::sigma_gauge(1) *
                         (std::pow(0.5, -2.0 * s) - std::pow(50.0, -2.0 * s)) /
                         (2.0 * s);
    CHECK(rule.kernel_mass() == doctest::Approx(exact).epsilon(1e-8));
  }
}

TEST_CASE("rule structure: pair representatives, weights, determinism") {
  const heis::GaugePolarRule rule(0.1, 10.0, 4, 512, 0.5, 1);
  REQUIRE(!rule.pairs().empty());
  for (const auto& node : rule.pairs()) {
    CHECK(node.weight > 0.0);
    CHECK(node.eta.t > 0.0);  // chi < pi/2 representative of each pair
    const double r = heis::gauge_norm(node.eta);
    CHECK(r > 0.1 * (1 - 1e-12));
    CHECK(r < 10.0 * (1 + 1e-12));
  }
  // annuli partition the node list
  std::size_t cursor = 0;
  for (const auto& range : rule.annuli()) {
    CHECK(range.first == cursor);
    CHECK(range.second > range.first);
    cursor = range.second;
  }
  CHECK(cursor == rule.pairs().size());
  // bitwise identical reconstruction
  const heis::GaugePolarRule again(0.1, 10.0, 4, 512, 0.5, 1);
  REQUIRE(again.pairs().size() == rule.pairs().size());
  for (std::size_t i = 0; i < rule.pairs().size(); ++i) {
    CHECK(again.pairs()[i].weight == rule.pairs()[i].weight);
    CHECK(again.pairs()[i].eta.t == rule.pairs()[i].eta.t);
    CHECK(again.pairs()[i].eta.x(0) == rule.pairs()[i].eta.x(0));
  }
  CHECK_THROWS_AS(heis::GaugePolarRule(0.1, 10.0, 4, 512, 0.5, 2),
                  std::invalid_argument);
}

TEST_CASE("tail bound: closed form, monotonicity, inverse") {
  heis::OperatorParams p = params_with_s(0.5);
  CHECK(heis::tail_bound(10.0, p, 1.0) ==
        doctest::Approx(2.0 * kPi * kPi / 10.0).epsilon(1e-13));
  CHECK(heis::tail_bound(5.0, p, 0.0) == 0.0);
  CHECK(heis::tail_bound(20.0, p, 1.0) < heis::tail_bound(10.0, p, 1.0));
  for (double s : {0.25, 0.5, 0.75}) {
    heis::OperatorParams ps = params_with_s(s);
    ps.c_norm = 1.7;
    const double R = heis::tail_radius_for_tolerance(ps, 2.0, 1e-3);
    CHECK(heis::tail_bound(R, ps, 2.0) == doctest::Approx(1e-3).epsilon(1e-10));
  }
}

TEST_CASE("inner correction: quadratic model against closed-form moments") {
  Eigen::Matrix3d H;
  H << 2.0, 0.7, -0.3, 0.7, -1.2, 0.5, -0.3, 0.5, 0.9;
  heis::SmoothFn quad;
  quad.eval = [H](const heis::GroupPoint& p) {
    Eigen::Vector3d v(p.x(0), p.y(0), p.t);
    return 0.5 * v.dot(H * v) + 3.0 * v[0] - v[2] + 2.0;
  };
  quad.grad = [H](const heis::GroupPoint& p) -> Eigen::VectorXd {
    Eigen::Vector3d v(p.x(0), p.y(0), p.t);
    return (H * v + Eigen::Vector3d(3.0, 0.0, -1.0)).eval();
  };
  quad.hess = [H](const heis::GroupPoint&) -> Eigen::MatrixXd { return H; };

  for (double s : {0.25, 0.5, 0.75}) {
    heis::OperatorParams p = params_with_s(s);
    for (double r0 : {1.0, 0.01}) {
      for (const auto& xi :
           {heis::GroupPoint(0.0, 0.0, 0.0), heis::GroupPoint(0.5, -0.3, 0.7)}) {
        const double got = heis::inner_correction(quad, xi, r0, p);
        const double want = inner_oracle(H, xi, r0, s);
        CHECK(got == doctest::Approx(want).epsilon(1e-6));
      }
    }
  }

  // linear functions contribute exactly zero
  heis::SmoothFn lin;
  lin.eval = [](const heis::GroupPoint& p) { return 2.0 * p.x(0) - p.t; };
  lin.grad = [](const heis::GroupPoint&) -> Eigen::VectorXd {
    return Eigen::Vector3d(2.0, 0.0, -1.0);
  };
  lin.hess = [](const heis::GroupPoint&) -> Eigen::MatrixXd {
    return Eigen::Matrix3d::Zero();
  };
  CHECK(heis::inner_correction(lin, heis::GroupPoint(1.0, 2.0, 3.0), 0.5,
                               params_with_s(0.5)) == 0.0);

  // r0 scaling: pure horizontal Hessian scales exactly like r0^{2-2s}
  Eigen::Matrix3d Hz = Eigen::Matrix3d::Zero();
  Hz(0, 0) = 1.0;
  Hz(1, 1) = -0.5;
  heis::SmoothFn qz;
  qz.eval = [Hz](const heis::GroupPoint& p) {
    Eigen::Vector3d v(p.x(0), p.y(0), p.t);
    return 0.5 * v.dot(Hz * v);
  };
  qz.hess = [Hz](const heis::GroupPoint&) -> Eigen::MatrixXd { return Hz; };
  for (double s : {0.25, 0.75}) {
    heis::OperatorParams p = params_with_s(s);
    const heis::GroupPoint origin(0.0, 0.0, 0.0);
    const double a = heis::inner_correction(qz, origin, 0.02, p);
    const double b = heis::inner_correction(qz, origin, 0.01, p);
    CHECK(a / b == doctest::Approx(std::pow(2.0, 2.0 - 2.0 * s)).epsilon(1e-6));
  }
}

TEST_CASE("small-ball moment constants verified by shell lattice") {
  // K_z, K_t applied to the shell a..b must match a brute lattice
  const double s = 0.5, a = 0.5, b = 1.0;
  double mom_x, mom_t;
  shell_moments_lattice(a, b, s, mom_x, mom_t);
  const double kz_shell = 2.0 * kPi / (2.0 - 2.0 * s) *
                          (std::pow(b, 2.0 - 2.0 * s) -
                           std::pow(a, 2.0 - 2.0 * s));
  const double kt_shell = kPi * kPi / (4.0 - 2.0 * s) *
                          (std::pow(b, 4.0 - 2.0 * s) -
                           std::pow(a, 4.0 - 2.0 * s));
  CHECK(mom_x == doctest::Approx(kz_shell).epsilon(2e-2));
  CHECK(mom_t == doctest::Approx(kt_shell).epsilon(2e-2));
}

TEST_CASE("constants map to exactly zero") {
  heis::SmoothFn c5;
  c5.eval = [](const heis::GroupPoint&) { return 5.0; };
  c5.sup_abs = 5.0;
  heis::OperatorParams p = params_with_s(0.5);
  heis::QuadratureSpec q = spec_for(p, 5.0, 1e-3);
  const double v = heis::frac_sublap(c5, heis::GroupPoint(0.3, -0.2, 0.7), p, q);
  CHECK(v == 0.0);
  CHECK(!std::signbit(v));
}

TEST_CASE("origin value of the gauge Gaussian (closed form, frozen)") {
  // -(sigma/4) Gamma(-s/2), c_norm = 1
  const struct {
    double s;
    double value;
  } cases[] = {
      {0.25, 43.01775080991367},
      {0.5, 24.188756159637446},
      {0.75, 18.877511382080264},
  };
  const heis::SmoothFn u = gauge_gaussian();
  const heis::GroupPoint origin(0.0, 0.0, 0.0);
  for (const auto& c : cases) {
    // the frozen literal agrees with an independent libm evaluation
    const double via_tgamma =
        -(2.0 * kPi * kPi / 4.0) * std::tgamma(-c.s / 2.0);
    CHECK(c.value == doctest::Approx(via_tgamma).epsilon(1e-13));

    heis::OperatorParams p = params_with_s(c.s);
    heis::QuadratureSpec q = spec_for(p, 1.0, 1e-5 * c.value);
    const double got = heis::frac_sublap(u, origin, p, q);
    CHECK(got == doctest::Approx(c.value).epsilon(2e-4));
    CHECK(got > 0.0);  // global max => nonnegative operator value
  }
}

TEST_CASE("dense cylindrical-column quadrature cross-check") {
  const heis::SmoothFn u = gauge_gaussian();
  const double s = 0.5;
  heis::OperatorParams p = params_with_s(s);
  heis::QuadratureSpec q = spec_for(p, 1.0, 2e-4);

  // oracle self-validation at the origin against the Gamma closed form
  const double at_origin = dense_frac_oracle(u, heis::GroupPoint(0, 0, 0), s, 24);
  CHECK(at_origin == doctest::Approx(24.188756159637446).epsilon(2e-4));

  for (const auto& xi :
       {heis::GroupPoint(0.3, -0.2, 0.1), heis::GroupPoint(-0.1, 0.4, -0.3)}) {
    const double got = heis::frac_sublap(u, xi, p, q);
    const double want = dense_frac_oracle(u, xi, s, 24);
    CHECK(got == doctest::Approx(want).epsilon(1e-3));
  }
}

TEST_CASE("dilation covariance with exponent 2s") {
  const heis::SmoothFn u = gauge_gaussian();
  const double lam = 2.0;
  for (double s : {0.25, 0.5, 0.75}) {
    heis::OperatorParams p = params_with_s(s);
    heis::QuadratureSpec q = spec_for(p, 1.0, 1e-6);
    heis::SmoothFn ul;
    ul.eval = [u, lam](const heis::GroupPoint& z) {
      return u.eval(heis::dilate(lam, z));
    };
    Eigen::Vector3d sc(lam, lam, lam * lam);
    ul.grad = [u, lam, sc](const heis::GroupPoint& z) -> Eigen::VectorXd {
      return (sc.asDiagonal() * u.grad(heis::dilate(lam, z))).eval();
    };
    ul.hess = [u, lam, sc](const heis::GroupPoint& z) -> Eigen::MatrixXd {
      return sc.asDiagonal() * u.hess(heis::dilate(lam, z)) * sc.asDiagonal();
    };
    ul.sup_abs = 1.0;
    const heis::GroupPoint xi(0.2, 0.1, -0.05);
    const double lhs = heis::frac_sublap(ul, xi, p, q);
    const double rhs = std::pow(lam, 2.0 * s) *
                       heis::frac_sublap(u, heis::dilate(lam, xi), p, q);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-2));
  }
}

TEST_CASE("left invariance of the kernel") {
  const heis::SmoothFn u = gauge_gaussian();
  heis::OperatorParams p = params_with_s(0.5);
  heis::QuadratureSpec q = spec_for(p, 1.0, 1e-6);
  const heis::GroupPoint a(0.3, -0.1, 0.2);
  const heis::GroupPoint xi(0.1, 0.2, 0.05);
  const heis::SmoothFn tu = heis::left_translate(u, a);
  const double lhs = heis::frac_sublap(tu, xi, p, q);
  const double rhs = heis::frac_sublap(u, heis::compose(a, xi), p, q);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-3));
}

TEST_CASE("linearity in the function argument") {
  const heis::SmoothFn u = gauge_gaussian();
  heis::SmoothFn v;
  v.eval = [](const heis::GroupPoint& z) {
    const double g = heis::gauge_norm(z);
    return 1.0 / (1.0 + g * g);
  };
  v.sup_abs = 1.0;
  heis::SmoothFn w;
  w.eval = [u, v](const heis::GroupPoint& z) {
    return 2.0 * u.eval(z) - 3.0 * v.eval(z);
  };
  w.sup_abs = 5.0;

  heis::OperatorParams p = params_with_s(0.5);
  heis::QuadratureSpec q = spec_for(p, 5.0, 1e-6);
  const heis::GroupPoint xi(0.2, -0.3, 0.15);
  const double fu = heis::frac_sublap(u, xi, p, q);
  const double fv = heis::frac_sublap(v, xi, p, q);
  const double fw = heis::frac_sublap(w, xi, p, q);
  const double scale = std::max({1.0, std::abs(fu), std::abs(fv)});
  CHECK(std::abs(fw - (2.0 * fu - 3.0 * fv)) <= 1e-10 * scale);
}

TEST_CASE("prebuilt rule reuse is bitwise identical") {
  const heis::SmoothFn u = gauge_gaussian();
  heis::OperatorParams p = params_with_s(0.5);
  heis::QuadratureSpec q = spec_for(p, 1.0, 1e-5);
  const heis::GaugePolarRule rule(q, p.s, p.N);
  const heis::GroupPoint xi(0.1, 0.1, 0.1);
  const double a = heis::frac_sublap(u, xi, p, q);
  const double b = heis::frac_sublap(u, xi, p, q, rule);
  const double c = heis::frac_sublap(u, xi, p, q, rule);
  CHECK(a == b);
  CHECK(b == c);

  // Same for the inner-ball rule, alone and through the full operator.
  const heis::GaugePolarRule inner =
      heis::make_inner_rule(q.inner_radius, p);
  CHECK(heis::inner_correction(u, xi, q.inner_radius, p) ==
        heis::inner_correction(u, xi, q.inner_radius, p, inner));
  CHECK(a == heis::frac_sublap(u, xi, p, q, rule, inner));
}

TEST_CASE("configuration and domain errors") {
  const heis::SmoothFn u = gauge_gaussian();
  heis::OperatorParams p = params_with_s(0.5);
  // tail bound violated: short tail radius with a tight tolerance
  heis::QuadratureSpec q;
  q.inner_radius = 1e-4;
  q.tail_radius = 10.0;
  q.tail_tolerance = 1e-9;
  CHECK_THROWS_AS(heis::frac_sublap(u, heis::GroupPoint(0, 0, 0), p, q),
                  std::invalid_argument);

  // missing sup bound: rejected as potentially unbounded
  heis::SmoothFn nosup;
  nosup.eval = [](const heis::GroupPoint& z) { return z.x(0); };
  heis::QuadratureSpec ok = spec_for(p, 1.0, 1e-3);
  CHECK_THROWS_AS(heis::frac_sublap(nosup, heis::GroupPoint(0, 0, 0), p, ok),
                  std::domain_error);

  heis::OperatorParams bad = p;
  bad.s = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.beta = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.lambda = 2.0;
  bad.Lambda = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.c_norm = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  heis::QuadratureSpec badq;
  badq.inner_radius = 2.0;
  badq.tail_radius = 1.0;
  CHECK_THROWS_AS(badq.validate(), std::invalid_argument);
}

TEST_CASE("field path: constants exact, smooth field approximates") {
  const heis::Grid grid = heis::Grid::centered_cube(1.0, 17, 33);
  // constant field with constant exterior: exactly zero
  heis::SmoothFn cext;
  cext.eval = [](const heis::GroupPoint&) { return 3.0; };
  cext.sup_abs = 3.0;
  std::vector<double> vals(grid.size(), 3.0);
  const heis::FieldWithExterior cf(grid, vals, cext);
  heis::OperatorParams p = params_with_s(0.5);
  heis::QuadratureSpec q;
  q.inner_radius = grid.hxy() / 2.0;
  q.tail_tolerance = 1e-3;
  q.tail_radius = 1.01 * heis::tail_radius_for_tolerance(p, 3.0, 1e-3);
  const double zero = heis::frac_sublap(cf, heis::GroupPoint(0, 0, 0), p, q);
  CHECK(zero == 0.0);

  // sampled gauge Gaussian approximates the smooth evaluation
  const heis::SmoothFn u = gauge_gaussian();
  std::vector<double> gv(grid.size());
  for (int k = 0; k < grid.nt(); ++k) {
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nx(); ++i) {
        gv[grid.index(i, j, k)] = u.eval(grid.node(i, j, k));
      }
    }
  }
  const heis::FieldWithExterior gf(grid, gv, u);
  heis::QuadratureSpec qg = q;
  qg.tail_radius = 1.01 * heis::tail_radius_for_tolerance(p, 1.0, 1e-3);
  const double smooth_spec_value = 24.188756159637446;
  const double field_value =
      heis::frac_sublap(gf, heis::GroupPoint(0, 0, 0), p, qg);
  CHECK(field_value ==
        doctest::Approx(smooth_spec_value).epsilon(0.05));
}
