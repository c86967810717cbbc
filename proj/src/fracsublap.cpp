#include "heis/fracsublap.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace heis {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gauss-Legendre nodes and weights on (-1, 1) via the Golub-Welsch
// tridiagonal eigenproblem; ascending node order (deterministic).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()[i];
    const double q0 = es.eigenvectors()(0, i);
    w[i] = 2.0 * q0 * q0;
  }
}

// Distributes a points-per-annulus budget over (radius, chi, psi): four
// radial Gauss nodes, an even chi count, and twice as many psi nodes
// (psi spans 2 pi, chi spans pi).
void node_counts(int points_per_annulus, int& n_r, int& n_chi, int& n_psi) {
  n_r = 4;
  const double target = std::sqrt(points_per_annulus / (2.0 * n_r));
  n_chi = 2 * std::max(1, static_cast<int>(std::lround(target / 2.0)));
  n_psi = 2 * n_chi;
}

// Sums the paired second difference over the rule, annulus by annulus in
// the fixed construction order (two-level deterministic reduction).
template <typename Eval>
double annular_second_difference(const GaugePolarRule& rule,
                                 const GroupPoint& xi, double u_xi,
                                 Eval&& u) {
  double total = 0.0;
  for (const auto& range : rule.annuli()) {
    double part = 0.0;
    for (std::size_t idx = range.first; idx < range.second; ++idx) {
      const QuadPair& node = rule.pairs()[idx];
      const double up = u(compose(xi, node.eta));
      const double um = u(compose(xi, inverse(node.eta)));
      part += node.weight * (up + um - 2.0 * u_xi);
    }
    total += part;
  }
  return total;
}

double assemble(double c_norm, double raw) {
  // Keeps the exact-zero-on-constants guarantee free of a negative zero.
  return raw == 0.0 ? 0.0 : -0.5 * c_norm * raw;
}

void check_tail(const OperatorParams& p, const QuadratureSpec& q,
                double sup_u) {
  const double bound = tail_bound(q.tail_radius, p, sup_u);
  if (bound > q.tail_tolerance) {
    throw std::invalid_argument(
        "quadrature tail bound " + std::to_string(bound) +
        " exceeds tail_tolerance " + std::to_string(q.tail_tolerance) +
        "; need tail_radius >= " +
        std::to_string(tail_radius_for_tolerance(p, sup_u,
                                                 q.tail_tolerance)));
  }
}

}  // namespace

void OperatorParams::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be a finite nonnegative real");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("beta must be a finite positive real");
  }
  if (!(lambda > 0.0) || !(Lambda >= lambda) || !std::isfinite(Lambda)) {
    throw std::invalid_argument(
        "ellipticity window requires 0 < lambda <= Lambda");
  }
  if (!(s > 0.0) || !(s < 1.0)) {
    throw std::invalid_argument("fractional order s must lie in (0,1)");
  }
  if (!(c_norm > 0.0) || !std::isfinite(c_norm)) {
    throw std::invalid_argument("c_norm must be a finite positive real");
  }
  if (N < 1) {
    throw std::invalid_argument("group index N must be a positive integer");
  }
}

void QuadratureSpec::validate() const {
  if (!(inner_radius > 0.0)) {
    throw std::invalid_argument("inner_radius must be positive");
  }
  if (!(tail_radius > inner_radius)) {
    throw std::invalid_argument("tail_radius must exceed inner_radius");
  }
  if (annuli_per_decade < 1) {
    throw std::invalid_argument("annuli_per_decade must be >= 1");
  }
  if (points_per_annulus < 16) {
    throw std::invalid_argument("points_per_annulus must be >= 16");
  }
  if (!(tail_tolerance > 0.0)) {
    throw std::invalid_argument("tail_tolerance must be positive");
  }
}

double sigma_gauge(int N) {
  if (N < 1) {
    throw std::invalid_argument("group index N must be a positive integer");
  }
  // Area of S^{2N-1} times Int_0^pi (sin chi)^{N-1} d chi.
  const double sphere = 2.0 * std::pow(kPi, N) / std::tgamma(N);
  const double polar = std::sqrt(kPi) * std::tgamma(0.5 * N) /
                       std::tgamma(0.5 * (N + 1));
  return sphere * polar;
}

double tail_bound(double R, const OperatorParams& p, double sup_u) {
  if (!(R > 0.0)) {
    throw std::invalid_argument("tail radius must be positive");
  }
  if (!(sup_u >= 0.0) || !std::isfinite(sup_u)) {
    throw std::invalid_argument("sup_u must be a finite nonnegative real");
  }
  return sup_u * p.c_norm * sigma_gauge(p.N) * std::pow(R, -2.0 * p.s) /
         (2.0 * p.s);
}

double tail_radius_for_tolerance(const OperatorParams& p, double sup_u,
                                 double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  if (sup_u == 0.0) return 1.0;
  const double coeff = sup_u * p.c_norm * sigma_gauge(p.N) / (2.0 * p.s);
  return std::pow(coeff / tol, 1.0 / (2.0 * p.s));
}

GaugePolarRule::GaugePolarRule(double r_lo, double r_hi,
                               int annuli_per_decade, int points_per_annulus,
                               double s, int N) {
  if (N != 1) {
    throw std::invalid_argument(
        "the gauge-polar quadrature is implemented for H^1 (N = 1)");
  }
  if (!(r_lo > 0.0) || !(r_hi > r_lo)) {
    throw std::invalid_argument("quadrature radii require 0 < r_lo < r_hi");
  }
  if (!(s > 0.0) || !(s < 1.0)) {
    throw std::invalid_argument("fractional order s must lie in (0,1)");
  }
  int n_r, n_chi, n_psi;
  node_counts(points_per_annulus, n_r, n_chi, n_psi);

  std::vector<double> xr, wr, xc, wc;
  gauss_legendre(n_r, xr, wr);
  gauss_legendre(n_chi, xc, wc);

  const int n_annuli =
      std::max(1, static_cast<int>(std::ceil(
                      annuli_per_decade * std::log10(r_hi / r_lo))));
  const double log_step = std::log(r_hi / r_lo) / n_annuli;

  pairs_.reserve(static_cast<std::size_t>(n_annuli) * n_r *
                 (n_chi / 2) * n_psi);
  const double dpsi = 2.0 * kPi / n_psi;
  for (int a = 0; a < n_annuli; ++a) {
    const double ln_lo = std::log(r_lo) + a * log_step;
    const std::size_t begin = pairs_.size();
    for (int ir = 0; ir < n_r; ++ir) {
      const double lnr = ln_lo + 0.5 * log_step * (xr[ir] + 1.0);
      const double r = std::exp(lnr);
      // measure r^{Q-1} dr = r^Q d(ln r), kernel r^{-Q-2s}.
      const double radial = wr[ir] * 0.5 * log_step * std::pow(r, -2.0 * s);
      for (int ic = 0; ic < n_chi; ++ic) {
        const double chi = 0.5 * kPi * (xc[ic] + 1.0);
        if (chi >= 0.5 * kPi) continue;  // antipode of a kept node
        const double wchi = wc[ic] * 0.5 * kPi;
        const double rho = r * std::sqrt(std::sin(chi));
        const double t = r * r * std::cos(chi);
        for (int ip = 0; ip < n_psi; ++ip) {
          const double psi = dpsi * (ip + 0.5);
          QuadPair node;
          node.eta = GroupPoint(rho * std::cos(psi), rho * std::sin(psi), t);
          node.weight = 2.0 * radial * wchi * dpsi;
          kernel_mass_ += node.weight;
          pairs_.push_back(std::move(node));
        }
      }
    }
    annuli_.emplace_back(begin, pairs_.size());
  }
}

GaugePolarRule::GaugePolarRule(const QuadratureSpec& q, double s, int N)
    : GaugePolarRule(q.inner_radius, q.tail_radius, q.annuli_per_decade,
                     q.points_per_annulus, s, N) {}

GaugePolarRule make_inner_rule(double r0, const OperatorParams& p) {
  if (!(r0 > 0.0)) {
    throw std::invalid_argument("inner radius must be positive");
  }
  p.validate();
  // Geometric annuli down from r0: enough decades that the untouched core
  // carries a relative share eps^{2-2s} <= 1e-8 of the r^{1-2s} radial mass.
  const int decades =
      std::min(400, static_cast<int>(std::ceil(8.0 / (2.0 - 2.0 * p.s))));
  return GaugePolarRule(r0 * std::pow(10.0, -decades), r0, 8, 512, p.s, p.N);
}

double inner_correction(const SmoothFn& u, const GroupPoint& xi, double r0,
                        const OperatorParams& p,
                        const GaugePolarRule& inner_rule) {
  if (!(r0 > 0.0)) {
    throw std::invalid_argument("inner radius must be positive");
  }
  p.validate();
  if (p.N != 1 || xi.N() != 1) {
    throw std::invalid_argument(
        "the inner correction is implemented for H^1 (N = 1)");
  }
  const Eigen::MatrixXd H = euclidean_hessian(u, xi);
  if (H.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  // Second difference of the quadratic model:
  //   u(xi o eta) + u(xi o eta^{-1}) - 2 u(xi) = (B eta)^T H (B eta),
  // since xi o eta and xi o eta^{-1} are Cartesian antipodes about xi and
  // the offset is linear in eta with matrix B (rows x, y, t+twist).
  Eigen::Matrix3d B = Eigen::Matrix3d::Identity();
  B(2, 0) = 2.0 * xi.y(0);
  B(2, 1) = -2.0 * xi.x(0);
  const Eigen::Matrix3d G = B.transpose() * H * B;

  double total = 0.0;
  for (const auto& range : inner_rule.annuli()) {
    double part = 0.0;
    for (std::size_t idx = range.first; idx < range.second; ++idx) {
      const QuadPair& node = inner_rule.pairs()[idx];
      Eigen::Vector3d e(node.eta.x(0), node.eta.y(0), node.eta.t);
      part += node.weight * e.dot(G * e);
    }
    total += part;
  }
  return total;
}

double inner_correction(const SmoothFn& u, const GroupPoint& xi, double r0,
                        const OperatorParams& p) {
  return inner_correction(u, xi, r0, p, make_inner_rule(r0, p));
}

double frac_sublap(const SmoothFn& u, const GroupPoint& xi,
                   const OperatorParams& p, const QuadratureSpec& q,
                   const GaugePolarRule& rule,
                   const GaugePolarRule& inner_rule) {
  p.validate();
  q.validate();
  if (!u.sup_abs) {
    throw std::domain_error(
        "nonlocal evaluation needs a declared sup bound for u (unbounded "
        "or unknown-bound functions are rejected)");
  }
  check_tail(p, q, *u.sup_abs);
  const double u_xi = u.eval(xi);
  const double J = annular_second_difference(
      rule, xi, u_xi, [&u](const GroupPoint& z) { return u.eval(z); });
  const double inner =
      inner_correction(u, xi, q.inner_radius, p, inner_rule);
  return assemble(p.c_norm, J + inner);
}

double frac_sublap(const SmoothFn& u, const GroupPoint& xi,
                   const OperatorParams& p, const QuadratureSpec& q,
                   const GaugePolarRule& rule) {
  return frac_sublap(u, xi, p, q, rule,
                     make_inner_rule(q.inner_radius, p));
}

double frac_sublap(const SmoothFn& u, const GroupPoint& xi,
                   const OperatorParams& p, const QuadratureSpec& q) {
  const GaugePolarRule rule(q, p.s, p.N);
  return frac_sublap(u, xi, p, q, rule);
}

double frac_sublap(const FieldWithExterior& u, const GroupPoint& xi,
                   const OperatorParams& p, const QuadratureSpec& q,
                   const GaugePolarRule& rule) {
  p.validate();
  q.validate();
  check_tail(p, q, u.sup_abs());
  const double u_xi = u(xi);
  const double J = annular_second_difference(
      rule, xi, u_xi, [&u](const GroupPoint& z) { return u(z); });
  return assemble(p.c_norm, J);
}

double frac_sublap(const FieldWithExterior& u, const GroupPoint& xi,
                   const OperatorParams& p, const QuadratureSpec& q) {
  const GaugePolarRule rule(q, p.s, p.N);
  return frac_sublap(u, xi, p, q, rule);
}

}  // namespace heis
