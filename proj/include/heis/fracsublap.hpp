#pragma once

// Fractional sub-Laplacian (-Delta_H)^s on H^1 as the singular integral
//
//   (-Delta_H)^s u(xi)
//     = -(1/2) c_norm * Int [u(xi o eta) + u(xi o eta^{-1}) - 2 u(xi)]
//                         / |eta|^{Q+2s} d eta,
//
// evaluated by a deterministic gauge-polar quadrature: geometric annuli
// in the gauge radius r = |eta| (Gauss-Legendre in log r), Gauss-Legendre
// in the polar angle chi, and a uniform rule in the horizontal angle psi,
// using the exact factorization  eta = (r sqrt(sin chi) omega, r^2 cos chi),
// d eta = r^{Q-1} dr dchi dpsi  (N = 1, Q = 4).  Since eta^{-1} = -eta,
// nodes are generated in antipodal pairs and the bracketed second
// difference is evaluated once per pair, which keeps the integral
// principal-value-free for C^2 integrands.  The inner ball |eta| < r0 is
// covered by a quadrature of the second difference of the local quadratic
// model (inner_correction); the tail |eta| > R_inf is dropped and its
// rigorous bound (tail_bound) must not exceed the configured tolerance.

#include <cstddef>
#include <utility>
#include <vector>

#include "heis/field.hpp"
#include "heis/hcalculus.hpp"
#include "heis/hgroup.hpp"

namespace heis {

/// Every scalar parameter of the mixed operator
///   L u = alpha M+_{lambda,Lambda}(D^2_H u) - beta (-Delta_H)^s u.
struct OperatorParams {
  double alpha = 1.0;   // weight of the local Pucci term, >= 0
  double beta = 1.0;    // weight of the nonlocal term, > 0
  double lambda = 1.0;  // ellipticity window, 0 < lambda <= Lambda
  double Lambda = 1.0;
  double s = 0.5;       // fractional order, in (0,1)
  double c_norm = 1.0;  // kernel normalization constant, > 0
  int N = 1;            // Heisenberg group index

  /// Throws std::invalid_argument on any violated constraint.
  void validate() const;
};

/// Resolution of the annular quadrature.
struct QuadratureSpec {
  double inner_radius = 1e-6;  // r0: start of the resolved annuli
  double tail_radius = 1e6;    // R_inf: end of the resolved annuli
  int annuli_per_decade = 4;
  int points_per_annulus = 512;
  double tail_tolerance = 1e-4;  // admissible bound for the dropped tail

  void validate() const;  // r0 < R_inf, positive counts and tolerances
};

/// Surface constant of the unit gauge sphere: the measure of the annulus
/// a < |eta| < b equals sigma_gauge(N) * Int_a^b r^{Q-1} dr.
double sigma_gauge(int N);

/// Rigorous bound for the dropped tail  2 sup|u| * (1/2) c_norm *
/// Int_{|eta|>R} |eta|^{-Q-2s} d eta = sup_u * c_norm * sigma_gauge *
/// R^{-2s} / (2s).
double tail_bound(double R, const OperatorParams& p, double sup_u);

/// Smallest tail radius whose tail_bound is <= tol (inverse of the above).
double tail_radius_for_tolerance(const OperatorParams& p, double sup_u,
                                 double tol);

/// One antipodal node pair: weight covers both members and already
/// includes the kernel factor r^{-Q-2s} and the measure.
struct QuadPair {
  GroupPoint eta;
  double weight;
};

/// Precomputed node set for the annular region r_lo <= |eta| <= r_hi.
/// Node order is fixed (annulus-major, then radius, chi, psi) and results
/// are summed annulus-by-annulus, so evaluations are bitwise reproducible
/// regardless of thread count.
class GaugePolarRule {
 public:
  GaugePolarRule(double r_lo, double r_hi, int annuli_per_decade,
                 int points_per_annulus, double s, int N);
  GaugePolarRule(const QuadratureSpec& q, double s, int N);

  const std::vector<QuadPair>& pairs() const { return pairs_; }
  /// Half-open [begin, end) index ranges of each annulus within pairs().
  const std::vector<std::pair<std::size_t, std::size_t>>& annuli() const {
    return annuli_;
  }
  /// Sum of all pair weights: the quadrature value of
  /// Int_{r_lo<|eta|<r_hi} |eta|^{-Q-2s} d eta.
  double kernel_mass() const { return kernel_mass_; }

 private:
  std::vector<QuadPair> pairs_;
  std::vector<std::pair<std::size_t, std::size_t>> annuli_;
  double kernel_mass_ = 0.0;
};

/// The rule used by inner_correction for the ball |eta| < r0: geometric
/// annuli descending from r0 deep enough that the untouched core is
/// negligible at O(1e-8) relative accuracy. Build it once when evaluating
/// many points against the same (r0, s).
GaugePolarRule make_inner_rule(double r0, const OperatorParams& p);

/// Contribution of the ball |eta| < r0, via quadrature of the second
/// difference of the local quadratic model of u at xi (exact Hessian if
/// declared, finite differences otherwise). Returns the raw integral
/// Int_{|eta|<r0} model / |eta|^{Q+2s} d eta, without the -(1/2) c_norm
/// prefactor; magnitude is O(r0^{2-2s}).
double inner_correction(const SmoothFn& u, const GroupPoint& xi, double r0,
                        const OperatorParams& p);

/// Same, against a prebuilt inner rule (must be make_inner_rule(r0, p)).
double inner_correction(const SmoothFn& u, const GroupPoint& xi, double r0,
                        const OperatorParams& p,
                        const GaugePolarRule& inner_rule);

/// (-Delta_H)^s u at xi for a globally defined smooth function. Requires
/// u.sup_abs (throws std::domain_error otherwise); throws
/// std::invalid_argument if tail_bound(q.tail_radius) > q.tail_tolerance.
double frac_sublap(const SmoothFn& u, const GroupPoint& xi,
                   const OperatorParams& p, const QuadratureSpec& q);

/// Same, against a prebuilt rule (must cover [q.inner_radius,
/// q.tail_radius] for the same s).
double frac_sublap(const SmoothFn& u, const GroupPoint& xi,
                   const OperatorParams& p, const QuadratureSpec& q,
                   const GaugePolarRule& rule);

/// Same, with both rules prebuilt (inner_rule from make_inner_rule with
/// r0 = q.inner_radius); bitwise equal to the one-shot overloads.
double frac_sublap(const SmoothFn& u, const GroupPoint& xi,
                   const OperatorParams& p, const QuadratureSpec& q,
                   const GaugePolarRule& rule,
                   const GaugePolarRule& inner_rule);

/// (-Delta_H)^s of a sampled field. The interpolated field carries no
/// curvature information below the grid scale, so no inner correction is
/// applied: the quadrature over [inner_radius, tail_radius] *defines* the
/// discretized operator (choose inner_radius ~ h/2 or below).
double frac_sublap(const FieldWithExterior& u, const GroupPoint& xi,
                   const OperatorParams& p, const QuadratureSpec& q);
double frac_sublap(const FieldWithExterior& u, const GroupPoint& xi,
                   const OperatorParams& p, const QuadratureSpec& q,
                   const GaugePolarRule& rule);

}  // namespace heis
