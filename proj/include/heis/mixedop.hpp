// Assembled mixed operator
//   L u(xi) = alpha * M+_{lambda,Lambda}(D^2_{H,S} u(xi))
//             - beta * (-Delta_H)^s u(xi)
// combining the extremal local term over the symmetrized horizontal Hessian
// with the nonlocal fractional term, plus residual sweeps against a
// right-hand side on grid-sampled fields.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "heis/field.hpp"
#include "heis/fracsublap.hpp"
#include "heis/hcalculus.hpp"
#include "heis/hgroup.hpp"
#include "heis/pucci.hpp"

namespace heis {

/// L u at xi for a closed-form function (exact derivatives used when
/// present, pointwise finite differences otherwise). Throws
/// std::domain_error when u lacks a declared sup bound and
/// std::invalid_argument when the quadrature cannot certify its tail,
/// both propagated from the fractional term.
double evaluate_L(const SmoothFn& u, const GroupPoint& xi,
                  const OperatorParams& p, const QuadratureSpec& q);

/// Same with a caller-prepared annular rule (must match q, p.s, p.N).
double evaluate_L(const SmoothFn& u, const GroupPoint& xi,
                  const OperatorParams& p, const QuadratureSpec& q,
                  const GaugePolarRule& rule);

/// Same with both quadrature rules prepared (inner_rule from
/// make_inner_rule with r0 = q.inner_radius); bitwise equal to the
/// one-shot overload, amortizing rule construction over many points.
double evaluate_L(const SmoothFn& u, const GroupPoint& xi,
                  const OperatorParams& p, const QuadratureSpec& q,
                  const GaugePolarRule& rule,
                  const GaugePolarRule& inner_rule);

/// L u at xi for a grid-sampled field. The Euclidean Hessian is formed by
/// grid-scale central second differences (steps hxy, hxy, ht) evaluated
/// through the field's interpolation/exterior rule, then conjugated by the
/// frame matrix sigma(xi); the fractional term uses the annular quadrature
/// directly on field values.
double evaluate_L(const FieldWithExterior& u, const GroupPoint& xi,
                  const OperatorParams& p, const QuadratureSpec& q);

/// Same with a caller-prepared annular rule.
double evaluate_L(const FieldWithExterior& u, const GroupPoint& xi,
                  const OperatorParams& p, const QuadratureSpec& q,
                  const GaugePolarRule& rule);

/// Symmetrized horizontal Hessian of a grid field at xi by grid-scale
/// central differences through the interpolation/exterior rule (exported
/// for stencil cross-checks).
Eigen::MatrixXd field_horizontal_hessian(const FieldWithExterior& u,
                                         const GroupPoint& xi);

/// (L u - f) at every grid node strictly inside the box faces, in node
/// index order; face nodes hold 0. One shared annular rule is built from q
/// so the sweep is deterministic.
std::vector<double> residual_field(const FieldWithExterior& u,
                                   const SmoothFn& f, const OperatorParams& p,
                                   const QuadratureSpec& q);

}  // namespace heis
