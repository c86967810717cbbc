// Sup- and inf-convolution regularizations with the quartic gauge kernel,
//   u^eps(xi) = max over grid nodes eta of [ u(eta) - d(xi,eta)^4 / eps ],
//   u_eps(xi) = min over grid nodes eta of [ u(eta) + d(xi,eta)^4 / eps ],
// where d is the left-invariant gauge distance. The transforms are
// semidiscrete: the extremum ranges over grid nodes only, so for sampled
// data they are exact up to the field's modulus of continuity times the
// grid spacing.
//
// The search is restricted to the window d(xi,eta)^4 <= eps * osc(u) with
// osc taken over nodal values. The restriction is lossless: a node outside
// the window satisfies u(eta) - d^4/eps < u(eta) - osc <= u(xi), so it can
// never beat the eta = xi candidate. It also makes the maximizer bound
// d(xi, eta*)^4 <= eps * osc(u) hold by construction.

#pragma once

#include <cstddef>
#include <vector>

#include "heis/field.hpp"

namespace heis {

/// Sup-convolution of the nodal values; the exterior evaluator is carried
/// over unchanged (the regularization acts on the sampled box). If argmax
/// is non-null it receives, per node, the flat index of the maximizer
/// (ties resolved toward the smallest gauge distance, then smallest
/// index). Throws std::domain_error for eps <= 0.
FieldWithExterior sup_convolution(const FieldWithExterior& u, double eps,
                                  std::vector<std::size_t>* argmax = nullptr);

/// Inf-convolution, the order-dual transform; equals -sup_convolution(-u)
/// value by value. Same errors and argmin reporting.
FieldWithExterior inf_convolution(const FieldWithExterior& u, double eps,
                                  std::vector<std::size_t>* argmin = nullptr);

}  // namespace heis
