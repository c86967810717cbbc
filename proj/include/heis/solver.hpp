#pragma once

// Dirichlet solver on Koranyi-ball domains: find a grid field u with
//   L u = f   at every grid node strictly inside Omega,
//   u   = g   everywhere else (frozen nodal samples inside the box,
//             the closed form g beyond it),
// by a damped Jacobi-style fixed-point iteration
//   u^{k+1} = u^k + tau .* (L u^k - f)
// with per-node damping calibrated to the diagonal coefficient of the
// discretized operator, optionally accelerated by Anderson extrapolation.
//
// The discrete operator is the field evaluator of the mixed operator
// (grid-scale horizontal-Hessian stencil for the extremal local term, the
// annular gauge-polar quadrature for the fractional term). The solver's
// sweep reproduces that evaluator up to floating-point regrouping: member
// points of the quadrature whose position falls outside the grid box are
// summed once against g at setup, interior members gather from the current
// nodal values through the same trilinear rule.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heis/field.hpp"
#include "heis/fracsublap.hpp"
#include "heis/hcalculus.hpp"
#include "heis/hgroup.hpp"

namespace heis {

/// Dirichlet data for L u = f in Omega, u = g outside. f must evaluate
/// finite on the interior nodes; g must be bounded with a declared sup
/// (the nonlocal tail certificate needs it).
struct DirichletProblem {
  GaugeBall Omega;
  SmoothFn f;
  SmoothFn g;
  OperatorParams params;

  /// Throws std::invalid_argument (missing evaluators, bad radius,
  /// unsupported N) or std::domain_error (g without a finite sup bound).
  void validate() const;
};

/// Iteration controls. `quad` overrides the grid-adapted internal
/// discretization of the nonlocal term (see default_solver_quadrature);
/// `theta` scales the per-node damping (stable well below 1, values near
/// or above 2 are deliberately usable to exercise the divergence guard);
/// `anderson_window` = 0 selects the plain damped iteration; `threads`
/// splits each sweep over worker threads (node updates are independent,
/// so the result is bitwise identical for every thread count).
struct SolveOptions {
  std::optional<QuadratureSpec> quad;
  double theta = 0.9;
  int anderson_window = 8;
  int threads = 1;

  void validate() const;
};

/// Outcome of a solve. `converged` implies residual <= tol. `tau` is the
/// smallest per-node damping factor used. On an abort, `abort_reason` is
/// "divergence" (residual grew 10x over 100 sweeps), "non-finite"
/// (overflowing iterate; the returned field is the last finite one), or
/// "max_iter"; it stays empty on success.
struct SolveReport {
  int iterations = 0;
  double residual = 0.0;
  double tau = 0.0;
  bool converged = false;
  int interior_nodes = 0;
  std::string abort_reason;
};

/// Internal quadrature the solver uses when none is supplied: inner radius
/// h_xy/8 (the grid resolves nothing finer; the untouched core of the
/// interpolant carries no curvature information), 4 annuli per decade with
/// a 64-point budget per annulus, and a tail radius certified for data
/// bounded by 8 * max(1, sup|g|) at tail tolerance 1e-4.
QuadratureSpec default_solver_quadrature(const Grid& grid,
                                         const DirichletProblem& prob);

/// Per-node mask of the solve: 1 for nodes strictly inside Omega whose
/// index also keeps the full second-difference stencil inside the box,
/// 0 elsewhere. Flat layout matches Grid::index.
std::vector<std::uint8_t> interior_mask(const Grid& grid,
                                        const GaugeBall& Omega);

/// Global damping certificate: 1 / (alpha * Lambda * W + beta * c_norm *
/// M(h)), where W is the largest per-node absolute weight sum of the
/// horizontal-Hessian stencil (diagonal and cross second differences,
/// frame factors included) and M(h) = sigma_gauge / (2s) * (h_xy/2)^{-2s}
/// is the compensated kernel mass the grid can resolve. Any step at or
/// below this bound damps every node; the solver's per-node steps are
/// larger where the measured diagonal allows.
double damping_bound(const Grid& grid, const OperatorParams& p);

/// (L u - f) on the solver's fast path, returned as a full-size nodal
/// vector (zeros outside the interior mask). The field's exterior rule
/// must agree with prob.g (the solver's own output satisfies this).
/// Matches the reference field evaluator up to floating-point regrouping.
std::vector<double> interior_residual(const FieldWithExterior& u,
                                      const DirichletProblem& prob,
                                      const QuadratureSpec& q,
                                      int threads = 1);

/// Damped fixed-point solve. Initial guess: g sampled at every node, with
/// interior nodes replaced by the mean of g over the frozen nodes adjacent
/// to the interior (the boundary layer). Iterates until the interior
/// residual sup-norm drops below tol, max_iter sweeps elapse, or a guard
/// trips (see SolveReport). Throws std::invalid_argument when the grid box
/// does not cover Omega or an option is out of range, std::domain_error on
/// unbounded/non-finite data.
std::pair<FieldWithExterior, SolveReport> solve_dirichlet(
    const DirichletProblem& prob, const Grid& grid, double tol, int max_iter,
    const SolveOptions& options = {});

/// Side of the pointwise operator inequality to audit.
enum class ViscositySide { Sub, Super };

/// Worst pointwise violation of the operator inequality over the interior
/// nodes of `region`, evaluated with the reference field evaluator (not
/// the solver's fast path). Sub audits f - L u (a subsolution needs
/// L u >= f), Super audits L u - f; negative slack is clipped to zero, so
/// `worst` == 0 means the inequality holds at every checked node.
struct ViscosityReport {
  double worst = 0.0;
  GroupPoint where = GroupPoint(0.0, 0.0, 0.0);
  int nodes_checked = 0;
};

ViscosityReport check_viscosity_inequality(const FieldWithExterior& u,
                                           const SmoothFn& f,
                                           const OperatorParams& p,
                                           const QuadratureSpec& q,
                                           ViscositySide side,
                                           const GaugeBall& region);

}  // namespace heis
