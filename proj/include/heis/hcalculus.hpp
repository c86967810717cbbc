#pragma once

// Horizontal calculus on H^N: the left-invariant frame
//   X_i = d/dx_i + 2 y_i d/dt,   Y_i = d/dy_i - 2 x_i d/dt,
// the sigma coefficient matrix with Grad_H u = sigma * Grad u, the
// symmetrized horizontal Hessian sigma * D2u * sigma^T, the sub-Laplacian
// (its trace), and the structure relation [X_i, Y_i] = -4 d/dt.
//
// Functions are represented by evaluators with optional closed-form
// derivatives; central finite differences fill in whatever is missing.

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "heis/hgroup.hpp"

namespace heis {

/// Scalar function on H^N with optional exact Euclidean derivatives.
/// Derivative evaluators, when present, must agree with central finite
/// differences to second order.
struct SmoothFn {
    std::function<double(const GroupPoint&)> eval;
    /// Euclidean gradient, size 2N+1, ordered (x | y | t). May be empty.
    std::function<Eigen::VectorXd(const GroupPoint&)> grad;
    /// Euclidean Hessian, (2N+1) x (2N+1). May be empty.
    std::function<Eigen::MatrixXd(const GroupPoint&)> hess;
    /// Declared global bound for |u| on all of H^N. Empty means unknown or
    /// unbounded; consumers that must certify truncation tails (the
    /// nonlocal quadrature) reject such functions.
    std::optional<double> sup_abs;
};

/// Coordinate axes: 0..N-1 are x_i, N..2N-1 are y_i, 2N is t.
int t_axis(int N);

/// Frame coefficient matrix sigma(xi), 2N x (2N+1):
///   [ I_N  0    2y ]
///   [ 0    I_N -2x ]
/// Row i is X_i, row N+i is Y_i, so Grad_H u = sigma * Grad u.
Eigen::MatrixXd sigma_at(const GroupPoint& xi);

/// Euclidean gradient: exact evaluator if present, else central differences
/// with step (machine eps)^{1/3} * (1+|coord|) on every axis.
Eigen::VectorXd euclidean_gradient(const SmoothFn& u, const GroupPoint& xi);

/// Euclidean Hessian: exact evaluator if present, else central second
/// differences with step (machine eps)^{1/4} * (1+|coord|). Symmetrized.
Eigen::MatrixXd euclidean_hessian(const SmoothFn& u, const GroupPoint& xi);

/// Horizontal gradient Grad_H u = sigma * Grad u, size 2N.
Eigen::VectorXd horizontal_gradient(const SmoothFn& u, const GroupPoint& xi);

/// Symmetrized horizontal Hessian sigma * D2u * sigma^T, 2N x 2N. Equals the
/// symmetrization of the nested frame derivatives (X_i X_j u)_ij.
Eigen::MatrixXd horizontal_hessian(const SmoothFn& u, const GroupPoint& xi);

/// Sub-Laplacian = trace of the horizontal Hessian = sum_i (X_i^2 + Y_i^2) u.
double sublaplacian(const SmoothFn& u, const GroupPoint& xi);

/// Structure-relation residual [X_i, Y_i]u + 4 du/dt, evaluated with nested
/// frame derivatives; vanishes identically for smooth u.
double commutator_defect(const SmoothFn& u, const GroupPoint& xi, int i);

/// sigma^T sigma, (2N+1) x (2N+1): positive semi-definite with rank 2N
/// (determinant 0 everywhere) — the degeneracy of the horizontal geometry.
Eigen::MatrixXd degeneracy_matrix(const GroupPoint& xi);

/// Frame derivative as a function: (X_i u)(xi), (Y_i u)(xi). Uses exact
/// derivatives of u when available, finite differences otherwise.
SmoothFn apply_X(const SmoothFn& u, int i);
SmoothFn apply_Y(const SmoothFn& u, int i);

/// Left translation u(w o xi) with derivatives mapped through the (constant)
/// Jacobian of the translation.
SmoothFn left_translate(const SmoothFn& u, const GroupPoint& w);

/// Central first difference along one axis (exported for cross-checks).
double partial_fd(const std::function<double(const GroupPoint&)>& f,
                  const GroupPoint& xi, int axis);

}  // namespace heis
