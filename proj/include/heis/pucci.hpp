#pragma once

// Pucci extremal operators over symmetric matrices with ellipticity
// window 0 < lambda <= Lambda:
//   M+(M) = Lambda * sum_{e_i >= 0} e_i + lambda * sum_{e_i < 0} e_i
//   M-(M) = lambda * sum_{e_i > 0} e_i + Lambda * sum_{e_i <= 0} e_i
// Equivalently M+(M) = max { <A, M> : A symmetric, spec(A) in [lambda,
// Lambda] } and M- the corresponding min; optimizer_matrix returns the
// maximizing A. Zero eigenvalues sit on the Lambda side of M+ (and the
// Lambda side of M-), which changes nothing numerically since they
// contribute zero either way.

#include <Eigen/Core>

namespace heis {

/// M+ of a symmetric matrix. Throws std::invalid_argument if the
/// ellipticity window is invalid (lambda <= 0 or Lambda < lambda) and
/// std::domain_error if M is asymmetric beyond 1e-9 relative.
double pucci_plus(const Eigen::MatrixXd& M, double lambda, double Lambda);

/// M- of a symmetric matrix; same error contract as pucci_plus.
/// Satisfies the duality M+(-M) = -M-(M) and M-(M) <= M+(M).
double pucci_minus(const Eigen::MatrixXd& M, double lambda, double Lambda);

/// The maximizer A* = Lambda * P_{>=0} + lambda * P_{<0} built from the
/// spectral projectors of M; <A*, M>_F == pucci_plus(M) and
/// spec(A*) in [lambda, Lambda].
Eigen::MatrixXd optimizer_matrix(const Eigen::MatrixXd& M, double lambda,
                                 double Lambda);

/// Linear member of the extremal family: L_gamma(M) = <gamma gamma^T, M>_F.
/// gamma is d x m; requires spec(gamma gamma^T) within [lambda - tol,
/// Lambda + tol] (tol = 1e-12 * Lambda), else throws std::domain_error.
/// Always satisfies M-(M) <= L_gamma(M) <= M+(M).
double linear_L_gamma(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& M,
                      double lambda, double Lambda);

}  // namespace heis
