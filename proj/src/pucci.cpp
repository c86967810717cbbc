#include "heis/pucci.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace heis {

namespace {

void check_window(double lambda, double Lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("ellipticity constant lambda must be > 0");
  }
  if (!(Lambda >= lambda)) {
    throw std::invalid_argument("ellipticity window requires Lambda >= lambda");
  }
}

// Validates approximate symmetry and returns the exactly symmetric part.
Eigen::MatrixXd symmetric_part_checked(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) {
    throw std::domain_error("Pucci operators require a square matrix");
  }
  const double scale = M.cwiseAbs().maxCoeff();
  const double defect = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (defect > 1e-9 * std::max(1.0, scale)) {
    throw std::domain_error("Pucci operators require a symmetric matrix");
  }
  return 0.5 * (M + M.transpose());
}

Eigen::VectorXd eigenvalues_of(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S,
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalue computation failed");
  }
  return es.eigenvalues();
}

}  // namespace

double pucci_plus(const Eigen::MatrixXd& M, double lambda, double Lambda) {
  check_window(lambda, Lambda);
  const Eigen::VectorXd e = eigenvalues_of(symmetric_part_checked(M));
  double out = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    out += (e[i] >= 0.0 ? Lambda : lambda) * e[i];
  }
  return out;
}

double pucci_minus(const Eigen::MatrixXd& M, double lambda, double Lambda) {
  check_window(lambda, Lambda);
  const Eigen::VectorXd e = eigenvalues_of(symmetric_part_checked(M));
  double out = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    out += (e[i] > 0.0 ? lambda : Lambda) * e[i];
  }
  return out;
}

Eigen::MatrixXd optimizer_matrix(const Eigen::MatrixXd& M, double lambda,
                                 double Lambda) {
  check_window(lambda, Lambda);
  const Eigen::MatrixXd S = symmetric_part_checked(M);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalue computation failed");
  }
  const Eigen::VectorXd& e = es.eigenvalues();
  const Eigen::MatrixXd& Q = es.eigenvectors();
  Eigen::VectorXd coeff(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    coeff[i] = (e[i] >= 0.0 ? Lambda : lambda);
  }
  return Q * coeff.asDiagonal() * Q.transpose();
}

double linear_L_gamma(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& M,
                      double lambda, double Lambda) {
  check_window(lambda, Lambda);
  const Eigen::MatrixXd S = symmetric_part_checked(M);
  if (gamma.rows() != S.rows()) {
    throw std::domain_error("gamma has incompatible row count");
  }
  const Eigen::MatrixXd A = gamma * gamma.transpose();
  const Eigen::VectorXd e = eigenvalues_of(A);
  const double tol = 1e-12 * Lambda;
  if (e.minCoeff() < lambda - tol || e.maxCoeff() > Lambda + tol) {
    throw std::domain_error(
        "gamma gamma^T has spectrum outside the ellipticity window");
  }
  return (A.array() * S.array()).sum();
}

}  // namespace heis
