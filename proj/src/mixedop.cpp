#include "heis/mixedop.hpp"

#include <stdexcept>

namespace heis {

namespace {

// Euclidean Hessian of a field by central second differences at grid scale.
// Steps are (hxy, hxy, ht); samples go through operator(), so neighbors
// outside the box come from the exterior rule.
Eigen::Matrix3d field_euclidean_hessian(const FieldWithExterior& u,
                                        const GroupPoint& xi) {
    const double hx = u.grid().hxy();
    const double ht = u.grid().ht();
    const double x = xi.x(0), y = xi.y(0), t = xi.t;
    auto at = [&u](double xx, double yy, double tt) {
        return u(GroupPoint(xx, yy, tt));
    };
    const double c = at(x, y, t);
    Eigen::Matrix3d H;
    H(0, 0) = (at(x + hx, y, t) - 2.0 * c + at(x - hx, y, t)) / (hx * hx);
    H(1, 1) = (at(x, y + hx, t) - 2.0 * c + at(x, y - hx, t)) / (hx * hx);
    H(2, 2) = (at(x, y, t + ht) - 2.0 * c + at(x, y, t - ht)) / (ht * ht);
    H(0, 1) = (at(x + hx, y + hx, t) - at(x + hx, y - hx, t) -
               at(x - hx, y + hx, t) + at(x - hx, y - hx, t)) /
              (4.0 * hx * hx);
    H(0, 2) = (at(x + hx, y, t + ht) - at(x + hx, y, t - ht) -
               at(x - hx, y, t + ht) + at(x - hx, y, t - ht)) /
              (4.0 * hx * ht);
    H(1, 2) = (at(x, y + hx, t + ht) - at(x, y + hx, t - ht) -
               at(x, y - hx, t + ht) + at(x, y - hx, t - ht)) /
              (4.0 * hx * ht);
    H(1, 0) = H(0, 1);
    H(2, 0) = H(0, 2);
    H(2, 1) = H(1, 2);
    return H;
}

double local_term(const Eigen::MatrixXd& horizontal_hess,
                  const OperatorParams& p) {
    if (p.alpha == 0.0) return 0.0;  // independent of lambda, Lambda
    return p.alpha * pucci_plus(horizontal_hess, p.lambda, p.Lambda);
}

}  // namespace

double evaluate_L(const SmoothFn& u, const GroupPoint& xi,
                  const OperatorParams& p, const QuadratureSpec& q) {
    p.validate();
    q.validate();
    return local_term(horizontal_hessian(u, xi), p) -
           p.beta * frac_sublap(u, xi, p, q);
}

double evaluate_L(const SmoothFn& u, const GroupPoint& xi,
                  const OperatorParams& p, const QuadratureSpec& q,
                  const GaugePolarRule& rule) {
    p.validate();
    q.validate();
    return local_term(horizontal_hessian(u, xi), p) -
           p.beta * frac_sublap(u, xi, p, q, rule);
}

double evaluate_L(const SmoothFn& u, const GroupPoint& xi,
                  const OperatorParams& p, const QuadratureSpec& q,
                  const GaugePolarRule& rule,
                  const GaugePolarRule& inner_rule) {
    p.validate();
    q.validate();
    return local_term(horizontal_hessian(u, xi), p) -
           p.beta * frac_sublap(u, xi, p, q, rule, inner_rule);
}

Eigen::MatrixXd field_horizontal_hessian(const FieldWithExterior& u,
                                         const GroupPoint& xi) {
    const Eigen::MatrixXd s = sigma_at(xi);
    return s * field_euclidean_hessian(u, xi) * s.transpose();
}

double evaluate_L(const FieldWithExterior& u, const GroupPoint& xi,
                  const OperatorParams& p, const QuadratureSpec& q) {
    p.validate();
    q.validate();
    return local_term(field_horizontal_hessian(u, xi), p) -
           p.beta * frac_sublap(u, xi, p, q);
}

double evaluate_L(const FieldWithExterior& u, const GroupPoint& xi,
                  const OperatorParams& p, const QuadratureSpec& q,
                  const GaugePolarRule& rule) {
    p.validate();
    q.validate();
    return local_term(field_horizontal_hessian(u, xi), p) -
           p.beta * frac_sublap(u, xi, p, q, rule);
}

std::vector<double> residual_field(const FieldWithExterior& u,
                                   const SmoothFn& f, const OperatorParams& p,
                                   const QuadratureSpec& q) {
    p.validate();
    q.validate();
    const Grid& g = u.grid();
    const GaugePolarRule rule(q, p.s, p.N);
    std::vector<double> r(g.size(), 0.0);
    for (int k = 1; k + 1 < g.nt(); ++k) {
        for (int j = 1; j + 1 < g.ny(); ++j) {
            for (int i = 1; i + 1 < g.nx(); ++i) {
                const GroupPoint xi = g.node(i, j, k);
                r[g.index(i, j, k)] =
                    evaluate_L(u, xi, p, q, rule) - f.eval(xi);
            }
        }
    }
    return r;
}

}  // namespace heis
