#include "heis/hcalculus.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace heis {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kH1 = std::cbrt(kEps);        // first-derivative base step
const double kH2 = std::pow(kEps, 0.25);   // second-derivative base step

GroupPoint shifted(const GroupPoint& xi, int axis, double h) {
    GroupPoint p = xi;
    if (axis == t_axis(xi.N()))
        p.t += h;
    else
        p.z[axis] += h;
    return p;
}

double coord(const GroupPoint& xi, int axis) {
    return axis == t_axis(xi.N()) ? xi.t : xi.z[axis];
}

/// Step for a first derivative along `axis`. All axes use the same base
/// increment: shrinking the t-step to the square of the base (the parabolic
/// grid rule) amplifies rounding noise as eps/h_t and destroys nested
/// derivatives in double precision; anisotropy belongs to grid spacing, not
/// to pointwise differencing.
double step1(const GroupPoint& xi, int axis) {
    return kH1 * (1.0 + std::abs(coord(xi, axis)));
}

/// Step for a second derivative along `axis` (same reasoning as step1).
double step2(const GroupPoint& xi, int axis) {
    return kH2 * (1.0 + std::abs(coord(xi, axis)));
}

void require_index(int i, int N) {
    if (i < 0 || i >= N)
        throw std::invalid_argument("frame index out of range [0, N)");
}

}  // namespace

int t_axis(int N) { return 2 * N; }

double partial_fd(const std::function<double(const GroupPoint&)>& f,
                  const GroupPoint& xi, int axis) {
    const double h = step1(xi, axis);
    return (f(shifted(xi, axis, h)) - f(shifted(xi, axis, -h))) / (2.0 * h);
}

Eigen::MatrixXd sigma_at(const GroupPoint& xi) {
    const int N = xi.N();
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * N, 2 * N + 1);
    for (int i = 0; i < N; ++i) {
        s(i, i) = 1.0;
        s(i, 2 * N) = 2.0 * xi.y(i);
        s(N + i, N + i) = 1.0;
        s(N + i, 2 * N) = -2.0 * xi.x(i);
    }
    return s;
}

Eigen::VectorXd euclidean_gradient(const SmoothFn& u, const GroupPoint& xi) {
    const int dim = 2 * xi.N() + 1;
    if (u.grad) {
        Eigen::VectorXd g = u.grad(xi);
        if (g.size() != dim)
            throw std::invalid_argument("euclidean_gradient: evaluator size mismatch");
        return g;
    }
    Eigen::VectorXd g(dim);
    for (int a = 0; a < dim; ++a) g[a] = partial_fd(u.eval, xi, a);
    return g;
}

Eigen::MatrixXd euclidean_hessian(const SmoothFn& u, const GroupPoint& xi) {
    const int dim = 2 * xi.N() + 1;
    if (u.hess) {
        Eigen::MatrixXd H = u.hess(xi);
        if (H.rows() != dim || H.cols() != dim)
            throw std::invalid_argument("euclidean_hessian: evaluator size mismatch");
        return 0.5 * (H + H.transpose());
    }
    Eigen::MatrixXd H(dim, dim);
    const double u0 = u.eval(xi);
    for (int a = 0; a < dim; ++a) {
        const double ha = step2(xi, a);
        H(a, a) = (u.eval(shifted(xi, a, ha)) - 2.0 * u0 +
                   u.eval(shifted(xi, a, -ha))) / (ha * ha);
        for (int b = a + 1; b < dim; ++b) {
            const double hb = step2(xi, b);
            const double v =
                (u.eval(shifted(shifted(xi, a, ha), b, hb)) -
                 u.eval(shifted(shifted(xi, a, ha), b, -hb)) -
                 u.eval(shifted(shifted(xi, a, -ha), b, hb)) +
                 u.eval(shifted(shifted(xi, a, -ha), b, -hb))) / (4.0 * ha * hb);
            H(a, b) = v;
            H(b, a) = v;
        }
    }
    return H;
}

Eigen::VectorXd horizontal_gradient(const SmoothFn& u, const GroupPoint& xi) {
    return sigma_at(xi) * euclidean_gradient(u, xi);
}

Eigen::MatrixXd horizontal_hessian(const SmoothFn& u, const GroupPoint& xi) {
    const Eigen::MatrixXd s = sigma_at(xi);
    Eigen::MatrixXd H = s * euclidean_hessian(u, xi) * s.transpose();
    return 0.5 * (H + H.transpose());
}

double sublaplacian(const SmoothFn& u, const GroupPoint& xi) {
    return horizontal_hessian(u, xi).trace();
}

SmoothFn apply_X(const SmoothFn& u, int i) {
    SmoothFn d;
    d.eval = [u, i](const GroupPoint& xi) {
        require_index(i, xi.N());
        if (u.grad) {
            Eigen::VectorXd g = u.grad(xi);
            return g[i] + 2.0 * xi.y(i) * g[2 * xi.N()];
        }
        return partial_fd(u.eval, xi, i) +
               2.0 * xi.y(i) * partial_fd(u.eval, xi, t_axis(xi.N()));
    };
    return d;
}

SmoothFn apply_Y(const SmoothFn& u, int i) {
    SmoothFn d;
    d.eval = [u, i](const GroupPoint& xi) {
        require_index(i, xi.N());
        const int N = xi.N();
        if (u.grad) {
            Eigen::VectorXd g = u.grad(xi);
            return g[N + i] - 2.0 * xi.x(i) * g[2 * N];
        }
        return partial_fd(u.eval, xi, N + i) -
               2.0 * xi.x(i) * partial_fd(u.eval, xi, t_axis(N));
    };
    return d;
}

double commutator_defect(const SmoothFn& u, const GroupPoint& xi, int i) {
    require_index(i, xi.N());
    const SmoothFn Yu = apply_Y(u, i);
    const SmoothFn Xu = apply_X(u, i);
    const double XYu = apply_X(Yu, i).eval(xi);
    const double YXu = apply_Y(Xu, i).eval(xi);
    double dt = u.grad ? u.grad(xi)[t_axis(xi.N())]
                       : partial_fd(u.eval, xi, t_axis(xi.N()));
    return XYu - YXu + 4.0 * dt;
}

Eigen::MatrixXd degeneracy_matrix(const GroupPoint& xi) {
    const Eigen::MatrixXd s = sigma_at(xi);
    return s.transpose() * s;
}

SmoothFn left_translate(const SmoothFn& u, const GroupPoint& w) {
    const int N = w.N();
    const int dim = 2 * N + 1;
    // Jacobian J of xi -> w o xi (constant in xi): J = I except the t-row
    // picks up the twist: d(w o xi)_t / dx_j = 2 w_y_j, / dy_j = -2 w_x_j.
    Eigen::MatrixXd J = Eigen::MatrixXd::Identity(dim, dim);
    for (int j = 0; j < N; ++j) {
        J(dim - 1, j) = 2.0 * w.y(j);
        J(dim - 1, N + j) = -2.0 * w.x(j);
    }
    SmoothFn v;
    v.eval = [u, w](const GroupPoint& xi) { return u.eval(compose(w, xi)); };
    if (u.grad)
        v.grad = [u, w, J](const GroupPoint& xi) -> Eigen::VectorXd {
            return J.transpose() * u.grad(compose(w, xi));
        };
    if (u.hess)
        v.hess = [u, w, J](const GroupPoint& xi) -> Eigen::MatrixXd {
            return J.transpose() * u.hess(compose(w, xi)) * J;
        };
    v.sup_abs = u.sup_abs;  // translation is a bijection of H^N
    return v;
}

}  // namespace heis
