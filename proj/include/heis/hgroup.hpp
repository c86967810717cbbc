#pragma once

// Heisenberg group H^N = (R^{2N+1}, o): points, group law, anisotropic
// dilations, and the Koranyi gauge. Everything downstream (horizontal
// calculus, singular-integral quadrature, solvers) sits on top of these
// few algebraic primitives.

#include <Eigen/Core>

namespace heis {

/// Point of H^N ~ R^{2N+1}. The horizontal part is stored as one vector
/// z = (x_1,...,x_N, y_1,...,y_N); t is the vertical coordinate.
struct GroupPoint {
    Eigen::VectorXd z;  ///< horizontal coordinates, size 2N, layout (x | y)
    double t = 0.0;     ///< vertical coordinate

    GroupPoint() = default;
    GroupPoint(Eigen::VectorXd z_, double t_);
    /// Convenience constructor for H^1: (x, y, t).
    GroupPoint(double x, double y, double t_);

    /// Identity element (origin) of H^N.
    static GroupPoint Zero(int N);

    int N() const { return static_cast<int>(z.size()) / 2; }
    double x(int i) const { return z[i]; }
    double y(int i) const { return z[N() + i]; }
};

/// Homogeneous dimension Q = 2N + 2 of H^N (the exponent governing the
/// volume scaling |dilate(lam, B)| = lam^Q |B|).
inline int homogeneous_dimension(int N) { return 2 * N + 2; }

/// Group law a o b = (x+x', y+y', t+t' + 2<y,x'> - 2<x,y'>).
/// Throws std::invalid_argument on mismatched N.
GroupPoint compose(const GroupPoint& a, const GroupPoint& b);

/// Group inverse a^{-1} = -a (componentwise negation).
GroupPoint inverse(const GroupPoint& a);

/// Anisotropic dilation dilate(lam, (z,t)) = (lam z, lam^2 t), lam > 0.
/// Its Jacobian determinant is lam^Q with Q = 2N+2.
GroupPoint dilate(double lam, const GroupPoint& a);

/// Koranyi gauge |a| = ((|z|^2)^2 + t^2)^{1/4}. Symmetric
/// (gauge_norm(inverse(a)) == gauge_norm(a)) and 1-homogeneous under
/// dilations.
double gauge_norm(const GroupPoint& a);

/// Left-invariant gauge distance d(a, b) = gauge_norm(inverse(b) o a).
double gauge_distance(const GroupPoint& a, const GroupPoint& b);

/// Open Koranyi ball membership: gauge_distance(p, center) < radius
/// (strict inequality; boundary points are outside).
bool ball_contains(const GroupPoint& center, double radius,
                   const GroupPoint& p);

/// Open gauge (Koranyi) ball: the canonical bounded domain of the engine.
struct GaugeBall {
  GroupPoint center;
  double radius = 1.0;

  /// Strict membership test; boundary points count as outside.
  bool contains(const GroupPoint& p) const {
    return ball_contains(center, radius, p);
  }
};

}  // namespace heis
