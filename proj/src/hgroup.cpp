#include "heis/hgroup.hpp"

#include <cmath>
#include <stdexcept>

namespace heis {

GroupPoint::GroupPoint(Eigen::VectorXd z_, double t_) : z(std::move(z_)), t(t_) {
    if (z.size() == 0 || z.size() % 2 != 0)
        throw std::invalid_argument("GroupPoint: horizontal part must have even positive size 2N");
}

GroupPoint::GroupPoint(double x, double y, double t_) {
    z.resize(2);
    z << x, y;
    t = t_;
}

GroupPoint GroupPoint::Zero(int N) {
    if (N < 1) throw std::invalid_argument("GroupPoint::Zero: N must be >= 1");
    GroupPoint p;
    p.z = Eigen::VectorXd::Zero(2 * N);
    p.t = 0.0;
    return p;
}

GroupPoint compose(const GroupPoint& a, const GroupPoint& b) {
    if (a.z.size() != b.z.size())
        throw std::invalid_argument("compose: mismatched group dimensions");
    const int N = a.N();
    GroupPoint c;
    c.z = a.z + b.z;
    // Twist term 2<y, x'> - 2<x, y'> makes the law non-commutative.
    const auto ax = a.z.head(N), ay = a.z.tail(N);
    const auto bx = b.z.head(N), by = b.z.tail(N);
    c.t = a.t + b.t + 2.0 * ay.dot(bx) - 2.0 * ax.dot(by);
    return c;
}

GroupPoint inverse(const GroupPoint& a) {
    GroupPoint c;
    c.z = -a.z;
    c.t = -a.t;
    return c;
}

GroupPoint dilate(double lam, const GroupPoint& a) {
    if (!(lam > 0.0))
        throw std::invalid_argument("dilate: scale must be positive");
    GroupPoint c;
    c.z = lam * a.z;
    c.t = lam * lam * a.t;
    return c;
}

double gauge_norm(const GroupPoint& a) {
    // ((|z|^2)^2 + t^2)^{1/4} via hypot for a wide safe range.
    return std::sqrt(std::hypot(a.z.squaredNorm(), a.t));
}

double gauge_distance(const GroupPoint& a, const GroupPoint& b) {
    return gauge_norm(compose(inverse(b), a));
}

bool ball_contains(const GroupPoint& center, double radius, const GroupPoint& p) {
    return gauge_distance(p, center) < radius;
}

}  // namespace heis
