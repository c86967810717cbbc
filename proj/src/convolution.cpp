#include "heis/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heis {

namespace {

// Fourth power of the gauge distance between two points, computed without
// roots so window comparisons are exact.
double gauge_dist4(double dx, double dy, double dt_twisted) {
    const double rho = dx * dx + dy * dy;
    return rho * rho + dt_twisted * dt_twisted;
}

// Index window [lo, hi] of grid coordinates c(i) = c0 + h*i intersecting
// [center - half, center + half].
void axis_window(double c0, double h, int n, double center, double half,
                 int& lo, int& hi) {
    lo = std::max(0, static_cast<int>(std::ceil((center - half - c0) / h)));
    hi = std::min(n - 1,
                  static_cast<int>(std::floor((center + half - c0) / h)));
}

// Shared extremum sweep: sign = +1 computes the sup-convolution, sign = -1
// the inf-convolution (by maximizing sign*u - kernel and flipping back).
FieldWithExterior extremal_convolution(const FieldWithExterior& u, double eps,
                                       double sign,
                                       std::vector<std::size_t>* arg) {
    if (!(eps > 0.0)) {
        throw std::domain_error("extremal convolution: eps must be > 0");
    }
    const Grid& g = u.grid();
    const std::vector<double>& v = u.values();

    double vmin = v[0], vmax = v[0];
    for (double w : v) {
        vmin = std::min(vmin, w);
        vmax = std::max(vmax, w);
    }
    const double osc = vmax - vmin;
    const double window4 = eps * osc;
    const double half = std::pow(window4, 0.25);  // |z-offset| <= |delta|

    std::vector<double> out(g.size());
    if (arg) arg->assign(g.size(), 0);

    for (int k = 0; k < g.nt(); ++k) {
        for (int j = 0; j < g.ny(); ++j) {
            for (int i = 0; i < g.nx(); ++i) {
                const double xc = g.x(i), yc = g.y(j), tc = g.t(k);
                // eta = xi candidate: kernel term is exactly zero
                double best = sign * v[g.index(i, j, k)];
                double best_d4 = 0.0;
                std::size_t best_id = g.index(i, j, k);
                int ilo, ihi, jlo, jhi;
                axis_window(g.x0(), g.hxy(), g.nx(), xc, half, ilo, ihi);
                axis_window(g.y0(), g.hxy(), g.ny(), yc, half, jlo, jhi);
                for (int kk = 0; kk < g.nt(); ++kk) {
                    for (int jj = jlo; jj <= jhi; ++jj) {
                        for (int ii = ilo; ii <= ihi; ++ii) {
                            const double dx = xc - g.x(ii);
                            const double dy = yc - g.y(jj);
                            // t-component of eta^{-1} o xi
                            const double dt = tc - g.t(kk) +
                                              2.0 * (g.x(ii) * yc -
                                                     g.y(jj) * xc);
                            const double d4 = gauge_dist4(dx, dy, dt);
                            if (d4 > window4) continue;
                            const std::size_t id = g.index(ii, jj, kk);
                            const double cand = sign * v[id] - d4 / eps;
                            if (cand > best ||
                                (cand == best && d4 < best_d4)) {
                                best = cand;
                                best_d4 = d4;
                                best_id = id;
                            }
                        }
                    }
                }
                out[g.index(i, j, k)] = sign * best;
                if (arg) (*arg)[g.index(i, j, k)] = best_id;
            }
        }
    }
    return FieldWithExterior(g, std::move(out), u.exterior());
}

}  // namespace

FieldWithExterior sup_convolution(const FieldWithExterior& u, double eps,
                                  std::vector<std::size_t>* argmax) {
    return extremal_convolution(u, eps, +1.0, argmax);
}

FieldWithExterior inf_convolution(const FieldWithExterior& u, double eps,
                                  std::vector<std::size_t>* argmin) {
    return extremal_convolution(u, eps, -1.0, argmin);
}

}  // namespace heis
