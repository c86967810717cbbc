#include "heis/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

#include "heis/mixedop.hpp"

namespace heis {

namespace {

constexpr int kDivergenceLag = 100;
constexpr double kDivergenceFactor = 10.0;

// Runs body(lo, hi) over a partition of [0, n). Every index writes only
// its own output slots, so the result is identical for any thread count.
template <typename F>
void parallel_for(int n, int threads, F&& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Largest absolute nodal-weight sum of the horizontal-Hessian stencil at
// one node: diagonal second differences carry 2/h_a^2 times the squared
// frame-column norm (1, 1, 4 rho^2 for the x, y, t columns), each cross
// stencil 1/(h_a h_b) times twice the product of the column norms.
double stencil_weight_sum(double hx, double hy, double ht, double x,
                          double y) {
  const double rho = std::hypot(x, y);
  return 2.0 / (hx * hx) + 2.0 / (hy * hy) +
         8.0 * rho * rho / (ht * ht) + 2.0 / (hx * hy) +
         4.0 * rho / (hx * ht) + 4.0 * rho / (hy * ht);
}

void ensure_covers(const Grid& grid, const GaugeBall& ball) {
  const double cx = ball.center.x(0), cy = ball.center.y(0);
  const double ct = ball.center.t, r = ball.radius;
  // Bounding-box estimate of the ball: horizontal extent r, vertical
  // extent r^2 plus the twist reach 2 |(cx, cy)| r.
  const double tt = r * r + 2.0 * std::hypot(cx, cy) * r;
  if (cx - r < grid.x0() || cx + r > grid.x1() || cy - r < grid.y0() ||
      cy + r > grid.y1() || ct - tt < grid.t0() || ct + tt > grid.t1()) {
    throw std::invalid_argument("grid box does not cover the ball");
  }
}

// Closed-form extremal value of a symmetric 2x2 matrix (the horizontal
// Hessian on H^1): Lambda on the nonnegative eigenvalues, lambda on the
// negative ones. Matches the general spectral route up to rounding.
double pucci_plus_2x2(double a00, double a01, double a11, double lambda,
                      double Lambda) {
  const double mean = 0.5 * (a00 + a11);
  const double rad = std::hypot(0.5 * (a00 - a11), a01);
  const double e1 = mean + rad;
  const double e2 = mean - rad;
  return (e1 >= 0.0 ? Lambda * e1 : lambda * e1) +
         (e2 >= 0.0 ? Lambda * e2 : lambda * e2);
}

// Precomputed geometry of one Dirichlet solve: the interior node list, the
// per-node exterior sums of the quadrature (members landing outside the
// grid box evaluate g once, at setup), the interior members' interpolation
// cells and fractions, and the per-node damping factors.
struct Workspace {
  int nx = 0, ny = 0, nt = 0;
  double hx = 0, hy = 0, ht = 0;
  std::ptrdiff_t sy = 0, st = 0;  // flat strides for j and k steps

  std::vector<int> node;            // flat node index per interior node
  std::vector<double> xs, ys;       // node coordinates (sigma factors)
  std::vector<double> fs;           // f samples
  std::vector<double> ext;          // exterior quadrature sums
  std::vector<double> tau;          // damping per node
  std::vector<std::size_t> seg;     // member ranges, size M + 1
  std::vector<int> mcell;           // interpolation base node (flat)
  std::vector<double> mfx, mfy, mft, mw;
  double pair_mass = 0.0;           // total pair weight of the rule
  OperatorParams p;
};

// Mirrors FieldWithExterior's cell location so the fast path and the
// reference evaluator classify and interpolate every member identically.
inline void locate(double v, double v0, double h, int n, int& cell,
                   double& frac) {
  const double u = (v - v0) / h;
  cell = std::min(static_cast<int>(u), n - 2);
  cell = std::max(cell, 0);
  frac = u - cell;
  frac = std::clamp(frac, 0.0, 1.0);
}

Workspace build_workspace(const DirichletProblem& prob, const Grid& grid,
                          const QuadratureSpec& q, double theta,
                          int threads) {
  prob.validate();
  q.validate();
  ensure_covers(grid, prob.Omega);
  // Same contract the per-evaluation route enforces: the neglected tail
  // must fit the tolerance at the data scale (solutions are bounded by
  // the exterior data up to forcing; factor 8 is headroom).
  const double data_bound = 8.0 * std::max(1.0, *prob.g.sup_abs);
  if (tail_bound(q.tail_radius, prob.params, data_bound) >
      q.tail_tolerance) {
    throw std::invalid_argument(
        "quadrature tail bound exceeds tail_tolerance at the data scale; "
        "enlarge tail_radius");
  }

  Workspace ws;
  ws.p = prob.params;
  ws.nx = grid.nx();
  ws.ny = grid.ny();
  ws.nt = grid.nt();
  ws.hx = grid.hxy();
  ws.hy = grid.hxy();
  ws.ht = grid.ht();
  ws.sy = ws.nx;
  ws.st = static_cast<std::ptrdiff_t>(ws.nx) * ws.ny;

  const auto mask = interior_mask(grid, prob.Omega);
  for (int k = 0; k < ws.nt; ++k) {
    for (int j = 0; j < ws.ny; ++j) {
      for (int i = 0; i < ws.nx; ++i) {
        const std::size_t id = grid.index(i, j, k);
        if (!mask[id]) continue;
        ws.node.push_back(static_cast<int>(id));
        ws.xs.push_back(grid.x(i));
        ws.ys.push_back(grid.y(j));
        const GroupPoint xi = grid.node(i, j, k);
        const double fv = prob.f.eval(xi);
        if (!std::isfinite(fv)) {
          throw std::domain_error(
              "forcing term f must evaluate finite on the interior nodes");
        }
        ws.fs.push_back(fv);
      }
    }
  }
  if (ws.node.empty()) {
    throw std::invalid_argument(
        "grid does not resolve any interior node of the ball");
  }

  const GaugePolarRule rule(q, ws.p.s, ws.p.N);
  ws.pair_mass = rule.kernel_mass();
  const int M = static_cast<int>(ws.node.size());
  const auto& pairs = rule.pairs();

  const double x0 = grid.x0(), x1 = grid.x1();
  const double y0 = grid.y0(), y1 = grid.y1();
  const double t0 = grid.t0(), t1 = grid.t1();
  const auto in_box = [&](double px, double py, double pt) {
    return px >= x0 && px <= x1 && py >= y0 && py <= y1 && pt >= t0 &&
           pt <= t1;
  };

  // Pass A: per-node exterior sums plus interior-member counts. Both
  // members of a pair are classified; exterior members are summed against
  // g immediately (their position never changes over the iteration).
  std::vector<std::size_t> counts(M, 0);
  ws.ext.assign(M, 0.0);
  parallel_for(M, threads, [&](int lo, int hi) {
    for (int m = lo; m < hi; ++m) {
      const double x = ws.xs[m], y = ws.ys[m];
      const double t =
          grid.t(static_cast<int>(ws.node[m] / ws.st));
      double ext = 0.0;
      std::size_t live = 0;
      for (const QuadPair& pr : pairs) {
        const double ex = pr.eta.x(0), ey = pr.eta.y(0), et = pr.eta.t;
        const double upx = x + ex, upy = y + ey;
        const double upt = ((t + et) + 2.0 * (y * ex)) - 2.0 * (x * ey);
        const double umx = x - ex, umy = y - ey;
        const double umt =
            ((t + (-et)) + 2.0 * (y * (-ex))) - 2.0 * (x * (-ey));
        if (in_box(upx, upy, upt)) {
          ++live;
        } else {
          ext += pr.weight * prob.g.eval(GroupPoint(upx, upy, upt));
        }
        if (in_box(umx, umy, umt)) {
          ++live;
        } else {
          ext += pr.weight * prob.g.eval(GroupPoint(umx, umy, umt));
        }
      }
      ws.ext[m] = ext;
      counts[m] = live;
    }
  });

  ws.seg.assign(M + 1, 0);
  for (int m = 0; m < M; ++m) ws.seg[m + 1] = ws.seg[m] + counts[m];
  const std::size_t total = ws.seg[M];
  ws.mcell.resize(total);
  ws.mfx.resize(total);
  ws.mfy.resize(total);
  ws.mft.resize(total);
  ws.mw.resize(total);

  // Pass B: fill the interior members and measure each node's own weight
  // in them (the diagonal of the discretized nonlocal term).
  std::vector<double> own(M, 0.0);
  parallel_for(M, threads, [&](int lo, int hi) {
    for (int m = lo; m < hi; ++m) {
      const double x = ws.xs[m], y = ws.ys[m];
      const double t =
          grid.t(static_cast<int>(ws.node[m] / ws.st));
      const int self = ws.node[m];
      std::size_t at = ws.seg[m];
      double own_mass = 0.0;
      for (const QuadPair& pr : pairs) {
        const double ex = pr.eta.x(0), ey = pr.eta.y(0), et = pr.eta.t;
        for (int side = 0; side < 2; ++side) {
          double px, py, pt;
          if (side == 0) {
            px = x + ex;
            py = y + ey;
            pt = ((t + et) + 2.0 * (y * ex)) - 2.0 * (x * ey);
          } else {
            px = x - ex;
            py = y - ey;
            pt = ((t + (-et)) + 2.0 * (y * (-ex))) - 2.0 * (x * (-ey));
          }
          if (!in_box(px, py, pt)) continue;
          int ci, cj, ck;
          double fx, fy, ft;
          locate(px, x0, ws.hx, ws.nx, ci, fx);
          locate(py, y0, ws.hy, ws.ny, cj, fy);
          locate(pt, t0, ws.ht, ws.nt, ck, ft);
          const int base = static_cast<int>(grid.index(ci, cj, ck));
          ws.mcell[at] = base;
          ws.mfx[at] = fx;
          ws.mfy[at] = fy;
          ws.mft[at] = ft;
          ws.mw[at] = pr.weight;
          ++at;
          // Weight of this node's own value inside the member: nonzero
          // only when the interpolation cell touches the node.
          const int di = self - base;
          const double wx[2] = {1.0 - fx, fx};
          const double wy[2] = {1.0 - fy, fy};
          const double wt[2] = {1.0 - ft, ft};
          for (int dk = 0; dk < 2; ++dk) {
            for (int dj = 0; dj < 2; ++dj) {
              for (int dii = 0; dii < 2; ++dii) {
                if (di == dii + dj * ws.sy + dk * ws.st) {
                  own_mass += pr.weight * wx[dii] * wy[dj] * wt[dk];
                }
              }
            }
          }
        }
      }
      own[m] = own_mass;
    }
  });

  // Damping: theta over the diagonal coefficient magnitude of the
  // discretized operator — the extremal local term's worst stencil weight
  // plus the measured nonlocal diagonal 0.5 c (2 * pair mass - own).
  ws.tau.resize(M);
  for (int m = 0; m < M; ++m) {
    const double d_loc =
        ws.p.alpha * ws.p.Lambda *
        stencil_weight_sum(ws.hx, ws.hy, ws.ht, ws.xs[m], ws.ys[m]);
    const double deficit = std::max(0.0, 2.0 * ws.pair_mass - own[m]);
    const double d_nl = 0.5 * ws.p.beta * ws.p.c_norm * deficit;
    const double denom = d_loc + d_nl;
    if (!(denom > 0.0) || !std::isfinite(denom)) {
      throw std::invalid_argument(
          "degenerate damping denominator; the quadrature carries no mass");
    }
    ws.tau[m] = theta / denom;
  }
  return ws;
}

// One Jacobi sweep of (L u - f) over the interior nodes. Reads the full
// nodal array (frozen exterior values included), writes r[m] per node.
void sweep_residual(const Workspace& ws, const std::vector<double>& v,
                    int threads, std::vector<double>& r) {
  const int M = static_cast<int>(ws.node.size());
  const double alpha = ws.p.alpha, lambda = ws.p.lambda,
               Lambda = ws.p.Lambda;
  const double half_beta_c = 0.5 * ws.p.beta * ws.p.c_norm;
  const double hx = ws.hx, ht = ws.ht;
  const std::ptrdiff_t sy = ws.sy, st = ws.st;

  parallel_for(M, threads, [&](int lo, int hi) {
    for (int m = lo; m < hi; ++m) {
      const std::ptrdiff_t id = ws.node[m];
      const double c = v[id];

      double local = 0.0;
      if (alpha != 0.0) {
        const double xp = v[id + 1], xm = v[id - 1];
        const double yp = v[id + sy], ym = v[id - sy];
        const double tp = v[id + st], tm = v[id - st];
        const double xpyp = v[id + 1 + sy], xpym = v[id + 1 - sy];
        const double xmyp = v[id - 1 + sy], xmym = v[id - 1 - sy];
        const double xptp = v[id + 1 + st], xptm = v[id + 1 - st];
        const double xmtp = v[id - 1 + st], xmtm = v[id - 1 - st];
        const double yptp = v[id + sy + st], yptm = v[id + sy - st];
        const double ymtp = v[id - sy + st], ymtm = v[id - sy - st];

        const double h00 = (xp - 2.0 * c + xm) / (hx * hx);
        const double h11 = (yp - 2.0 * c + ym) / (hx * hx);
        const double h22 = (tp - 2.0 * c + tm) / (ht * ht);
        const double h01 = (xpyp - xpym - xmyp + xmym) / (4.0 * hx * hx);
        const double h02 = (xptp - xptm - xmtp + xmtm) / (4.0 * hx * ht);
        const double h12 = (yptp - yptm - ymtp + ymtm) / (4.0 * hx * ht);

        const double x = ws.xs[m], y = ws.ys[m];
        const double a00 = h00 + 4.0 * y * h02 + 4.0 * y * y * h22;
        const double a11 = h11 - 4.0 * x * h12 + 4.0 * x * x * h22;
        const double a01 =
            h01 - 2.0 * x * h02 + 2.0 * y * h12 - 4.0 * x * y * h22;
        local = alpha * pucci_plus_2x2(a00, a01, a11, lambda, Lambda);
      }

      double live = 0.0;
      for (std::size_t a = ws.seg[m]; a < ws.seg[m + 1]; ++a) {
        const std::ptrdiff_t base = ws.mcell[a];
        const double fx = ws.mfx[a], fy = ws.mfy[a], ft = ws.mft[a];
        const double c00 = v[base] * (1 - fx) + v[base + 1] * fx;
        const double c10 = v[base + sy] * (1 - fx) + v[base + sy + 1] * fx;
        const double c01 = v[base + st] * (1 - fx) + v[base + st + 1] * fx;
        const double c11 =
            v[base + st + sy] * (1 - fx) + v[base + st + sy + 1] * fx;
        const double c0 = c00 * (1 - fy) + c10 * fy;
        const double c1 = c01 * (1 - fy) + c11 * fy;
        live += ws.mw[a] * (c0 * (1 - ft) + c1 * ft);
      }
      const double raw = live + ws.ext[m] - 2.0 * ws.pair_mass * c;
      const double L = local + (raw == 0.0 ? 0.0 : half_beta_c * raw);
      r[m] = L - ws.fs[m];
    }
  });
}

double sup_abs_or_nan(const std::vector<double>& r) {
  double sup = 0.0;
  for (double v : r) {
    if (!std::isfinite(v)) return std::numeric_limits<double>::quiet_NaN();
    sup = std::max(sup, std::abs(v));
  }
  return sup;
}

}  // namespace

void DirichletProblem::validate() const {
  params.validate();
  if (params.N != 1) {
    throw std::invalid_argument("the solver is implemented for H^1 (N = 1)");
  }
  if (Omega.center.N() != 1) {
    throw std::invalid_argument("domain center must live in H^1");
  }
  if (!(Omega.radius > 0.0) || !std::isfinite(Omega.radius)) {
    throw std::invalid_argument("ball radius must be a finite positive real");
  }
  if (!f.eval || !g.eval) {
    throw std::invalid_argument("problem needs evaluators for f and g");
  }
  if (!g.sup_abs || !std::isfinite(*g.sup_abs) || *g.sup_abs < 0.0) {
    throw std::domain_error(
        "exterior data g must declare a finite sup bound (bounded data)");
  }
}

void SolveOptions::validate() const {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("damping factor theta must be positive");
  }
  if (anderson_window < 0) {
    throw std::invalid_argument("anderson_window must be nonnegative");
  }
  if (threads < 1) {
    throw std::invalid_argument("threads must be >= 1");
  }
  if (quad) quad->validate();
}

QuadratureSpec default_solver_quadrature(const Grid& grid,
                                         const DirichletProblem& prob) {
  prob.validate();
  QuadratureSpec q;
  q.inner_radius = grid.hxy() / 8.0;
  q.annuli_per_decade = 4;
  q.points_per_annulus = 64;
  q.tail_tolerance = 1e-4;
  const double bound = 8.0 * std::max(1.0, *prob.g.sup_abs);
  q.tail_radius = std::max(
      1.01 * tail_radius_for_tolerance(prob.params, bound, q.tail_tolerance),
      100.0 * q.inner_radius);
  return q;
}

std::vector<std::uint8_t> interior_mask(const Grid& grid,
                                        const GaugeBall& Omega) {
  std::vector<std::uint8_t> mask(grid.size(), 0);
  for (int k = 1; k + 1 < grid.nt(); ++k) {
    for (int j = 1; j + 1 < grid.ny(); ++j) {
      for (int i = 1; i + 1 < grid.nx(); ++i) {
        if (Omega.contains(grid.node(i, j, k))) {
          mask[grid.index(i, j, k)] = 1;
        }
      }
    }
  }
  return mask;
}

double damping_bound(const Grid& grid, const OperatorParams& p) {
  p.validate();
  if (p.N != 1) {
    throw std::invalid_argument("the solver is implemented for H^1 (N = 1)");
  }
  double w_max = 0.0;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      w_max = std::max(w_max, stencil_weight_sum(grid.hxy(), grid.hxy(),
                                                 grid.ht(), grid.x(i),
                                                 grid.y(j)));
    }
  }
  // Compensated kernel mass resolvable at grid scale: radii below h/2
  // carry no nodal information.
  const double mass = sigma_gauge(p.N) / (2.0 * p.s) *
                      std::pow(grid.hxy() / 2.0, -2.0 * p.s);
  return 1.0 / (p.alpha * p.Lambda * w_max + p.beta * p.c_norm * mass);
}

std::vector<double> interior_residual(const FieldWithExterior& u,
                                      const DirichletProblem& prob,
                                      const QuadratureSpec& q, int threads) {
  if (threads < 1) {
    throw std::invalid_argument("threads must be >= 1");
  }
  const Grid& grid = u.grid();
  const Workspace ws = build_workspace(prob, grid, q, 1.0, threads);
  std::vector<double> r(ws.node.size(), 0.0);
  sweep_residual(ws, u.values(), threads, r);
  std::vector<double> full(grid.size(), 0.0);
  for (std::size_t m = 0; m < ws.node.size(); ++m) {
    full[ws.node[m]] = r[m];
  }
  return full;
}

std::pair<FieldWithExterior, SolveReport> solve_dirichlet(
    const DirichletProblem& prob, const Grid& grid, double tol, int max_iter,
    const SolveOptions& options) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw std::invalid_argument("tolerance must be a finite positive real");
  }
  if (max_iter < 1) {
    throw std::invalid_argument("max_iter must be >= 1");
  }
  options.validate();
  prob.validate();
  const QuadratureSpec q =
      options.quad ? *options.quad : default_solver_quadrature(grid, prob);

  const Workspace ws =
      build_workspace(prob, grid, q, options.theta, options.threads);
  const int M = static_cast<int>(ws.node.size());

  // Nodal state: g everywhere, interior overwritten by the mean of g over
  // the frozen nodes adjacent to the interior.
  std::vector<double> values(grid.size());
  for (int k = 0; k < grid.nt(); ++k) {
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nx(); ++i) {
        const double gv = prob.g.eval(grid.node(i, j, k));
        if (!std::isfinite(gv)) {
          throw std::domain_error(
              "exterior data g must evaluate finite at grid nodes");
        }
        values[grid.index(i, j, k)] = gv;
      }
    }
  }
  {
    std::vector<std::uint8_t> interior_flag(grid.size(), 0);
    for (int id : ws.node) interior_flag[id] = 1;
    std::vector<std::uint8_t> boundary(grid.size(), 0);
    const std::ptrdiff_t offs[6] = {+1, -1, +ws.sy, -ws.sy, +ws.st, -ws.st};
    for (int id : ws.node) {
      for (const std::ptrdiff_t o : offs) {
        if (!interior_flag[id + o]) boundary[id + o] = 1;
      }
    }
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t id = 0; id < boundary.size(); ++id) {
      if (boundary[id]) {
        sum += values[id];
        ++n;
      }
    }
    const double mean = sum / static_cast<double>(n);
    for (int id : ws.node) values[id] = mean;
  }

  SolveReport report;
  report.interior_nodes = M;
  report.tau = *std::min_element(ws.tau.begin(), ws.tau.end());

  std::vector<double> r(M, 0.0);
  std::vector<double> res_hist;
  res_hist.reserve(std::min(max_iter, 1 << 20));
  double res_prev = std::numeric_limits<double>::infinity();

  // Anderson history of (iterate, fixed-point image) pairs.
  std::deque<Eigen::VectorXd> hist_u, hist_g;
  Eigen::VectorXd u_cur(M);
  for (int m = 0; m < M; ++m) u_cur[m] = values[ws.node[m]];

  for (int iter = 0;; ++iter) {
    sweep_residual(ws, values, options.threads, r);
    const double res = sup_abs_or_nan(r);
    report.iterations = iter;
    report.residual = res;
    if (!std::isfinite(res)) {
      report.abort_reason = "non-finite";
      report.residual = res_hist.empty() ? res : res_hist.back();
      break;
    }
    if (res < tol) {
      report.converged = true;
      break;
    }
    if (iter >= max_iter) {
      report.abort_reason = "max_iter";
      break;
    }
    if (iter >= kDivergenceLag &&
        res > kDivergenceFactor * res_hist[iter - kDivergenceLag]) {
      report.abort_reason = "divergence";
      break;
    }
    res_hist.push_back(res);

    // Fixed-point image of the damped step.
    Eigen::VectorXd g_img(M);
    for (int m = 0; m < M; ++m) g_img[m] = u_cur[m] + ws.tau[m] * r[m];

    if (res > 2.0 * res_prev) {
      // The extrapolation overshot; re-seed it from the current pair.
      hist_u.clear();
      hist_g.clear();
    }
    res_prev = res;
    hist_u.push_back(u_cur);
    hist_g.push_back(g_img);
    const std::size_t cap =
        static_cast<std::size_t>(options.anderson_window) + 1;
    while (hist_u.size() > cap) {
      hist_u.pop_front();
      hist_g.pop_front();
    }

    Eigen::VectorXd u_next;
    const int h = static_cast<int>(hist_u.size()) - 1;
    if (options.anderson_window > 0 && h >= 1) {
      Eigen::MatrixXd dF(M, h), dG(M, h);
      for (int cidx = 0; cidx < h; ++cidx) {
        dF.col(cidx) = (hist_g[cidx + 1] - hist_u[cidx + 1]) -
                       (hist_g[cidx] - hist_u[cidx]);
        dG.col(cidx) = hist_g[cidx + 1] - hist_g[cidx];
      }
      const Eigen::VectorXd f_last = hist_g.back() - hist_u.back();
      const Eigen::VectorXd gamma =
          dF.colPivHouseholderQr().solve(f_last);
      u_next = hist_g.back() - dG * gamma;
      if (!u_next.allFinite()) {
        hist_u.erase(hist_u.begin(), hist_u.end() - 1);
        hist_g.erase(hist_g.begin(), hist_g.end() - 1);
        u_next = g_img;
      }
    } else {
      u_next = g_img;
    }

    if (!u_next.allFinite()) {
      report.abort_reason = "non-finite";
      break;
    }
    u_cur = u_next;
    for (int m = 0; m < M; ++m) values[ws.node[m]] = u_cur[m];
  }

  return {FieldWithExterior(grid, std::move(values), prob.g),
          std::move(report)};
}

ViscosityReport check_viscosity_inequality(const FieldWithExterior& u,
                                           const SmoothFn& f,
                                           const OperatorParams& p,
                                           const QuadratureSpec& q,
                                           ViscositySide side,
                                           const GaugeBall& region) {
  p.validate();
  q.validate();
  if (!f.eval) {
    throw std::invalid_argument("audit needs an evaluator for f");
  }
  const Grid& grid = u.grid();
  const auto mask = interior_mask(grid, region);
  const GaugePolarRule rule(q, p.s, p.N);

  ViscosityReport rep;
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 1; k + 1 < grid.nt(); ++k) {
    for (int j = 1; j + 1 < grid.ny(); ++j) {
      for (int i = 1; i + 1 < grid.nx(); ++i) {
        if (!mask[grid.index(i, j, k)]) continue;
        const GroupPoint xi = grid.node(i, j, k);
        const double L = evaluate_L(u, xi, p, q, rule);
        const double slack =
            side == ViscositySide::Sub ? f.eval(xi) - L : L - f.eval(xi);
        if (slack > worst) {
          worst = slack;
          rep.where = xi;
        }
        ++rep.nodes_checked;
      }
    }
  }
  if (rep.nodes_checked == 0) {
    throw std::domain_error("region contains no interior grid nodes");
  }
  rep.worst = std::max(worst, 0.0);
  return rep;
}

}  // namespace heis
