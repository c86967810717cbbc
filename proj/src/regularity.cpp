#include "heis/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace heis {

namespace {

constexpr double kGammaFloor = 1e-12;

struct ScanResult {
  double osc = 0.0;
  int nodes = 0;
};

ScanResult scan_ball(const FieldWithExterior& u, const GaugeBall& B) {
  const Grid& g = u.grid();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  int n = 0;
  for (int k = 0; k < g.nt(); ++k) {
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        if (!B.contains(g.node(i, j, k))) continue;
        const double v = u.at(i, j, k);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        ++n;
      }
    }
  }
  return {n < 2 ? 0.0 : hi - lo, n};
}

}  // namespace

double oscillation(const FieldWithExterior& u, const GaugeBall& B) {
  const ScanResult r = scan_ball(u, B);
  if (r.nodes < 2) {
    throw std::domain_error(
        "oscillation needs at least two grid nodes inside the ball");
  }
  return r.osc;
}

DyadicProfile dyadic_profile(const FieldWithExterior& u, int k_max) {
  if (k_max < 0) {
    throw std::invalid_argument("k_max must be nonnegative");
  }
  const GroupPoint origin(0.0, 0.0, 0.0);
  DyadicProfile prof;
  for (int k = 0; k <= k_max; ++k) {
    const double radius = std::ldexp(1.0, -k);
    const ScanResult r = scan_ball(u, GaugeBall{origin, radius});
    if (r.nodes < 2) {
      prof.truncated = true;
      break;
    }
    prof.entries.push_back({k, radius, r.osc, r.nodes});
  }
  prof.h_xy = u.grid().hxy();
  return prof;
}

HolderFit fit_holder(const DyadicProfile& profile) {
  std::vector<const ProfileEntry*> resolved;
  for (const ProfileEntry& e : profile.entries) {
    if (e.nodes >= 8 && e.radius >= 4.0 * profile.h_xy) resolved.push_back(&e);
  }
  if (resolved.empty()) {
    throw std::domain_error(
        "profile has no resolved entries (>= 8 nodes, radius >= 4 h_xy)");
  }

  bool all_zero = true;
  std::vector<const ProfileEntry*> points;
  for (const ProfileEntry* e : resolved) {
    if (e->osc > 0.0) {
      all_zero = false;
      points.push_back(e);
    }
  }
  if (all_zero) {
    HolderFit fit;
    fit.C_fit = 0.0;
    fit.gamma_fit = 1.0;
    fit.delta_fit = 0.5;
    fit.constant_field = true;
    fit.points_used = 0;
    return fit;
  }
  if (points.size() < 3) {
    throw std::domain_error(
        "fit needs at least three nonzero resolved entries");
  }

  const double log2 = std::log(2.0);
  double sx = 0.0, sy = 0.0;
  for (const ProfileEntry* e : points) {
    sx += e->k * log2;
    sy += std::log(e->osc);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const ProfileEntry* e : points) {
    const double dx = e->k * log2 - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(e->osc) - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;

  HolderFit fit;
  fit.C_fit = std::exp(intercept);
  fit.gamma_fit = std::clamp(-slope, kGammaFloor, 1.0);
  fit.delta_fit = 1.0 - std::pow(2.0, -fit.gamma_fit);
  fit.points_used = static_cast<int>(points.size());
  return fit;
}

}  // namespace heis
