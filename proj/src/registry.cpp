#include "heis/registry.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "heis/hgroup.hpp"

namespace heis {

namespace {

double parse_param(const std::string& name, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("registry name '" + name +
                                "': parameter is not a number");
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw std::invalid_argument("registry name '" + name +
                                "': parameter is not a finite number");
  }
  return v;
}

}  // namespace

SmoothFn registry_fn(const std::string& name) {
  const std::size_t colon = name.find(':');
  const std::string kind = name.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? std::string() : name.substr(colon + 1);

  if (kind == "const") {
    if (arg.empty()) {
      throw std::invalid_argument("registry name '" + name +
                                  "': const needs a value, e.g. const:7");
    }
    const double v = parse_param(name, arg);
    SmoothFn f;
    f.eval = [v](const GroupPoint&) { return v; };
    f.grad = [](const GroupPoint& xi) -> Eigen::VectorXd {
      return Eigen::VectorXd::Zero(2 * xi.N() + 1);
    };
    f.hess = [](const GroupPoint& xi) -> Eigen::MatrixXd {
      const int d = 2 * xi.N() + 1;
      return Eigen::MatrixXd::Zero(d, d);
    };
    f.sup_abs = std::abs(v);
    return f;
  }

  if (kind == "gauge_pow") {
    if (arg.empty()) {
      throw std::invalid_argument(
          "registry name '" + name +
          "': gauge_pow needs an exponent, e.g. gauge_pow:0.5");
    }
    const double p = parse_param(name, arg);
    if (!(p > 0.0)) {
      throw std::invalid_argument("registry name '" + name +
                                  "': exponent must be positive");
    }
    SmoothFn f;
    f.eval = [p](const GroupPoint& xi) {
      return std::pow(gauge_norm(xi), p);
    };
    // Unbounded on the group: no sup bound is declared on purpose.
    return f;
  }

  if (kind == "gaussian_gauge") {
    if (!arg.empty()) {
      throw std::invalid_argument("registry name '" + name +
                                  "': gaussian_gauge takes no parameter");
    }
    SmoothFn f;
    f.eval = [](const GroupPoint& xi) {
      const double q = gauge_norm(xi);
      return std::exp(-q * q * q * q);
    };
    f.sup_abs = 1.0;
    return f;
  }

  throw std::invalid_argument(
      "unknown registry name '" + name +
      "'; valid forms: const:<v>, gauge_pow:<p>, gaussian_gauge");
}

}  // namespace heis
