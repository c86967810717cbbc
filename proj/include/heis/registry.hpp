#pragma once

/// Named closed-form functions for run configuration. Runs select f, g,
/// and probe fields by a registry string so experiments are reproducible
/// without an expression parser:
///   "const:<v>"      constant v (bounded, with exact derivatives)
///   "gauge_pow:<p>"  gauge_norm(xi)^p for p > 0 (unbounded on the group,
///                    so it declares no sup bound; pipelines that need
///                    bounded data reject it with a clear message)
///   "gaussian_gauge" exp(-gauge_norm(xi)^4), bounded by 1
#include <string>

#include "heis/hcalculus.hpp"

namespace heis {

/// Parses a registry name and returns the function. Unknown names or
/// malformed parameters throw std::invalid_argument naming the valid
/// forms.
SmoothFn registry_fn(const std::string& name);

}  // namespace heis
