#pragma once

#include <functional>

#include "ehpc/types.hpp"

namespace ehpc {

/// Brute-force nearest-point search over the capped simplex at a fixed grid
/// resolution. Test oracle only; supports n <= 3.
PowerVector qp_oracle(const std::vector<double>& point, double p_max, double resolution);

/// Brute-force maximizer of an arbitrary objective over the capped simplex.
/// Test oracle only; supports n <= 3.
PowerVector grid_argmax(const std::function<double(const PowerVector&)>& objective,
                        int n, double cap, double resolution);

}  // namespace ehpc
