#pragma once

#include "ehpc/types.hpp"

namespace ehpc {

/// Exact Euclidean projection onto {p >= 0, sum(p) <= p_max}.
/// Clips negatives; if the clipped point is already feasible it is returned,
/// otherwise the point is projected onto the simplex face {p >= 0, sum = p_max}
/// by sort-and-threshold. Rejects non-finite inputs.
PowerVector project_capped_simplex(const std::vector<double>& point, double p_max);

/// Closed-form projection of p_prev + b for p_prev feasible and b <= 0
/// componentwise: output_i = max(p_prev_i + b_i, 0). Equals the general
/// projection exactly on this input class.
PowerVector project_nonpositive_shift(const PowerVector& p_prev,
                                      const std::vector<double>& b);

/// Max KKT residual of y as a candidate projection of x onto the capped
/// simplex: feasibility, stationarity y_i = max(x_i - lambda, 0), and
/// complementary slackness of the sum constraint.
double projection_kkt_residual(const std::vector<double>& x, const PowerVector& y,
                               double p_max);

}  // namespace ehpc
