#pragma once

#include "ehpc/types.hpp"
#include "ehpc/utility.hpp"

namespace ehpc {

/// Sample-average approximation of the genie program: maximize the mean
/// utility over channel draws subject to {p >= 0, sum(p) <= min(p_max, mean_energy)}.
struct OracleProblem {
    std::vector<SystemState> samples;  // channel realizations (energy field unused)
    double mean_energy = 0.0;          // analytic when known, else sample mean
    double p_max = 0.0;
    const Utility* utility = nullptr;
    double curvature_bound = 0.0;      // L; for log utility max_i (s_i^max)^2
};

struct OracleResult {
    PowerVector p_star;
    double u_star = 0.0;
    double gradient_mapping_norm = 0.0;
    int iterations = 0;
};

/// Projected gradient ascent with step 1/L and a halving fallback, stopping
/// when the gradient-mapping norm falls below tol. Throws on non-convergence
/// with diagnostics in the message. Summation is compensated and serial, so
/// results are deterministic.
OracleResult solve_upper_bound(const OracleProblem& prob, int iters, double tol);

/// Best fixed power vector in hindsight over a realized trace, feasible for
/// {p >= 0, sum(p) <= min(p_max, mean_energy)}.
OracleResult best_fixed_hindsight(const std::vector<SystemState>& trace,
                                  double mean_energy, double p_max,
                                  const Utility& utility, double curvature_bound,
                                  int iters = 20000, double tol = 1e-9);

/// Mean utility of a fixed power vector over a trace (compensated sum).
double average_utility(const PowerVector& p, const std::vector<SystemState>& trace,
                       const Utility& utility);

}  // namespace ehpc
