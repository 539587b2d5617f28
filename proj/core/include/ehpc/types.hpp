#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ehpc {

/// n-dimensional nonnegative power allocation. Feasible vectors satisfy
/// p_i >= 0 and sum(p) <= p_max (the capped simplex).
using PowerVector = std::vector<double>;

/// One slot's realization: harvested energy plus per-subband channel condition.
struct SystemState {
    double energy_arrival = 0.0;
    std::vector<double> channel;
};

/// Physical energy backlog with capacity cap. Level stays in [0, capacity].
struct BatteryState {
    double level = 0.0;
    double capacity = 0.0;
};

/// Problem-level constants derived from (n, p_max, e_max, channel support).
struct ProblemParams {
    int n = 0;
    double p_max = 0.0;
    double e_max = 0.0;
    std::vector<double> d_per_coord;  // per-coordinate subgradient bounds D_i
    double d_norm = 0.0;              // D = sqrt(sum D_i^2)
    double d_max = 0.0;               // max_i D_i
    double b_const = 0.0;             // B = max(e_max, p_max)^2
};

/// Controller parameters. q_lower and recommended_capacity are always
/// computed from ProblemParams, never user-supplied.
struct AlgorithmParams {
    double v_param = 0.0;
    double q_lower = 0.0;              // ceil(V) * (d_max + 2 p_max + e_max)
    double recommended_capacity = 0.0; // q_lower + p_max
    int delay_t0 = 1;
};

/// Per-slot trace row.
struct SlotRecord {
    std::int64_t run_id = 0;
    std::int64_t slot = 0;
    PowerVector power;
    double utility = 0.0;
    double virtual_queue = 0.0;
    double battery = 0.0;
    SystemState state;
    bool scaled_down = false;
};

double sum(const PowerVector& p);
double l2_norm(const std::vector<double>& x);
double linf_distance(const std::vector<double>& a, const std::vector<double>& b);

ProblemParams derive_params(int n, double p_max, double e_max,
                            const std::vector<double>& channel_support_max);

AlgorithmParams derive_algorithm_params(const ProblemParams& pp, double v, int t0);

}  // namespace ehpc
