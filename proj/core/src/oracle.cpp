#include "ehpc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ehpc/projection.hpp"

namespace ehpc {

namespace {

struct KahanSum {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

double avg_value(const PowerVector& p, const std::vector<SystemState>& samples,
                 const Utility& util) {
    KahanSum acc;
    for (const auto& s : samples) acc.add(util.value(p, s));
    return acc.sum / static_cast<double>(samples.size());
}

std::vector<double> avg_gradient(const PowerVector& p,
                                 const std::vector<SystemState>& samples,
                                 const Utility& util) {
    std::vector<KahanSum> acc(p.size());
    std::vector<double> g(p.size());
    for (const auto& s : samples) {
        util.gradient_into(p, s, g);
        for (std::size_t i = 0; i < g.size(); ++i) acc[i].add(g[i]);
    }
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = acc[i].sum / static_cast<double>(samples.size());
    return out;
}

OracleResult pga(const std::vector<SystemState>& samples, double cap,
                 const Utility& util, double curvature_bound, int iters, double tol) {
    if (samples.empty()) throw std::invalid_argument("oracle: no samples");
    if (!(cap > 0.0)) throw std::invalid_argument("oracle: feasible cap must be > 0");
    const std::size_t n = samples.front().channel.size();

    double step = 1.0 / std::max(curvature_bound, 1e-12);
    PowerVector p(n, 0.0);
    double fval = avg_value(p, samples, util);
    PowerVector checkpoint = p;  // last iterate whose value was verified
    double map_norm = 0.0;
    // Ascent is guaranteed at step 1/L when the curvature bound holds, so the
    // objective (the expensive pass) is only verified every few iterations; on
    // a decrease we halve the step and restart from the verified checkpoint.
    constexpr int kCheckEvery = 8;
    for (int it = 1; it <= iters; ++it) {
        auto grad = avg_gradient(p, samples, util);
        std::vector<double> target(n);
        for (std::size_t i = 0; i < n; ++i) target[i] = p[i] + step * grad[i];
        PowerVector next = project_capped_simplex(target, cap);

        std::vector<double> diff(n);
        for (std::size_t i = 0; i < n; ++i) diff[i] = (next[i] - p[i]) / step;
        map_norm = l2_norm(diff);

        bool converged = map_norm < tol;
        if (converged || it % kCheckEvery == 0) {
            double fnext = avg_value(next, samples, util);
            if (fnext < fval - 1e-13) {
                step *= 0.5;
                p = checkpoint;
                continue;
            }
            fval = fnext;
            checkpoint = next;
        }
        p = std::move(next);
        if (converged) {
            return {p, fval, map_norm, it};
        }
    }
    std::ostringstream msg;
    msg << "oracle: projected gradient ascent did not converge in " << iters
        << " iterations; gradient-mapping norm " << map_norm << ", value " << fval;
    throw std::runtime_error(msg.str());
}

}  // namespace

OracleResult solve_upper_bound(const OracleProblem& prob, int iters, double tol) {
    if (prob.utility == nullptr) throw std::invalid_argument("oracle: utility not set");
    double cap = std::min(prob.p_max, prob.mean_energy);
    return pga(prob.samples, cap, *prob.utility, prob.curvature_bound, iters, tol);
}

OracleResult best_fixed_hindsight(const std::vector<SystemState>& trace,
                                  double mean_energy, double p_max,
                                  const Utility& utility, double curvature_bound,
                                  int iters, double tol) {
    double cap = std::min(p_max, mean_energy);
    return pga(trace, cap, utility, curvature_bound, iters, tol);
}

double average_utility(const PowerVector& p, const std::vector<SystemState>& trace,
                       const Utility& utility) {
    return avg_value(p, trace, utility);
}

}  // namespace ehpc
