#include "ehpc/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "ehpc/controller.hpp"
#include "ehpc/environment.hpp"
#include "ehpc/grid_oracle.hpp"
#include "ehpc/projection.hpp"
#include "ehpc/types.hpp"
#include "ehpc/utility.hpp"

namespace ehpc {

namespace {

std::string worst(double v) {
    std::ostringstream ss;
    ss << "worst " << v;
    return ss.str();
}

std::vector<double> random_point(Rng& rng, int n, double lo, double hi) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = lo + (hi - lo) * rng.uniform01();
    return x;
}

PowerVector random_feasible(Rng& rng, int n, double p_max) {
    // Rejection-free: draw in the box then project.
    return project_capped_simplex(random_point(rng, n, 0.0, p_max), p_max);
}

}  // namespace

std::vector<CheckResult> projection_selftest() {
    std::vector<CheckResult> out;
    const int kNs[] = {1, 2, 5, 10};

    {  // idempotence
        Rng rng(42, 0, 0);
        double w = 0.0;
        for (int trial = 0; trial < 10000; ++trial) {
            int n = kNs[trial % 4];
            double p_max = 0.5 + 4.5 * rng.uniform01();
            auto x = random_point(rng, n, -2.0 * p_max, 2.0 * p_max);
            auto y = project_capped_simplex(x, p_max);
            auto yy = project_capped_simplex(y, p_max);
            w = std::max(w, linf_distance(y, yy));
        }
        out.push_back({"projection idempotence (1e4 trials)", w <= 1e-12, worst(w)});
    }
    {  // non-expansiveness
        Rng rng(42, 0, 1);
        double w = 0.0;
        for (int trial = 0; trial < 10000; ++trial) {
            int n = kNs[trial % 4];
            double p_max = 0.5 + 4.5 * rng.uniform01();
            auto x = random_point(rng, n, -2.0 * p_max, 2.0 * p_max);
            auto y = random_point(rng, n, -2.0 * p_max, 2.0 * p_max);
            auto px = project_capped_simplex(x, p_max);
            auto py = project_capped_simplex(y, p_max);
            std::vector<double> dp(x.size()), dxy(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                dp[i] = px[i] - py[i];
                dxy[i] = x[i] - y[i];
            }
            w = std::max(w, l2_norm(dp) - l2_norm(dxy));
        }
        out.push_back({"projection non-expansiveness (1e4 trials)", w <= 1e-12, worst(w)});
    }
    {  // KKT residual
        Rng rng(42, 0, 2);
        double w = 0.0;
        for (int trial = 0; trial < 10000; ++trial) {
            int n = kNs[trial % 4];
            double p_max = 0.5 + 4.5 * rng.uniform01();
            auto x = random_point(rng, n, -2.0 * p_max, 2.0 * p_max);
            auto y = project_capped_simplex(x, p_max);
            w = std::max(w, projection_kkt_residual(x, y, p_max));
        }
        out.push_back({"projection KKT residual (1e4 trials)", w < 1e-9, worst(w)});
    }
    {  // nonpositive-shift closed form vs general projection
        Rng rng(42, 0, 3);
        double w = 0.0;
        for (int trial = 0; trial < 10000; ++trial) {
            int n = kNs[trial % 4];
            double p_max = 0.5 + 4.5 * rng.uniform01();
            auto p_prev = random_feasible(rng, n, p_max);
            std::vector<double> b(p_prev.size());
            for (double& v : b) v = -2.0 * rng.uniform01();
            auto fast = project_nonpositive_shift(p_prev, b);
            std::vector<double> target(p_prev.size());
            for (std::size_t i = 0; i < target.size(); ++i) target[i] = p_prev[i] + b[i];
            auto general = project_capped_simplex(target, p_max);
            w = std::max(w, linf_distance(fast, general));
        }
        out.push_back({"nonpositive-shift closed form equals general projection (1e4 trials)",
                       w == 0.0, worst(w)});
    }
    {  // grid-oracle agreement, n in {2,3}
        Rng rng(42, 0, 4);
        double w = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            bool three = trial % 10 == 9;  // n=3 grids are cubically more work
            int n = three ? 3 : 2;
            double p_max = three ? 0.3 + 0.3 * rng.uniform01() : 0.5 + 1.0 * rng.uniform01();
            auto x = random_point(rng, n, -0.5 * p_max, 1.5 * p_max);
            auto y = project_capped_simplex(x, p_max);
            auto g = qp_oracle(x, p_max, 1e-3);
            w = std::max(w, linf_distance(y, g));
        }
        out.push_back({"projection agrees with dense grid search (200 inputs, n in {2,3})",
                       w <= 2e-3, worst(w)});
    }
    return out;
}

std::vector<CheckResult> utility_selftest() {
    std::vector<CheckResult> out;
    LogUtility util;
    const double p_max = 5.0;
    const int n = 2;

    {  // central finite differences
        Rng rng(7, 0, 0);
        double w = 0.0;
        const double h = 1e-6;
        for (int trial = 0; trial < 1000; ++trial) {
            SystemState st{0.0, random_point(rng, n, 0.0, 4.0)};
            auto p = random_feasible(rng, n, p_max);
            for (double& v : p) v += 0.01;  // keep interior so p +- h stays valid
            auto g = util.gradient(p, st);
            for (int i = 0; i < n; ++i) {
                auto hi = p, lo = p;
                hi[static_cast<std::size_t>(i)] += h;
                lo[static_cast<std::size_t>(i)] -= h;
                double fd = (util.value(hi, st) - util.value(lo, st)) / (2.0 * h);
                double gi = g[static_cast<std::size_t>(i)];
                double rel = std::fabs(fd - gi) / std::max(std::fabs(gi), 1e-12);
                w = std::max(w, rel);
            }
        }
        out.push_back({"log-utility gradient matches finite differences (1e3 points)",
                       w <= 1e-5, worst(w)});
    }
    {  // midpoint concavity
        Rng rng(7, 0, 1);
        double w = 0.0;
        for (int trial = 0; trial < 10000; ++trial) {
            SystemState st{0.0, random_point(rng, n, 0.0, 4.0)};
            auto p = random_feasible(rng, n, p_max);
            auto q = random_feasible(rng, n, p_max);
            double a = rng.uniform01();
            PowerVector mid(p.size());
            for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = a * p[i] + (1.0 - a) * q[i];
            double gap = a * util.value(p, st) + (1.0 - a) * util.value(q, st) -
                         util.value(mid, st);
            w = std::max(w, gap);
        }
        out.push_back({"log-utility midpoint concavity (1e4 triples)", w <= 1e-9, worst(w)});
    }
    {  // D-Lipschitz
        Rng rng(7, 0, 2);
        auto pp = derive_params(n, p_max, 3.0, {4.0, 4.0});
        double w = 0.0;
        for (int trial = 0; trial < 10000; ++trial) {
            SystemState st{0.0, random_point(rng, n, 0.0, 4.0)};
            auto p = random_feasible(rng, n, p_max);
            auto q = random_feasible(rng, n, p_max);
            std::vector<double> d(p.size());
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = p[i] - q[i];
            double lhs = std::fabs(util.value(p, st) - util.value(q, st));
            w = std::max(w, lhs - pp.d_norm * l2_norm(d));
        }
        out.push_back({"log-utility D-Lipschitz bound (1e4 pairs)", w <= 1e-9, worst(w)});
    }
    {  // declared D_i bounds the gradient on the support
        Rng rng(7, 0, 3);
        double w = 0.0;
        for (int trial = 0; trial < 10000; ++trial) {
            SystemState st{0.0, random_point(rng, n, 0.0, 4.0)};
            auto p = random_feasible(rng, n, p_max);
            auto g = util.gradient(p, st);
            for (double gi : g) w = std::max(w, std::fabs(gi) - 4.0);
        }
        out.push_back({"gradient bounded by channel support (1e4 points)", w <= 0.0, worst(w)});
    }
    return out;
}

std::vector<CheckResult> controller_selftest() {
    std::vector<CheckResult> out;
    LogUtility util;
    auto pp = derive_params(2, 5.0, 3.0, {4.0, 4.0});

    for (double v : {5.0, 40.0}) {
        auto ap = derive_algorithm_params(pp, v, 1);
        DriftPlusLearningController ctrl(pp, v, util);
        UniformEnergy energy(0.0, 3.0);
        IidTruncatedRayleigh channel({0.5, 1.0}, 0.0, 4.0);
        Rng erng(99, static_cast<std::uint64_t>(v), 0);
        Rng crng(99, static_cast<std::uint64_t>(v), 1);
        BatteryState bat{ap.recommended_capacity, ap.recommended_capacity};

        double min_q = 0.0, max_q = -1.0;
        double identity_err = 0.0, cor1_excess = 0.0, step_excess = 0.0;
        bool ever_scaled = false;
        const double step_bound = pp.d_max / v + ap.q_lower / (v * v);
        PowerVector p = ctrl.initial_power();
        for (int t = 1; t <= 100000; ++t) {
            auto sp = enforce_availability(p, bat);
            ever_scaled = ever_scaled || sp.scaled;
            SystemState st = sample_state(energy, channel, erng, crng);
            bat = battery_step(bat, sp.power, st.energy_arrival);
            PowerVector next = ctrl.end_of_slot({st, p, sp.power}, bat);
            double q = ctrl.virtual_queue();
            min_q = std::min(min_q, q);
            max_q = std::max(max_q, q);
            identity_err = std::max(identity_err, std::fabs(bat.level - (q + bat.capacity)));
            if (q <= -v * (pp.d_max + pp.p_max))
                for (std::size_t i = 0; i < next.size(); ++i)
                    cor1_excess = std::max(
                        cor1_excess, next[i] - std::max(p[i] - pp.p_max / v, 0.0));
            step_excess = std::max(step_excess, linf_distance(next, p) - step_bound);
            p = std::move(next);
        }
        std::string tag = " (V=" + std::to_string(static_cast<int>(v)) + ", 1e5 slots)";
        out.push_back({"virtual queue stays in [-Q^l, 0]" + tag,
                       min_q >= -ap.q_lower && max_q <= 0.0, worst(min_q)});
        out.push_back({"battery equals shifted queue under auto sizing" + tag,
                       identity_err <= 1e-9 && !ever_scaled, worst(identity_err)});
        out.push_back({"deep-queue decrease rule" + tag, cor1_excess <= 1e-12,
                       worst(cor1_excess)});
        out.push_back({"per-slot step bound" + tag, step_excess <= 1e-9, worst(step_excess)});
    }
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& c) { return c.passed; });
}

}  // namespace ehpc
