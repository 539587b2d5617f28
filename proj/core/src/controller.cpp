#include "ehpc/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ehpc/projection.hpp"

namespace ehpc {

DriftPlusLearningController::DriftPlusLearningController(ProblemParams pp, double v,
                                                         const Utility& util,
                                                         QueueFeed feed)
    : pp_(std::move(pp)), v_(v), util_(util), feed_(feed) {
    if (!(v > 0.0)) throw std::invalid_argument("DriftPlusLearningController: V must be > 0");
}

PowerVector DriftPlusLearningController::initial_power() const {
    return PowerVector(pp_.n, 0.0);
}

PowerVector DriftPlusLearningController::end_of_slot(const Observation& obs,
                                                     const BatteryState&) {
    const PowerVector& feed = (feed_ == QueueFeed::Applied) ? obs.applied : obs.issued;
    q_ = std::min(q_ + obs.state.energy_arrival - sum(feed), 0.0);

    std::vector<double> grad = util_.gradient(obs.issued, obs.state);
    std::vector<double> shift(grad.size());
    bool all_nonpositive = true;
    for (std::size_t i = 0; i < shift.size(); ++i) {
        shift[i] = grad[i] / v_ + q_ / (v_ * v_);
        if (shift[i] > 0.0) all_nonpositive = false;
    }
    if (all_nonpositive) return project_nonpositive_shift(obs.issued, shift);

    std::vector<double> target(shift.size());
    for (std::size_t i = 0; i < target.size(); ++i) target[i] = obs.issued[i] + shift[i];
    return project_capped_simplex(target, pp_.p_max);
}

GradientBaseline::GradientBaseline(ProblemParams pp, double gamma, const Utility& util)
    : pp_(std::move(pp)), gamma_(gamma), util_(util) {
    if (!(gamma > 0.0)) throw std::invalid_argument("GradientBaseline: gamma must be > 0");
}

PowerVector GradientBaseline::initial_power() const {
    return PowerVector(pp_.n, 0.0);
}

PowerVector GradientBaseline::end_of_slot(const Observation& obs,
                                          const BatteryState& battery) {
    double cap = std::min(pp_.p_max, battery.level);
    if (cap <= 0.0) return PowerVector(pp_.n, 0.0);
    std::vector<double> grad = util_.gradient(obs.issued, obs.state);
    std::vector<double> target(grad.size());
    for (std::size_t i = 0; i < target.size(); ++i)
        target[i] = obs.issued[i] + gamma_ * grad[i];
    return project_capped_simplex(target, cap);
}

GreedyBaseline::GreedyBaseline(ProblemParams pp) : pp_(std::move(pp)) {}

PowerVector GreedyBaseline::initial_power() const {
    return PowerVector(pp_.n, 0.0);
}

PowerVector GreedyBaseline::end_of_slot(const Observation& obs,
                                        const BatteryState& battery) {
    return water_filling(obs.state.channel, std::min(pp_.p_max, battery.level));
}

ScaledPower enforce_availability(const PowerVector& proposed, const BatteryState& battery) {
    double s = sum(proposed);
    if (s <= battery.level || s <= 0.0) return {proposed, false};
    ScaledPower out{proposed, true};
    double factor = battery.level / s;
    for (double& v : out.power) v *= factor;
    return out;
}

PowerVector water_filling(const std::vector<double>& channel, double cap) {
    PowerVector p(channel.size(), 0.0);
    double smax = 0.0;
    for (double s : channel) smax = std::max(smax, s);
    if (cap <= 0.0 || smax <= 0.0) return p;

    // Allocation p_i = max(1/lambda - 1/s_i, 0) is decreasing in lambda;
    // bisect so the total hits the cap (the cap is always active since the
    // log utility is strictly increasing on live subbands).
    auto total = [&](double lambda) {
        double t = 0.0;
        for (double s : channel)
            if (s > 0.0) t += std::max(1.0 / lambda - 1.0 / s, 0.0);
        return t;
    };
    double lo = 1.0 / (cap / static_cast<double>(channel.size()) + 1.0 / smax);
    while (total(lo) < cap) lo *= 0.5;
    double hi = smax;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (total(mid) > cap) lo = mid; else hi = mid;
        if (hi - lo < 1e-12 * hi) break;
    }
    double lambda = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < p.size(); ++i)
        if (channel[i] > 0.0) p[i] = std::max(1.0 / lambda - 1.0 / channel[i], 0.0);
    return p;
}

}  // namespace ehpc
