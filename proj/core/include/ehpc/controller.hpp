#pragma once

#include <memory>

#include "ehpc/types.hpp"
#include "ehpc/utility.hpp"

namespace ehpc {

/// A revealed slot: its state paired with the power vector the controller
/// issued for it and the power actually applied after any scale-down.
struct Observation {
    SystemState state;
    PowerVector issued;
    PowerVector applied;
};

/// Which power vector feeds the virtual-queue update when scale-down triggers.
enum class QueueFeed { Issued, Applied };

/// Shared step interface. The harness calls initial_power() for slot 1 and
/// end_of_slot() once per slot with the newest revealed observation (with
/// observation delay t0 the revealed slot lags by t0 - 1). The returned
/// vector is the issued power for the next slot.
class Controller {
public:
    virtual ~Controller() = default;
    virtual PowerVector initial_power() const = 0;
    virtual PowerVector end_of_slot(const Observation& obs, const BatteryState& battery) = 0;
    virtual double virtual_queue() const { return 0.0; }
};

/// Virtual-queue + online-gradient controller. The queue update is
/// Q <- min(Q + e - sum(p), 0) over the revealed slot, and the next power is
/// the projection of p + grad/V + (Q/V^2) * ones onto the capped simplex,
/// where p is the revealed slot's issued power.
class DriftPlusLearningController final : public Controller {
public:
    DriftPlusLearningController(ProblemParams pp, double v, const Utility& util,
                                QueueFeed feed = QueueFeed::Issued);
    PowerVector initial_power() const override;
    PowerVector end_of_slot(const Observation& obs, const BatteryState& battery) override;
    double virtual_queue() const override { return q_; }

private:
    ProblemParams pp_;
    double v_;
    const Utility& util_;
    QueueFeed feed_;
    double q_ = 0.0;
};

/// Online gradient step projected onto the battery-limited simplex
/// {p >= 0, sum(p) <= min(p_max, E[t])}.
class GradientBaseline final : public Controller {
public:
    GradientBaseline(ProblemParams pp, double gamma, const Utility& util);
    PowerVector initial_power() const override;
    PowerVector end_of_slot(const Observation& obs, const BatteryState& battery) override;

private:
    ProblemParams pp_;
    double gamma_;
    const Utility& util_;
};

/// Maximizes the outdated utility over the battery-limited simplex. For the
/// log utility this is water-filling.
class GreedyBaseline final : public Controller {
public:
    explicit GreedyBaseline(ProblemParams pp);
    PowerVector initial_power() const override;
    PowerVector end_of_slot(const Observation& obs, const BatteryState& battery) override;

private:
    ProblemParams pp_;
};

/// Scale-down rule: if sum(p) exceeds the battery level, shrink p
/// multiplicatively so the sum matches the level.
struct ScaledPower {
    PowerVector power;
    bool scaled = false;
};
ScaledPower enforce_availability(const PowerVector& proposed, const BatteryState& battery);

/// Maximizer of sum_i ln(1 + p_i s_i) over {p >= 0, sum(p) <= cap},
/// by bisection on the water level.
PowerVector water_filling(const std::vector<double>& channel, double cap);

}  // namespace ehpc
