#include <cmath>

#include "doctest.h"
#include "ehpc/controller.hpp"
#include "ehpc/grid_oracle.hpp"
#include "ehpc/selftest.hpp"
#include "ehpc/types.hpp"
#include "ehpc/utility.hpp"

using namespace ehpc;

namespace {
ProblemParams params() { return derive_params(2, 5.0, 3.0, {4.0, 4.0}); }
}  // namespace

TEST_CASE("drift controller hand trace over two slots") {
    LogUtility util;
    DriftPlusLearningController ctrl(params(), 10.0, util);
    BatteryState bat{685.0, 685.0};

    PowerVector p1 = ctrl.initial_power();
    CHECK(p1 == PowerVector{0.0, 0.0});

    // Slot 1: e=1, s=(2,1). Queue: min(0 + 1 - 0, 0) = 0.
    // Next power: proj(0 + s/V + 0) = (0.2, 0.1).
    PowerVector p2 = ctrl.end_of_slot({{1.0, {2.0, 1.0}}, p1, p1}, bat);
    CHECK(ctrl.virtual_queue() == 0.0);
    CHECK(p2[0] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(p2[1] == doctest::Approx(0.1).epsilon(1e-15));

    // Slot 2: e=0, s=(1,1). Queue: min(0 + 0 - 0.3, 0) = -0.3.
    // Next power: p2 + grad/V + Q/V^2 with grad = (1/1.2, 1/1.1).
    PowerVector p3 = ctrl.end_of_slot({{0.0, {1.0, 1.0}}, p2, p2}, bat);
    CHECK(ctrl.virtual_queue() == doctest::Approx(-0.3).epsilon(1e-15));
    CHECK(p3[0] == doctest::Approx(0.2 + 1.0 / 12.0 - 0.003).epsilon(1e-14));
    CHECK(p3[1] == doctest::Approx(0.1 + 1.0 / 11.0 - 0.003).epsilon(1e-14));
}

TEST_CASE("queue feed selects issued or applied power") {
    LogUtility util;
    Observation obs{{0.0, {1.0, 1.0}}, {2.0, 2.0} /*issued*/, {1.0, 1.0} /*applied*/};
    BatteryState bat{10.0, 20.0};

    DriftPlusLearningController issued(params(), 10.0, util, QueueFeed::Issued);
    issued.end_of_slot(obs, bat);
    CHECK(issued.virtual_queue() == doctest::Approx(-4.0).epsilon(1e-15));

    DriftPlusLearningController applied(params(), 10.0, util, QueueFeed::Applied);
    applied.end_of_slot(obs, bat);
    CHECK(applied.virtual_queue() == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("queue never becomes positive") {
    LogUtility util;
    DriftPlusLearningController ctrl(params(), 10.0, util);
    BatteryState bat{685.0, 685.0};
    PowerVector zero{0.0, 0.0};
    for (int i = 0; i < 5; ++i) {
        ctrl.end_of_slot({{3.0, {1.0, 1.0}}, zero, zero}, bat);
        CHECK(ctrl.virtual_queue() == 0.0);
    }
}

TEST_CASE("water filling splits budget by channel quality") {
    // Channels (2, 1), budget 1: both active, water level 0.8.
    auto p = water_filling({2.0, 1.0}, 1.0);
    CHECK(p[0] == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-9));

    // A weak channel gets nothing when the budget is small.
    auto q = water_filling({4.0, 0.1}, 0.5);
    CHECK(q[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(q[1] == 0.0);

    CHECK(water_filling({2.0, 1.0}, 0.0) == PowerVector{0.0, 0.0});
    CHECK(water_filling({0.0, 0.0}, 1.0) == PowerVector{0.0, 0.0});
}

TEST_CASE("water filling matches the dense grid maximizer") {
    LogUtility util;
    for (auto channel : {std::vector<double>{2.0, 1.0}, {0.45, 1.2}, {3.7, 3.5}}) {
        for (double cap : {0.4, 1.0}) {
            SystemState st{0.0, channel};
            auto wf = water_filling(channel, cap);
            auto grid = grid_argmax([&](const PowerVector& p) { return util.value(p, st); },
                                    2, cap, 1e-3);
            INFO("channel (", channel[0], ",", channel[1], ") cap ", cap);
            CHECK(linf_distance(wf, grid) <= 2e-3);
        }
    }
}

TEST_CASE("greedy baseline water-fills the outdated channel") {
    GreedyBaseline ctrl(params());
    CHECK(ctrl.initial_power() == PowerVector{0.0, 0.0});
    Observation obs{{0.0, {2.0, 1.0}}, {0.0, 0.0}, {0.0, 0.0}};
    auto p = ctrl.end_of_slot(obs, {1.0, 10.0});
    CHECK(p[0] == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(ctrl.end_of_slot(obs, {0.0, 10.0}) == PowerVector{0.0, 0.0});
}

TEST_CASE("gradient baseline projects onto the battery-limited simplex") {
    LogUtility util;
    GradientBaseline ctrl(params(), 0.5, util);
    Observation obs{{0.0, {2.0, 2.0}}, {1.0, 1.0}, {1.0, 1.0}};
    // Step target (1 + 0.5 * 2/3) twice = 4/3 each, sum 8/3 > battery 1.
    auto p = ctrl.end_of_slot(obs, {1.0, 10.0});
    CHECK(sum(p) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-9));
    // An empty battery forces zero power.
    CHECK(ctrl.end_of_slot(obs, {0.0, 10.0}) == PowerVector{0.0, 0.0});
}

TEST_CASE("scale-down rule") {
    auto ok = enforce_availability({1.0, 2.0}, {5.0, 10.0});
    CHECK_FALSE(ok.scaled);
    CHECK(ok.power == PowerVector{1.0, 2.0});

    auto scaled = enforce_availability({2.0, 2.0}, {1.0, 10.0});
    CHECK(scaled.scaled);
    CHECK(sum(scaled.power) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(scaled.power[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("controller property suite passes") {
    auto results = controller_selftest();
    for (const auto& c : results) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.passed);
    }
}
