#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ehpc/environment.hpp"

using namespace ehpc;

TEST_CASE("rng streams are deterministic and independent") {
    Rng a(123, 4, 0), b(123, 4, 0), c(123, 4, 1), d(123, 5, 0);
    bool same = true, differs_stream = false, differs_run = false;
    for (int i = 0; i < 1000; ++i) {
        double va = a.uniform01();
        same = same && va == b.uniform01();
        differs_stream = differs_stream || va != c.uniform01();
        differs_run = differs_run || va != d.uniform01();
        CHECK(va >= 0.0);
        CHECK(va < 1.0);
    }
    CHECK(same);
    CHECK(differs_stream);
    CHECK(differs_run);
}

TEST_CASE("uniform energy stays in range with the right mean") {
    UniformEnergy e(0.0, 3.0);
    CHECK(e.mean() == 1.5);
    CHECK(e.max() == 3.0);
    Rng rng(1, 0, 0);
    double acc = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double v = e.sample(rng);
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 3.0);
        acc += v;
    }
    CHECK(acc / n == doctest::Approx(1.5).epsilon(0.01));
}

TEST_CASE("table energy matches its analytic mean and frequencies") {
    TableEnergy e({0.0, 1.0, 3.0}, {0.2, 0.5, 0.3});
    CHECK(e.mean() == doctest::Approx(1.4).epsilon(1e-12));
    CHECK(e.max() == 3.0);
    Rng rng(2, 0, 0);
    int count3 = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        if (e.sample(rng) == 3.0) ++count3;
    CHECK(static_cast<double>(count3) / n == doctest::Approx(0.3).epsilon(0.03));
    CHECK_THROWS_AS(TableEnergy({1.0}, {0.5}), std::invalid_argument);
}

TEST_CASE("truncated rayleigh passes a KS test against its conditional cdf") {
    for (double sigma : {0.5, 1.0}) {
        IidTruncatedRayleigh ch({sigma}, 0.0, 4.0);
        Rng rng(7, 0, 1);
        const int n = 100000;
        std::vector<double> xs(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = ch.sample(rng)[0];
            REQUIRE(xs[i] >= 0.0);
            REQUIRE(xs[i] <= 4.0);
        }
        std::sort(xs.begin(), xs.end());
        double ks = 0.0;
        for (int i = 0; i < n; ++i) {
            double f = IidTruncatedRayleigh::truncated_cdf(xs[i], sigma, 0.0, 4.0);
            ks = std::max(ks, std::fabs(f - static_cast<double>(i + 1) / n));
            ks = std::max(ks, std::fabs(f - static_cast<double>(i) / n));
        }
        INFO("sigma ", sigma, " ks ", ks);
        CHECK(ks < 1.63 / std::sqrt(static_cast<double>(n)));  // ~1% level
    }
}

TEST_CASE("clip mode piles mass at the upper edge") {
    IidTruncatedRayleigh ch({3.0}, 0.0, 4.0, /*clip=*/true);
    Rng rng(8, 0, 1);
    int at_edge = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i)
        if (ch.sample(rng)[0] == 4.0) ++at_edge;
    // P(R >= 4) = exp(-16 / (2 * 9)) ~= 0.411 for a Rayleigh(3).
    CHECK(static_cast<double>(at_edge) / n == doctest::Approx(std::exp(-8.0 / 9.0)).epsilon(0.05));
}

TEST_CASE("markov channel stationary distribution and empirical frequencies") {
    MarkovChannel ch({{0.45, 1.2}, {1.0, 0.2}},
                     {{1.0 / 15.0, 14.0 / 15.0}, {2.0 / 3.0, 1.0 / 3.0}});
    CHECK(ch.stationary()[0] == doctest::Approx(5.0 / 12.0).epsilon(1e-9));
    CHECK(ch.stationary()[1] == doctest::Approx(7.0 / 12.0).epsilon(1e-9));
    CHECK(ch.support_max() == std::vector<double>{1.0, 1.2});

    Rng rng(9, 0, 1);
    int in_state0 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
        if (ch.sample(rng)[0] == 0.45) ++in_state0;
    CHECK(static_cast<double>(in_state0) / n == doctest::Approx(5.0 / 12.0).epsilon(0.02));
}

TEST_CASE("markov channel validates its transition matrix and initial state") {
    CHECK_THROWS_AS(MarkovChannel({{1.0}, {2.0}}, {{0.5, 0.4}, {0.5, 0.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(MarkovChannel({{1.0}}, {{1.0}}, 3), std::invalid_argument);

    MarkovChannel pinned({{1.0}, {2.0}}, {{1.0, 0.0}, {0.0, 1.0}}, 1);
    Rng rng(10, 0, 1);
    for (int i = 0; i < 10; ++i) CHECK(pinned.sample(rng)[0] == 2.0);
}

TEST_CASE("battery step conserves and clamps") {
    BatteryState b{5.0, 10.0};
    auto b2 = battery_step(b, {1.0, 2.0}, 0.5);
    CHECK(b2.level == doctest::Approx(2.5).epsilon(1e-15));
    auto b3 = battery_step(b2, {0.0, 0.0}, 100.0);
    CHECK(b3.level == 10.0);  // capped at capacity
    CHECK_THROWS_AS(battery_step(b3, {6.0, 6.0}, 0.0), EnergyAvailabilityFault);
}
