#include <cmath>

#include "doctest.h"
#include "ehpc/selftest.hpp"
#include "ehpc/utility.hpp"

using namespace ehpc;

TEST_CASE("log utility value on hand-computed points") {
    LogUtility u;
    SystemState s{0.0, {2.0, 0.5}};
    CHECK(u.value({1.0, 2.0}, s) ==
          doctest::Approx(std::log(3.0) + std::log(2.0)).epsilon(1e-15));
    CHECK(u.value({0.0, 0.0}, s) == 0.0);
}

TEST_CASE("zero channel contributes nothing") {
    LogUtility u;
    SystemState s{0.0, {0.0, 1.0}};
    CHECK(u.value({5.0, 1.0}, s) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    auto g = u.gradient({5.0, 1.0}, s);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("gradient at zero power equals the channel vector") {
    LogUtility u;
    SystemState s{0.0, {4.0, 0.25}};
    auto g = u.gradient({0.0, 0.0}, s);
    CHECK(g[0] == 4.0);
    CHECK(g[1] == 0.25);
}

TEST_CASE("gradient_into matches gradient") {
    LogUtility u;
    SystemState s{0.0, {1.3, 2.7}};
    PowerVector p{0.4, 1.1};
    std::vector<double> g(2);
    u.gradient_into(p, s, g);
    CHECK(g == u.gradient(p, s));
}

TEST_CASE("utility property suite passes") {
    auto results = utility_selftest();
    for (const auto& c : results) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.passed);
    }
}
