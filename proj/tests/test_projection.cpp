#include <cmath>
#include <limits>

#include "doctest.h"
#include "ehpc/grid_oracle.hpp"
#include "ehpc/projection.hpp"

using namespace ehpc;

TEST_CASE("interior points are fixed points") {
    PowerVector x{1.0, 2.0};
    auto y = project_capped_simplex(x, 5.0);
    CHECK(y == x);
}

TEST_CASE("negative coordinates are clipped") {
    auto y = project_capped_simplex({-1.0, 2.0}, 5.0);
    CHECK(y == PowerVector{0.0, 2.0});
}

TEST_CASE("over-cap symmetric point splits evenly") {
    auto y = project_capped_simplex({3.0, 3.0}, 5.0);
    CHECK(y[0] == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("threshold drops coordinates that would go negative") {
    // Projecting (4, 0.1) onto sum <= 1: the small coordinate leaves the
    // active set and the big one takes the whole budget.
    auto y = project_capped_simplex({4.0, 0.1}, 1.0);
    CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(y[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("hand example matches the dense grid oracle") {
    PowerVector x{1.7, -0.3, 0.9};
    auto y = project_capped_simplex(x, 1.0);
    auto g = qp_oracle(x, 1.0, 1e-3);
    CHECK(linf_distance(y, g) <= 2e-3);
    CHECK(projection_kkt_residual(x, y, 1.0) < 1e-9);
}

TEST_CASE("non-finite input is rejected") {
    double inf = std::numeric_limits<double>::infinity();
    double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(project_capped_simplex({inf, 0.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(project_capped_simplex({nan, 0.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(project_capped_simplex({1.0, 0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("nonpositive-shift closed form") {
    // Feasible p plus a nonpositive shift never re-enters the sum constraint,
    // so the projection is the coordinate-wise clip.
    auto y = project_nonpositive_shift({2.0, 1.0}, {-0.5, -1.5});
    CHECK(y == PowerVector{1.5, 0.0});
    CHECK_THROWS_AS(project_nonpositive_shift({2.0, 1.0}, {0.1, -1.0}),
                    std::invalid_argument);
}

TEST_CASE("kkt residual flags a wrong answer") {
    PowerVector x{3.0, 3.0};
    PowerVector wrong{3.0, 2.0};  // feasible but not the projection
    CHECK(projection_kkt_residual(x, wrong, 5.0) > 1e-3);
}
