#include <benchmark/benchmark.h>

#include "ehpc/controller.hpp"
#include "ehpc/environment.hpp"
#include "ehpc/oracle.hpp"
#include "ehpc/projection.hpp"
#include "ehpc/types.hpp"
#include "ehpc/utility.hpp"

namespace {

void BM_ProjectCappedSimplex(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ehpc::Rng rng(1, 0, 0);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = 4.0 * rng.uniform01() - 1.0;
    for (auto _ : state) {
        auto y = ehpc::project_capped_simplex(x, 1.0);
        benchmark::DoNotOptimize(y);
    }
}
BENCHMARK(BM_ProjectCappedSimplex)->Arg(2)->Arg(16)->Arg(128);

void BM_ControllerSlot(benchmark::State& state) {
    ehpc::LogUtility util;
    auto pp = ehpc::derive_params(2, 5.0, 3.0, {4.0, 4.0});
    auto ap = ehpc::derive_algorithm_params(pp, 40.0, 1);
    ehpc::DriftPlusLearningController ctrl(pp, 40.0, util);
    ehpc::UniformEnergy energy(0.0, 3.0);
    ehpc::IidTruncatedRayleigh channel({0.5, 1.0}, 0.0, 4.0);
    ehpc::Rng erng(1, 0, 0), crng(1, 0, 1);
    ehpc::BatteryState bat{ap.recommended_capacity, ap.recommended_capacity};
    ehpc::PowerVector p = ctrl.initial_power();
    for (auto _ : state) {
        auto sp = ehpc::enforce_availability(p, bat);
        auto st = ehpc::sample_state(energy, channel, erng, crng);
        bat = ehpc::battery_step(bat, sp.power, st.energy_arrival);
        p = ctrl.end_of_slot({st, p, sp.power}, bat);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_ControllerSlot);

void BM_OracleGradientPass(benchmark::State& state) {
    ehpc::LogUtility util;
    ehpc::IidTruncatedRayleigh channel({0.5, 1.0}, 0.0, 4.0);
    ehpc::Rng rng(1, 0, 1);
    std::vector<ehpc::SystemState> samples;
    const auto n = static_cast<std::size_t>(state.range(0));
    samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) samples.push_back({0.0, channel.sample(rng)});
    ehpc::PowerVector p{0.4, 1.1};
    std::vector<double> g(2);
    for (auto _ : state) {
        double acc = 0.0;
        for (const auto& s : samples) {
            util.gradient_into(p, s, g);
            acc += g[0] + g[1];
        }
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_OracleGradientPass)->Arg(10000)->Arg(100000);

void BM_WaterFilling(benchmark::State& state) {
    std::vector<double> channel{0.45, 1.2};
    for (auto _ : state) {
        auto p = ehpc::water_filling(channel, 3.0);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_WaterFilling);

}  // namespace

BENCHMARK_MAIN();
