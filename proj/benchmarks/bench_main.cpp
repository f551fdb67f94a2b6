#include <benchmark/benchmark.h>

#include "pakmarket/cfg.hpp"
#include "pakmarket/lp.hpp"
#include "pakmarket/welfare.hpp"

namespace {

using namespace pakmarket;

MarketInstance running_example() {
    MarketInstance inst;
    inst.supply.units = {2, 2};
    inst.variety_names = {"A", "B"};
    IncrementalCostSchedule sched;
    sched.steps[Package(0b01)] = {1, 2};
    sched.steps[Package(0b10)] = {1, 2};
    sched.steps[Package(0b11)] = {-1, 0};
    inst.seller = IncrementalCfg{complete_graph(2), std::move(sched)};
    auto buyer = [](const char* name, long long a, long long b, long long ab) {
        BuyerValuation v;
        v.name = name;
        v.unit_agents.push_back(
            {{Package(0b01), a}, {Package(0b10), b}, {Package(0b11), ab}});
        return v;
    };
    inst.buyers = {buyer("1", 3, 5, 9), buyer("2", 1, 2, 9), buyer("3", 5, 3, 8),
                   buyer("4", 6, 2, 11)};
    inst.packages = all_packages(2);
    return inst;
}

void BM_characteristic_matrix(benchmark::State& state) {
    auto g = complete_graph(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(characteristic_matrix(g));
}
BENCHMARK(BM_characteristic_matrix)->Arg(2)->Arg(3)->Arg(4);

void BM_solve_welfare(benchmark::State& state) {
    auto inst = running_example();
    for (auto _ : state) benchmark::DoNotOptimize(solve_welfare(inst));
}
BENCHMARK(BM_solve_welfare);

void BM_enumerate_prices(benchmark::State& state) {
    auto inst = running_example();
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_equilibrium_prices(inst, 12));
}
BENCHMARK(BM_enumerate_prices);

} // namespace

BENCHMARK_MAIN();
