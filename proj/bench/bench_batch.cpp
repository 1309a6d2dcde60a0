// Parallel vs serial batch execution of independent scenario runs.

#include <benchmark/benchmark.h>

#include <vector>

#include "fwsim/config.hpp"
#include "fwsim/scenario.hpp"

namespace {

using namespace fwsim;

struct Jobs {
    std::vector<ScenarioConfig> configs;
    std::vector<RunJob> jobs;

    explicit Jobs(int n) {
        const std::filesystem::path data = FWSIM_DATA_DIR;
        configs.reserve(n);
        for (int i = 0; i < n; ++i) {
            ScenarioConfig cfg = load_config(data / "scenarios" / "rectangle.ini");
            cfg.duration = 60;
            cfg.gust.enabled = true;
            cfg.gust.seed = 100 + i;
            configs.push_back(cfg);
        }
        for (const auto& c : configs) {
            jobs.push_back({&c, ControllerMode::Aotc, nullptr});
            jobs.push_back({&c, ControllerMode::Ratc, nullptr});
        }
    }
};

void BM_BatchSerial(benchmark::State& state) {
    const Jobs j(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_batch_serial(j.jobs));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(j.jobs.size()));
}

void BM_BatchParallel(benchmark::State& state) {
    const Jobs j(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_batch(j.jobs));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(j.jobs.size()));
}

}  // namespace

BENCHMARK(BM_BatchSerial)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BatchParallel)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
