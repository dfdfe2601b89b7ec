#include <benchmark/benchmark.h>

#include "slopedist/distance.hpp"
#include "slopedist/scenarios.hpp"
#include "slopedist/simulator.hpp"

using namespace slopedist;

namespace {

// Steady-state cost of one frame with a full pose history.
void BM_ProcessFrame(benchmark::State& state) {
  const auto scenario = closing_scenario(6.0);
  const auto sim = generate(scenario);
  const auto targets = static_cast<std::size_t>(state.range(0));

  Pipeline pipeline(scenario.calib, PipelineConfig{});
  std::size_t k = 0;
  for (; k < 60; ++k) pipeline.process_frame(sim.poses[k], {});

  std::vector<Detection> dets(targets, sim.detections.front());
  double t = sim.poses[k].timestamp;
  std::uint64_t frame = sim.poses[k].frame_index;
  const auto r = sim.poses[k].delta_r;
  for (auto _ : state) {
    t += 1.0 / 30.0;
    ++frame;
    for (auto& d : dets) d.frame_index = frame;
    benchmark::DoNotOptimize(pipeline.process_frame({frame, t, r}, dets));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ProcessFrame)->Arg(1)->Arg(8);

void BM_RunSequence(benchmark::State& state) {
  const auto scenario = slope_transition_scenario();
  const auto sim = generate(scenario);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_sequence(scenario.calib, PipelineConfig{}, sim.poses, sim.detections));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sim.poses.size()));
}
BENCHMARK(BM_RunSequence);

void BM_Generate(benchmark::State& state) {
  const auto scenario = closing_scenario(6.0, 2.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(generate(scenario));
}
BENCHMARK(BM_Generate);

}  // namespace

BENCHMARK_MAIN();
