#include <string>

#include <benchmark/benchmark.h>

#include "dofib/arrangement.hpp"
#include "dofib/bimap.hpp"
#include "dofib/elliptic.hpp"
#include "dofib/io.hpp"
#include "dofib/k3fib.hpp"
#include "dofib/pipeline.hpp"

using namespace dofib;

namespace {

std::string data(const std::string& name) { return std::string(DOFIB_BENCH_DATA) + "/" + name; }

void BM_Analyze(benchmark::State& state) {
  const OcticArrangement arr = load_arrangement(data("famX.json"));
  for (auto _ : state) benchmark::DoNotOptimize(analyze(arr));
}
BENCHMARK(BM_Analyze)->Unit(benchmark::kMillisecond);

// Weierstrass model and invariants (including J) for the first point seed.
void BM_PointModel(benchmark::State& state) {
  const OcticArrangement arr = load_arrangement(data(state.range(0) == 0 ? "famX.json" : "famY.json"));
  const IncidenceReport rep = analyze(arr);
  const FibrationSeeds seeds = find_fibration_seeds(arr, rep);
  const IncidencePoint& p = rep.points.at(seeds.points.at(0));
  for (auto _ : state) {
    const Normalized n = normalize_point(arr, p);
    const WeierstrassModel m = p.planes.size() == 5 ? from_fivefold(n.arrangement) : from_fourfold(n.arrangement);
    benchmark::DoNotOptimize(m.invariants());
  }
}
BENCHMARK(BM_PointModel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Census(benchmark::State& state) {
  const OcticArrangement arr = load_arrangement(data("famX.json"));
  for (auto _ : state) benchmark::DoNotOptimize(fibration_census(arr, state.range(0) != 0));
}
BENCHMARK(BM_Census)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_VerifyMap(benchmark::State& state) {
  const OcticArrangement x = load_arrangement(data("famX.json")), y = load_arrangement(data("famY.json"));
  const DoubleCoverMap phi = load_map(data("maps/X_to_Y_corrected.json"));
  for (auto _ : state) benchmark::DoNotOptimize(verify(phi, x, y));
}
BENCHMARK(BM_VerifyMap)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  const OcticArrangement x = load_arrangement(data("famX.json")), y = load_arrangement(data("famY.json"));
  const BridgeConfig cfg = parse_bridge(read_file(data("bridge.json")));
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(x, y, cfg));
}
BENCHMARK(BM_Pipeline)->Unit(benchmark::kMillisecond);

}  // namespace
