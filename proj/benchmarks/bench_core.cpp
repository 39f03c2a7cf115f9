#include <benchmark/benchmark.h>

#include "ompsd/linalg.hpp"
#include "ompsd/model.hpp"
#include "ompsd/omp.hpp"
#include "ompsd/sphere.hpp"

using namespace ompsd;

namespace {

void BM_BuildMeasurementMatrix(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(build_measurement_matrix(L, L / 2, rng));
}
BENCHMARK(BM_BuildMeasurementMatrix)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_OmpLeastSquares(benchmark::State& state) {
  const Instance inst = draw_instance(ProblemSize{}, 18.0, 3, Alphabet::binary());
  const auto E = static_cast<std::size_t>(state.range(0));
  OmpOptions opts;
  opts.incremental_qr = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(omp_run(inst.y, inst.a, E, LeastSquares{}, inst.sigma2, inst.s, opts));
}
BENCHMARK(BM_OmpLeastSquares)->Args({30, 1})->Args({30, 0})->Args({60, 1})->Unit(benchmark::kMicrosecond);

void BM_SdOmp(benchmark::State& state) {
  const Instance inst = draw_instance(ProblemSize{}, static_cast<double>(state.range(0)), 3, Alphabet::binary());
  for (auto _ : state)
    benchmark::DoNotOptimize(omp_run(inst.y, inst.a, 30, EmbeddedSphereDecoder{}, inst.sigma2, inst.s));
}
BENCHMARK(BM_SdOmp)->Arg(15)->Arg(18)->Arg(21)->Unit(benchmark::kMillisecond);

// Decode on the support of a 30-iteration least-squares OMP run.
void BM_SdDecode(benchmark::State& state) {
  const Instance inst = draw_instance(ProblemSize{}, static_cast<double>(state.range(0)), 4, Alphabet::binary());
  const OmpTrace t = omp_run(inst.y, inst.a, 30, LeastSquares{}, inst.sigma2, inst.s);
  const Matrix sub = select_columns(inst.a, decode_order(t.support));
  const auto family = static_cast<PriorFamily>(state.range(1));
  std::size_t nodes = 0;
  for (auto _ : state) {
    const DecodeResult r = sd_decode(inst.y, sub, inst.sigma2, PriorKind{family, inst.s});
    nodes = r.nodes_visited;
    benchmark::DoNotOptimize(r.metric);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_SdDecode)->Args({15, 0})->Args({18, 0})->Args({18, 1})->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
