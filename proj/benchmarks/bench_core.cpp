#include <benchmark/benchmark.h>

#include "treewalk/estimators.hpp"

using namespace treewalk;

namespace {

const PrecisionBudget kBudget{96, 16};

AffineElement pa(const char* text) { return parse_element(text, Realization::PAdic, 2, kBudget); }

StepLaw drift_up() {
  return StepLaw({{pa("affine(t = 0, a = 2)"), Rational(3, 4)}, {pa("affine(t = 1, a = 1/2)"), Rational(1, 4)}});
}

StepLaw drift_down() {
  return StepLaw({{pa("affine(t = 0, a = 2)"), Rational(1, 4)}, {pa("affine(t = 1, a = 1/2)"), Rational(3, 4)}});
}

void BM_PadicMul(benchmark::State& state) {
  const PAdic x = from_rational(7, 3, 2, kBudget), y = from_rational(-5, 9, 2, kBudget);
  for (auto _ : state) benchmark::DoNotOptimize(pmul(x, y));
}
BENCHMARK(BM_PadicMul);

void BM_PadicAdd(benchmark::State& state) {
  const PAdic x = from_rational(7, 3, 2, kBudget), y = from_rational(-5, 12, 2, kBudget);
  for (auto _ : state) benchmark::DoNotOptimize(padd(x, y));
}
BENCHMARK(BM_PadicAdd);

void BM_PadicInverse(benchmark::State& state) {
  const PAdic x = from_rational(7, 3, 2, kBudget);
  for (auto _ : state) benchmark::DoNotOptimize(pinv(x));
}
BENCHMARK(BM_PadicInverse);

void BM_Compose(benchmark::State& state) {
  const AffineElement g = pa("affine(t = 1/3, a = 2)"), h = pa("affine(t = 5, a = -1/2)");
  for (auto _ : state) benchmark::DoNotOptimize(compose(g, h));
}
BENCHMARK(BM_Compose);

void BM_LampCompose(benchmark::State& state) {
  const auto g = parse_element("lamp(shift = 1, lamps = [0:1, 2:1])", Realization::Lamplighter, 2);
  const auto h = parse_element("lamp(shift = -1, lamps = [-1:1, 5:1])", Realization::Lamplighter, 2);
  for (auto _ : state) benchmark::DoNotOptimize(compose(g, h));
}
BENCHMARK(BM_LampCompose);

void BM_RightWalkSteps(benchmark::State& state) {
  const StepLaw law = drift_up();
  std::uint64_t k = 0;
  for (auto _ : state) {
    RandomStream stream(1, k++);
    int last = 0;
    run_right(law, state.range(0), stream, [&](std::int64_t, const AffineElement&, int h) {
      last = h;
      return true;
    });
    benchmark::DoNotOptimize(last);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RightWalkSteps)->Arg(1000)->Arg(10000);

void BM_BoundarySample(benchmark::State& state) {
  const StepLaw law = drift_up();
  std::uint64_t k = 0;
  for (auto _ : state) {
    RandomStream stream(2, k++);
    benchmark::DoNotOptimize(sample_boundary_limit(law, 6, stream));
  }
}
BENCHMARK(BM_BoundarySample);

void BM_KernelTrajectories(benchmark::State& state) {
  const StepLaw law = drift_down();
  const Vertex o = origin(Realization::PAdic, 2, kBudget);
  const CylinderEvent f({o}, {o});
  const AffineElement g = power(pa("affine(t = 0, a = 2)"), 20);
  KernelOptions ko;
  ko.trajectories = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(potential_kernel(g, f, law, ko));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KernelTrajectories)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
