#include "rsda/classifiers.hpp"
#include "rsda/estimation.hpp"
#include "rsda/harness.hpp"
#include "rsda/models.hpp"
#include "rsda/road.hpp"

#include <benchmark/benchmark.h>

namespace {

rsda::LabeledDataset toy_data(Eigen::Index p, Eigen::Index n) {
  return rsda::sample(rsda::build_toy_model(3, p, 0.1), n, n, 42);
}

void BM_SymEig(benchmark::State& state) {
  const auto p = static_cast<Eigen::Index>(state.range(0));
  const auto model = rsda::build_structured_model(3, p, 0.1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsda::sym_eig_desc(model.sigma()));
  }
}
BENCHMARK(BM_SymEig)->Arg(50)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_RoadFit(benchmark::State& state) {
  const auto data = toy_data(state.range(0), 20);
  const auto m = rsda::estimate_moments(data);
  const rsda::RoadProblem problem(m.sigma, m.delta);
  const double lambda = 0.01 * m.delta.cwiseAbs().maxCoeff();
  for (auto _ : state) {
    benchmark::DoNotOptimize(problem.fit(lambda));
  }
}
BENCHMARK(BM_RoadFit)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_RotationFull(benchmark::State& state) {
  const auto data = toy_data(state.range(0), 20);
  const auto m = rsda::estimate_moments(data);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsda::rotation_full(m, 0.5));
  }
}
BENCHMARK(BM_RotationFull)->Arg(50)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_RotationEconomy(benchmark::State& state) {
  const auto data = toy_data(state.range(0), 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsda::rotation_economy(data, 0.5));
  }
}
BENCHMARK(BM_RotationEconomy)->Arg(50)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_RsRoadTrain(benchmark::State& state) {
  const auto data = toy_data(state.range(0), 20);
  rsda::SolverConfig cfg;
  cfg.method = rsda::Method::road;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsda::rotate_and_solve(data, 0.5, cfg, true));
  }
}
BENCHMARK(BM_RsRoadTrain)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
