#include <benchmark/benchmark.h>

#include "qcgeom/catalog.hpp"
#include "qcgeom/leaf_flow.hpp"
#include "qcgeom/qc.hpp"

namespace {

using namespace qcgeom;

CompiledMetric warped(int n) { return CompiledMetric(builtin("warped", {{"n", std::to_string(n)}})); }

Point sample(int n) {
  Point p(n, 1.1);
  p[0] = 0.7;
  return p;
}

void BM_MetricJet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CompiledMetric cm = warped(n);
  const Point p = sample(n);
  for (auto _ : state) benchmark::DoNotOptimize(metric_jet(cm, p));
}
BENCHMARK(BM_MetricJet)->DenseRange(3, 6);

void BM_CurvaturePack(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CompiledMetric cm = warped(n);
  const MetricJet jet = metric_jet(cm, sample(n));
  for (auto _ : state) benchmark::DoNotOptimize(curvature_pack(jet));
}
BENCHMARK(BM_CurvaturePack)->DenseRange(3, 6);

void BM_Classify(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CompiledMetric cm = warped(n);
  const Point p = sample(n);
  for (auto _ : state) benchmark::DoNotOptimize(classify_at(cm, p));
}
BENCHMARK(BM_Classify)->DenseRange(3, 6);

void BM_AnalyzePoint(benchmark::State& state) {
  const CompiledMetric cm = warped(3);
  const Point p = sample(3);
  for (auto _ : state) benchmark::DoNotOptimize(analyze_point(cm, p));
}
BENCHMARK(BM_AnalyzePoint);

void BM_LeafTrace(benchmark::State& state) {
  const CompiledMetric cm = warped(3);
  const Point p = sample(3);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_leaf(cm, p, static_cast<int>(state.range(0)), 0.01, 1));
}
BENCHMARK(BM_LeafTrace)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
