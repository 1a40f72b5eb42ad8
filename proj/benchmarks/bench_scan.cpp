#include <benchmark/benchmark.h>

#include <sstream>

#include "qcgeom_cli/cli.hpp"

namespace {

// Full CLI scan of the cap-tube-cap fixture; range(0) = points per axis.
void BM_ScanGraph(benchmark::State& state) {
  const std::string k = std::to_string(state.range(0));
  const std::vector<std::string> args{"scan",   "-m", QCGEOM_FIXTURES "/graph_cap_tube_cap.toml",
                                      "--grid", "0.1:5:" + k + ",0.5:2.5:" + k + ",0:6:" + k,
                                      "--threads", std::to_string(state.range(1))};
  for (auto _ : state) {
    std::ostringstream out, err;
    if (qcgeom::cli::run(args, out, err) != 0) state.SkipWithError("scan failed");
    benchmark::DoNotOptimize(out.str().size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) * state.range(0));
}
BENCHMARK(BM_ScanGraph)->Args({10, 1})->Args({10, 8})->Unit(benchmark::kMillisecond);

}  // namespace
