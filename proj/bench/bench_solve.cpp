// Serial reference vs OpenMP kernels: path tracking and cluster classification.
#include <benchmark/benchmark.h>

#include "chernum/corpus.hpp"
#include "chernum/tracker.hpp"
#include "chernum/zerodim.hpp"

using namespace chernum;

namespace {

struct Fixture {
  PolySystem gens;
  PolySystem square;
  AffinePatch patch;
};

// Random ideal elements of the given degrees, then the linear generators verbatim.
Fixture make(const std::string& name, const std::vector<int>& degrees, bool keep_linear = false) {
  Rng rng(17);
  Fixture f{corpus::build(name), PolySystem(), AffinePatch{}};
  f.square = PolySystem(f.gens.num_vars());
  for (int d : degrees) f.square.push_back(random_ideal_element(f.gens, d, rng));
  if (keep_linear)
    for (const auto& g : f.gens)
      if (g.degree() == 1) f.square.push_back(g);
  f.patch = AffinePatch::random(f.gens.num_vars(), rng);
  return f;
}

const Fixture& cubic() {
  static const Fixture f = make("twisted_cubic", {2, 2, 3});
  return f;
}

const Fixture& segre() {
  static const Fixture f = make("segre_section", {2, 2, 2, 2, 2, 3}, true);
  return f;
}

Execution mode(const benchmark::State& state) {
  return state.range(0) ? Execution::parallel : Execution::serial;
}

void track(benchmark::State& state, const Fixture& f) {
  for (auto _ : state) {
    Rng rng(5);
    auto sol = solve_square_system(f.square, {}, f.patch, rng, {mode(state)});
    benchmark::DoNotOptimize(sol.paths.data());
  }
  state.SetLabel(state.range(0) ? "openmp" : "serial");
}

void classify(benchmark::State& state, const Fixture& f) {
  Rng rng(5);
  const auto sol = solve_square_system(f.square, {}, f.patch, rng, {Execution::serial});
  const auto clusters = cluster_endpoints(sol.paths, 1e-6, &f.square);
  for (auto _ : state) {
    auto out = classify_clusters(clusters, f.square, f.gens, ClassifyConfig{}, {mode(state)});
    benchmark::DoNotOptimize(out.data());
  }
  state.SetLabel(state.range(0) ? "openmp" : "serial");
}

void BM_TrackCubic(benchmark::State& s) { track(s, cubic()); }
void BM_ClassifyCubic(benchmark::State& s) { classify(s, cubic()); }
void BM_TrackSegre(benchmark::State& s) { track(s, segre()); }
void BM_ClassifySegre(benchmark::State& s) { classify(s, segre()); }

}  // namespace

BENCHMARK(BM_TrackCubic)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassifyCubic)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrackSegre)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassifySegre)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
