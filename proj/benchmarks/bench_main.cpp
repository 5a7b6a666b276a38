#include <benchmark/benchmark.h>

#include "owrf/criteria.hpp"
#include "owrf/forest.hpp"
#include "owrf/grow.hpp"
#include "owrf/hat_matrix.hpp"
#include "owrf/optimal_weights.hpp"
#include "owrf/qp.hpp"
#include "owrf/synthetic.hpp"

namespace {

using namespace owrf;

struct Fixture {
  SyntheticData sim;
  Forest forest;
  CriterionContext ctx;
};

Fixture make_fixture(std::size_t n, std::size_t trees, TreeKind kind) {
  SyntheticData sim = generate({n, 8, MeanFunction::Friedman, NoiseKind::Homoscedastic, 1.0, 11});
  GrowConfig cfg;
  cfg.kind = kind;
  cfg.q = default_q(8);
  cfg.min_node = default_min_node(kind, n);
  Forest forest = grow_forest(sim.data, cfg, trees, 5);
  attach_hats(forest, sim.data);
  CriterionContext ctx = CriterionContext::from_hats(sim.data.y(), forest.hats);
  return {std::move(sim), std::move(forest), std::move(ctx)};
}

const Fixture& fixture(std::size_t n) {
  static const Fixture small = make_fixture(256, 100, TreeKind::Cart);
  static const Fixture large = make_fixture(515, 100, TreeKind::Cart);
  return n <= 256 ? small : large;
}

void BM_TwoSteps(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_two_steps(f.ctx));
}
BENCHMARK(BM_TwoSteps)->Arg(256)->Arg(515)->Unit(benchmark::kMillisecond);

void BM_OneStep(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_one_step(f.ctx));
}
BENCHMARK(BM_OneStep)->Arg(256)->Arg(515)->Unit(benchmark::kMillisecond);

void BM_QuadraticSimplex(benchmark::State& state) {
  const Fixture& f = fixture(515);
  const QuadraticForm q = c_zero_form(f.ctx, sigma2_equal_weights(f.ctx));
  for (auto _ : state) benchmark::DoNotOptimize(solve_quadratic_simplex(q.g, q.b));
}
BENCHMARK(BM_QuadraticSimplex)->Unit(benchmark::kMillisecond);

void BM_GrowTree(benchmark::State& state) {
  const auto kind = state.range(1) == 0 ? TreeKind::Cart : TreeKind::Sut;
  const auto n = static_cast<std::size_t>(state.range(0));
  const SyntheticData sim = generate({n, 8, MeanFunction::Linear, NoiseKind::Homoscedastic, 1.0, 3});
  GrowConfig cfg;
  cfg.kind = kind;
  cfg.q = 3;
  cfg.min_node = default_min_node(kind, n);
  if (kind == TreeKind::Sut) cfg.prob_seq = std::vector<double>(8, 1.0 / 8.0);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(grow_forest(sim.data, cfg, 1, ++seed));
}
BENCHMARK(BM_GrowTree)->Args({500, 0})->Args({500, 1})->Args({2000, 0})->Args({2000, 1});

void BM_HatMatrix(benchmark::State& state) {
  const Fixture& f = fixture(515);
  for (auto _ : state) benchmark::DoNotOptimize(hat_matrix(f.forest.trees.front(), f.sim.data));
}
BENCHMARK(BM_HatMatrix);

void BM_CriterionContext(benchmark::State& state) {
  const Fixture& f = fixture(515);
  for (auto _ : state) benchmark::DoNotOptimize(CriterionContext::from_hats(f.sim.data.y(), f.forest.hats));
}
BENCHMARK(BM_CriterionContext)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
