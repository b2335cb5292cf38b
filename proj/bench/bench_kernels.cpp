// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <vector>

#include "foodqa/kernels.hpp"
#include "foodqa/rng.hpp"

namespace {

foodqa::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  foodqa::Matrix m(rows, cols);
  foodqa::Rng rng = foodqa::make_rng(seed, "bench");
  for (double& x : m.data()) x = foodqa::uniform_real(rng, -1.0, 1.0);
  return m;
}

template <bool Parallel>
void BM_ScoreCandidates(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto answers = random_matrix(n, 104, 1);
  const auto q = random_matrix(1, 104, 2);
  std::vector<double> out(n);
  for (auto _ : state) {
    if constexpr (Parallel) foodqa::kernels::omp::score_candidates(q.row(0), answers, out);
    else foodqa::kernels::serial::score_candidates(q.row(0), answers, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

template <bool Parallel>
void BM_KnnAllPairs(benchmark::State& state) {
  const auto x = random_matrix(static_cast<std::size_t>(state.range(0)), 64, 3);
  for (auto _ : state) {
    auto g = Parallel ? foodqa::kernels::omp::knn_all_pairs(x, 10)
                      : foodqa::kernels::serial::knn_all_pairs(x, 10);
    benchmark::DoNotOptimize(g.data());
  }
}

}  // namespace

BENCHMARK(BM_ScoreCandidates<false>)->Name("score_candidates/serial")->Arg(64)->Arg(4096)->Arg(65536);
BENCHMARK(BM_ScoreCandidates<true>)->Name("score_candidates/omp")->Arg(64)->Arg(4096)->Arg(65536);
BENCHMARK(BM_KnnAllPairs<false>)->Name("knn_all_pairs/serial")->Arg(200)->Arg(1000);
BENCHMARK(BM_KnnAllPairs<true>)->Name("knn_all_pairs/omp")->Arg(200)->Arg(1000);

BENCHMARK_MAIN();
