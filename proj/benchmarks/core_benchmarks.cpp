#include <cmath>
#include <random>

#include <benchmark/benchmark.h>

#include "flatcone/graded.hpp"
#include "flatcone/model_p1.hpp"
#include "flatcone/nonarch.hpp"
#include "flatcone/norms.hpp"

namespace flatcone {
namespace {

HermitianNorm RandomHermitian(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double re = normal(rng);
      a(i, j) = Complex(re, normal(rng));
    }
  }
  Matrix gram = a * a.adjoint() + 0.2 * Matrix::Identity(dim, dim);
  return HermitianNorm::FromGram(0.5 * (gram + gram.adjoint()));
}

void BM_SuccessiveMinima(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const HermitianNorm n = RandomHermitian(rng, dim);
  const HermitianNorm other = RandomHermitian(rng, dim);
  for (auto _ : state) benchmark::DoNotOptimize(SuccessiveMinima(n, other));
}
BENCHMARK(BM_SuccessiveMinima)->Arg(8)->Arg(32)->Arg(101);

void BM_L2GramFubiniStudy(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const p1::TorusMetric metric = p1::TorusMetric::FubiniStudy();
  for (auto _ : state) benchmark::DoNotOptimize(p1::L2LogGramDiagonal(k, metric));
}
BENCHMARK(BM_L2GramFubiniStudy)->Arg(10)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_L2GramPLPotential(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const p1::TorusMetric metric = p1::TorusMetric::PLPotential({-2.0, 0.0, 1.5}, {0.0, 0.25, 0.75, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(p1::L2LogGramDiagonal(k, metric));
}
BENCHMARK(BM_L2GramPLPotential)->Arg(10)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_ModifyHermitian(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const HermitianNorm norm = p1::L2Gram(k, p1::TorusMetric::FubiniStudy());
  const NANorm filtration = p1::StandardFiltration(k, p1::FiltrationKind::kVanishingOrder);
  const PLFunction f = PLFunction::Make({0.0, 0.5, 1.0}, {1.0, 0.0, -0.5});
  for (auto _ : state) benchmark::DoNotOptimize(ModifyHermitianAt(norm, filtration, f, k));
}
BENCHMARK(BM_ModifyHermitian)->Arg(5)->Arg(20)->Arg(100);

void BM_ModifyHermitianGeneric(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  const HermitianNorm norm = RandomHermitian(rng, dim);
  std::vector<double> a;
  for (int i = 0; i < dim; ++i) a.push_back(i);
  const NANorm filtration = NANorm::FromBasis(Matrix::Identity(dim, dim) * 2.0 + 0.3 * RandomHermitian(rng, dim).gram(), a);
  const PLFunction f = PLFunction::Make({0.0, 0.5, 1.0}, {0.2, 0.0, -0.2});
  for (auto _ : state) benchmark::DoNotOptimize(ModifyHermitianAt(norm, filtration, f, dim - 1));
}
BENCHMARK(BM_ModifyHermitianGeneric)->Arg(8)->Arg(32);

}  // namespace
}  // namespace flatcone

// The packaged benchmark_main archive is LTO bytecode from another compiler
// release, so the shared library is linked and main is spelled out.
BENCHMARK_MAIN();
