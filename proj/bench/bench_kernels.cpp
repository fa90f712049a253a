// Serial reference vs OpenMP kernels on inputs sized like the larger CLI runs.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "gerbelab/kernels.hpp"
#include "gerbelab/nerve.hpp"

using namespace gerbelab;
using namespace gerbelab::kernels;

namespace {

Nerve cycle(int n) {
  std::vector<Simplex> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return build_nerve(n, edges);
}

const Nerve& big_nerve() {
  static const Nerve n = complexes::product(cycle(60), complexes::rp2_six());
  return n;
}

std::vector<MatrixC> random_blocks(std::size_t count, int size, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<MatrixC> out(count, MatrixC(size, size));
  for (auto& m : out)
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = {g(rng), g(rng)};
  return out;
}

template <bool Parallel>
void BM_Coboundary(benchmark::State& state) {
  const Nerve& n = big_nerve();
  const int k = static_cast<int>(state.range(0));
  std::vector<int> lead(n.count(k + 1), 1);
  std::vector<double> in(n.count(k), 1.5), out(n.count(k + 1));
  for (auto _ : state) {
    if constexpr (Parallel)
      coboundary_omp<double>(n, k, lead, in, out);
    else
      coboundary_serial<double>(n, k, lead, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n.count(k + 1)));
}

template <bool Parallel>
void BM_Toeplitz(benchmark::State& state) {
  const int size = 4, band = 8, k = static_cast<int>(state.range(0));
  auto coeffs = random_blocks(2 * band + 1, size, 1);
  MatrixC out;
  for (auto _ : state) {
    if constexpr (Parallel)
      toeplitz_assemble_omp(coeffs, band, k, out);
    else
      toeplitz_assemble_serial(coeffs, band, k, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_TraceOfProduct(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  auto ab = random_blocks(2, dim, 2);
  for (auto _ : state) {
    Complex t = Parallel ? trace_of_product_omp(ab[0], ab[1]) : trace_of_product_serial(ab[0], ab[1]);
    benchmark::DoNotOptimize(t);
  }
}

template <bool Parallel>
void BM_GridDerivative(benchmark::State& state) {
  const int nx = static_cast<int>(state.range(0)), ny = nx;
  const auto count = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  auto field = random_blocks(count, 2, 3);
  std::vector<unsigned char> valid(count, 1), ok(count);
  std::vector<MatrixC> out(count);
  for (auto _ : state) {
    if constexpr (Parallel)
      grid_derivative_omp(field, valid, nx, ny, 0, 0.01, out, ok);
    else
      grid_derivative_serial(field, valid, nx, ny, 0, 0.01, out, ok);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(count));
}

template <bool Parallel>
void BM_WeightedTrace(benchmark::State& state) {
  const int nx = static_cast<int>(state.range(0)), ny = nx;
  const auto count = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  auto field = random_blocks(count, 2, 4);
  std::vector<double> w(count, 0.25);
  for (auto _ : state) {
    Complex t = Parallel ? weighted_trace_sum_omp(field, w, nx, ny) : weighted_trace_sum_serial(field, w);
    benchmark::DoNotOptimize(t);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(count));
}

}  // namespace

BENCHMARK(BM_Coboundary<false>)->Name("coboundary/serial")->Arg(1)->Arg(2);
BENCHMARK(BM_Coboundary<true>)->Name("coboundary/omp")->Arg(1)->Arg(2);
BENCHMARK(BM_Toeplitz<false>)->Name("toeplitz/serial")->Arg(16)->Arg(64);
BENCHMARK(BM_Toeplitz<true>)->Name("toeplitz/omp")->Arg(16)->Arg(64);
BENCHMARK(BM_TraceOfProduct<false>)->Name("trace_of_product/serial")->Arg(128)->Arg(512);
BENCHMARK(BM_TraceOfProduct<true>)->Name("trace_of_product/omp")->Arg(128)->Arg(512);
BENCHMARK(BM_GridDerivative<false>)->Name("grid_derivative/serial")->Arg(201)->Arg(401);
BENCHMARK(BM_GridDerivative<true>)->Name("grid_derivative/omp")->Arg(201)->Arg(401);
BENCHMARK(BM_WeightedTrace<false>)->Name("weighted_trace/serial")->Arg(201)->Arg(401);
BENCHMARK(BM_WeightedTrace<true>)->Name("weighted_trace/omp")->Arg(201)->Arg(401);

BENCHMARK_MAIN();
