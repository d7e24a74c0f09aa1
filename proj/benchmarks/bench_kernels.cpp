// Microbenchmarks for the hot kernels at desk scale (N = 64).

#include <benchmark/benchmark.h>

#include <random>

#include "inr_stego/fixtures.hpp"
#include "inr_stego/inr.hpp"
#include "inr_stego/metrics.hpp"
#include "inr_stego/numeric.hpp"
#include "inr_stego/stego.hpp"

using namespace inr_stego;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  return uniform_fill(rng, rows, cols, -1.0f, 1.0f);
}

void bm_matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(4096, n, 1), b = random_matrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
  state.SetItemsProcessed(state.iterations() * 4096 * n * n);
}
BENCHMARK(bm_matmul)->Arg(32)->Arg(64);

void bm_matmul_tn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(4096, n, 1), b = random_matrix(4096, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(matmul_tn(a, b));
  state.SetItemsProcessed(state.iterations() * 4096 * n * n);
}
BENCHMARK(bm_matmul_tn)->Arg(32)->Arg(64);

void bm_matmul_nt(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(4096, n, 1), b = random_matrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(matmul_nt(a, b));
  state.SetItemsProcessed(state.iterations() * 4096 * n * n);
}
BENCHMARK(bm_matmul_nt)->Arg(32)->Arg(64);

void bm_forward_backward(benchmark::State& state) {
  const SecretSignal video = make_moving_shapes_video(4, 32, 32);
  const SirenNetwork net = init_network(make_network_spec(3, 3, 64, 7));
  const CoordinateBatch grid = make_grid(video.dims);
  const SignalBatch targets{3, video.samples};
  for (auto _ : state) benchmark::DoNotOptimize(forward_backward(net, grid, targets));
}
BENCHMARK(bm_forward_backward)->Unit(benchmark::kMillisecond);

void bm_quantize(benchmark::State& state) {
  const Matrix w = random_matrix(64, 64, 3);
  const QuantizationParams q{-0.5, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(quantize_dequantize(w, q));
}
BENCHMARK(bm_quantize);

void bm_ssim(benchmark::State& state) {
  const Image a = make_landscape_cover(64);
  Image b = a;
  std::mt19937_64 gen(4);
  for (std::uint8_t& p : b.pixels) p = static_cast<std::uint8_t>(p ^ (gen() & 7));
  for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(bm_ssim);

}  // namespace

BENCHMARK_MAIN();
