#include <benchmark/benchmark.h>

#include <cmath>

#include "atollpr/eigen_solvers.hpp"
#include "atollpr/retrieval.hpp"
#include "atollpr/transforms.hpp"

using namespace atollpr;

namespace {

Signal atom_pair(const TimeAxis& ax) {
  return Signal::sample(ax.n, ax.sample_rate, ax.t0, [](double t) {
    return window(t + 2.0) * std::exp(cd(0.0, 2.0 * M_PI * 1.5 * t)) + window(t - 2.0) * std::exp(cd(0.0, -2.0 * M_PI * t));
  });
}

Lattice square(double half, double h) { return make_lattice(-half, half, -half, half - h, h, h); }

void BM_gabor_forward(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const Lattice lat = full_band_lattice(square(6.0, h));
  const Signal f = atom_pair(default_time_axis(lat));
  for (auto _ : state) benchmark::DoNotOptimize(gabor_forward(f, lat));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lat.size()));
}
BENCHMARK(BM_gabor_forward)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_gabor_inverse(benchmark::State& state) {
  const Lattice lat = full_band_lattice(square(6.0, 0.25));
  const TFGrid F = gabor_forward(atom_pair(default_time_axis(lat)), lat);
  for (auto _ : state) benchmark::DoNotOptimize(gabor_inverse(F));
}
BENCHMARK(BM_gabor_inverse)->Unit(benchmark::kMillisecond);

// Neumann lambda_2 of a disc at `range` cells per radius.
void BM_neumann_lambda2(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Lattice lat = square(1.0 + 2.0 / n, 1.0 / n);
  const DomainMask disc = rasterize(Disc{cd{}, 1.0}, lat);
  for (auto _ : state) benchmark::DoNotOptimize(neumann_lambda2(disc));
}
BENCHMARK(BM_neumann_lambda2)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_retrieve(benchmark::State& state) {
  const Lattice lat = GaborSpec{-6.0, 6.0, -4.0, 3.75, 0.25, 0.25}.lattice();
  const TFGrid M = magnitude(gabor_forward(atom_pair(retrieval_time_axis(lat)), lat));
  const int iters = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(retrieve(M, iters, 1));
}
BENCHMARK(BM_retrieve)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
