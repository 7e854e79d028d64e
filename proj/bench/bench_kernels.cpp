// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "kgw/grid.hpp"
#include "kgw/kernels.hpp"

namespace {

struct Fixture {
  kgw::GridSpec grid;
  std::vector<double> u1, u2, out;
  std::vector<kgw::kernels::cplx> z1, z2, zout;

  explicit Fixture(std::size_t cells) : grid(kgw::build_grid(kgw::GridKind::radial, 3, 16.0, cells)) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    u1.resize(cells);
    u2.resize(cells);
    out.resize(cells);
    z1.resize(cells);
    z2.resize(cells);
    zout.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) {
      u1[i] = d(rng);
      u2[i] = d(rng);
      z1[i] = {d(rng), d(rng)};
      z2[i] = {d(rng), d(rng)};
    }
  }
};

const kgw::kernels::Coupling kCoupling{1.0, 1.5, 0.01, 4.0};

template <bool Parallel>
void BM_Laplacian(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel)
      kgw::kernels::laplacian(f.z1, f.grid.faces, f.grid.weights, f.zout);
    else
      kgw::kernels::serial::laplacian(f.z1, f.grid.faces, f.grid.weights, f.zout);
    benchmark::DoNotOptimize(f.zout.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_CouplingGradient(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  std::vector<kgw::kernels::cplx> g1(f.z1.size()), g2(f.z1.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      kgw::kernels::coupling_gradient(kCoupling, f.z1, f.z2, g1, g2);
    else
      kgw::kernels::serial::coupling_gradient(kCoupling, f.z1, f.z2, g1, g2);
    benchmark::DoNotOptimize(g1.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_CouplingIntegral(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    double v = Parallel ? kgw::kernels::coupling_integral(kCoupling, f.u1, f.u2, f.grid.weights)
                        : kgw::kernels::serial::coupling_integral(kCoupling, f.u1, f.u2, f.grid.weights);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_FaceEnergy(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    double v = Parallel ? kgw::kernels::face_energy(f.z1, f.grid.faces)
                        : kgw::kernels::serial::face_energy(f.z1, f.grid.faces);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

#define KGW_SIZES RangeMultiplier(8)->Range(512, 1 << 18)

BENCHMARK(BM_Laplacian<false>)->KGW_SIZES;
BENCHMARK(BM_Laplacian<true>)->KGW_SIZES;
BENCHMARK(BM_CouplingGradient<false>)->KGW_SIZES;
BENCHMARK(BM_CouplingGradient<true>)->KGW_SIZES;
BENCHMARK(BM_CouplingIntegral<false>)->KGW_SIZES;
BENCHMARK(BM_CouplingIntegral<true>)->KGW_SIZES;
BENCHMARK(BM_FaceEnergy<false>)->KGW_SIZES;
BENCHMARK(BM_FaceEnergy<true>)->KGW_SIZES;

BENCHMARK_MAIN();
