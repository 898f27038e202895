#include <benchmark/benchmark.h>

#include <map>
#include <numbers>
#include <random>

#include "qftn/delta_mps.hpp"
#include "qftn/dmrg.hpp"
#include "qftn/hamiltonian.hpp"
#include "qftn/tdvp.hpp"
#include "qftn/vertex_elements.hpp"

using namespace qftn;

namespace {

ModelParams schwinger() {
  ModelParams p;
  p.ms.mass = 0.2;
  p.ms.theta = std::numbers::pi;
  return p;
}

ModeLayout layout(int k_max) { return ModeLayout(ModelKind::MassiveSchwinger, k_max, 4, 8, 100.0); }

// converged ground state, cached per k_max
const MpsState& ground(int k_max) {
  static std::map<int, MpsState> cache;
  auto it = cache.find(k_max);
  if (it != cache.end()) return it->second;
  const auto lay = layout(k_max);
  const auto p = schwinger();
  auto h = assemble_hamiltonian(lay, p);
  std::mt19937_64 rng(1);
  DmrgSettings s;
  s.compute_variance = false;
  return cache[k_max] = ground_state(h, initial_state(h, lay, p, 0, rng), s).state;
}

}  // namespace

static void BM_VertexElement(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) benchmark::DoNotOptimize(g_element(a, b, 1.3));
  state.SetItemsProcessed(state.iterations() * (n + 1) * (n + 1));
}
BENCHMARK(BM_VertexElement)->Arg(4)->Arg(12);

static void BM_DeltaMps(benchmark::State& state) {
  ModeLayout lay(ModelKind::SineGordon, static_cast<int>(state.range(0)), 8, 8, 15.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_delta_mps(lay));
}
BENCHMARK(BM_DeltaMps)->DenseRange(2, 6, 2)->Unit(benchmark::kMicrosecond);

static void BM_AssembleHamiltonian(benchmark::State& state) {
  const auto lay = layout(static_cast<int>(state.range(0)));
  const auto p = schwinger();
  for (auto _ : state) benchmark::DoNotOptimize(assemble_hamiltonian(lay, p));
}
BENCHMARK(BM_AssembleHamiltonian)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

static void BM_ApplyMpo(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto h = assemble_hamiltonian(layout(k), schwinger());
  const auto& psi = ground(k);
  for (auto _ : state) benchmark::DoNotOptimize(apply_mpo(h, psi, {1e-8, 4 * psi.max_bond_dim()}));
  state.counters["chi"] = psi.max_bond_dim();
}
BENCHMARK(BM_ApplyMpo)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_DmrgSweep(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto h = assemble_hamiltonian(layout(k), schwinger());
  const auto& psi = ground(k);
  DmrgSettings s;
  s.compute_variance = false;
  s.min_sweeps = s.max_sweeps = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ground_state(h, psi, s));
  state.counters["chi"] = psi.max_bond_dim();
}
BENCHMARK(BM_DmrgSweep)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_TdvpStep(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto lay = layout(k);
  ModelParams post = schwinger();
  post.ms.mass = 0.5;
  const auto h = assemble_hamiltonian(lay, post);
  const auto& psi = ground(k);
  TdvpSettings s;
  for (auto _ : state) benchmark::DoNotOptimize(tdvp_step(h, krylov_expand(h, psi, s), s));
}
BENCHMARK(BM_TdvpStep)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
