// Micro-benchmarks for the hot paths: limit-weight computation, the
// simplex-constrained least-squares kernel, whole-network joint design, and
// the learning simulation loop.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>

#include "support/reference_data.hpp"
#include "weaknet/joint_design.hpp"
#include "weaknet/limits.hpp"
#include "weaknet/qp.hpp"
#include "weaknet/simulation.hpp"

namespace {

using weaknet::Index;
using weaknet::Matrix;
using weaknet::Vector;

// Random receiving-block pair: t_rr columns sum to 0.9, t_sr picks up the
// remaining 0.1, so I - T_RR is invertible and the stacked columns are
// stochastic.
std::pair<Matrix, Matrix> random_blocks(Index n_receiving, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  const Index n_sending = 4;
  Matrix t_rr(n_receiving, n_receiving);
  Matrix t_sr(n_sending, n_receiving);
  for (Index k = 0; k < n_receiving; ++k) {
    for (Index i = 0; i < n_receiving; ++i) t_rr(i, k) = unit(rng);
    for (Index i = 0; i < n_sending; ++i) t_sr(i, k) = unit(rng);
    t_rr.col(k) *= 0.9 / t_rr.col(k).sum();
    t_sr.col(k) *= 0.1 / t_sr.col(k).sum();
  }
  return {t_sr, t_rr};
}

void bm_limit_weights(benchmark::State& state) {
  const auto [t_sr, t_rr] = random_blocks(state.range(0), 42);
  for (auto _ : state) {
    Matrix w = weaknet::compute_w(t_sr, t_rr);
    benchmark::DoNotOptimize(w.data());
  }
}
BENCHMARK(bm_limit_weights)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Arg(128);

void bm_simplex_lsq(benchmark::State& state) {
  const Index n = state.range(0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  Matrix b(3, n);
  for (Index i = 0; i < b.size(); ++i) b(i / n, i % n) = unit(rng);
  Vector point = Vector::Constant(n, 1.0 / static_cast<double>(n));
  Vector q = b * point;
  const Vector lb = Vector::Constant(n, 0.01);
  for (auto _ : state) {
    auto result = weaknet::solve_simplex_lsq(b, q, lb);
    benchmark::DoNotOptimize(result.residual);
  }
}
BENCHMARK(bm_simplex_lsq)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void bm_joint_design(benchmark::State& state) {
  const auto topology = refdata::app1_topology();
  const Matrix q = refdata::q_appendix();
  for (auto _ : state) {
    auto result = weaknet::joint_design(topology, q);
    benchmark::DoNotOptimize(result.t_sr.data());
  }
}
BENCHMARK(bm_joint_design);

void bm_simulation(benchmark::State& state) {
  const Matrix a = refdata::sim23_a();
  const auto likelihoods = refdata::sim23_likelihoods();
  const auto topology = refdata::sim23_topology();
  weaknet::SimConfig config;
  config.iterations = state.range(0);
  config.seed = 42;
  config.trace_stride = 50;
  for (auto _ : state) {
    auto trace = weaknet::run_simulation(a, likelihoods, topology, config);
    benchmark::DoNotOptimize(trace.beliefs.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_simulation)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
