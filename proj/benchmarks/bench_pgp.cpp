#include <benchmark/benchmark.h>

#include <random>

#include "pgp/kmeans.hpp"
#include "pgp/pgp.hpp"

namespace {

pgp::Matrix random_matrix(Eigen::Index rows, Eigen::Index cols,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  pgp::Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

pgp::KernelParams default_params(int d) {
  return {0.0, pgp::Vector::Zero(d), std::log(0.1)};
}

void BM_KernelMatrix(benchmark::State& state) {
  const auto n = state.range(0);
  const int d = 8;
  const pgp::Matrix A = random_matrix(n, d, 1);
  const pgp::Matrix B = random_matrix(n, d, 2);
  const auto params = default_params(d);
  for (auto _ : state)
    benchmark::DoNotOptimize(pgp::kernel_matrix(A, B, params));
}
BENCHMARK(BM_KernelMatrix)->Arg(256)->Arg(1024);

void BM_Distill(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int batch = static_cast<int>(state.range(1));
  const int d = 8;
  const auto params = default_params(d);
  const pgp::PgpState s0 = pgp::init(random_matrix(m, d, 3), params);
  pgp::MiniBatch mb{random_matrix(batch, d, 4),
                    random_matrix(batch, 1, 5).col(0)};
  for (auto _ : state) benchmark::DoNotOptimize(pgp::distill(s0, mb));
}
BENCHMARK(BM_Distill)->Args({50, 32})->Args({500, 1000});

void BM_Predict(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int d = 8;
  const auto params = default_params(d);
  const pgp::PgpState s0 = pgp::init(random_matrix(m, d, 6), params);
  const pgp::Matrix Xq = random_matrix(2048, d, 7);
  for (auto _ : state) benchmark::DoNotOptimize(pgp::predict(s0, Xq));
}
BENCHMARK(BM_Predict)->Arg(50)->Arg(500);

void BM_KMeans(benchmark::State& state) {
  const pgp::Matrix X = random_matrix(20000, 8, 8);
  pgp::KMeansConfig cfg;
  cfg.k = static_cast<int>(state.range(0));
  cfg.max_iters = 10;
  for (auto _ : state) benchmark::DoNotOptimize(pgp::kmeans(X, cfg));
}
BENCHMARK(BM_KMeans)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
