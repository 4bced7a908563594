#include <benchmark/benchmark.h>

#include <random>

#include "isoproxim/frame.hpp"
#include "isoproxim/isometry.hpp"
#include "isoproxim/oracle.hpp"
#include "isoproxim/svd.hpp"

using namespace isoproxim;

namespace {

Matrix random_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix out(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = Complex{normal(rng), normal(rng)};
    return out;
}

} // namespace

static void BM_Svd(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix f = random_matrix(n, n, 42 + n);
    for (auto _ : state) {
        auto fac = svd(f);
        benchmark::DoNotOptimize(fac.sigma.data());
    }
}
BENCHMARK(BM_Svd)->Arg(3)->Arg(6)->Arg(12);

static void BM_SingularValues(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix f = random_matrix(n, n, 7 + n);
    for (auto _ : state) {
        auto s = singular_values(f);
        benchmark::DoNotOptimize(s.data());
    }
}
BENCHMARK(BM_SingularValues)->Arg(3)->Arg(6)->Arg(12);

static void BM_NearestRankK(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix f = random_matrix(n, n, 11 + n);
    const Gauge gauge = Gauge::frobenius();
    for (auto _ : state) {
        auto res = nearest_rank_k(f, n / 2 + 1, gauge);
        benchmark::DoNotOptimize(res.distance);
    }
}
BENCHMARK(BM_NearestRankK)->Arg(3)->Arg(6)->Arg(12);

static void BM_NearestGlobal(benchmark::State& state) {
    const Matrix f = random_matrix(6, 6, 17);
    const Gauge gauge = Gauge::frobenius();
    for (auto _ : state) {
        auto res = nearest_global(f, gauge);
        benchmark::DoNotOptimize(res.distance);
    }
}
BENCHMARK(BM_NearestGlobal);

static void BM_SymmetricApproxFixedExcess(benchmark::State& state) {
    const Frame frame = Frame::from_synthesis(random_matrix(4, 8, 23));
    for (auto _ : state) {
        auto res = symmetric_approx_fixed_excess(frame, 3);
        benchmark::DoNotOptimize(res.k);
    }
}
BENCHMARK(BM_SymmetricApproxFixedExcess);

static void BM_SignSupportMinimizers(benchmark::State& state) {
    const auto q = static_cast<std::size_t>(state.range(0));
    std::vector<double> s(q);
    for (std::size_t i = 0; i < q; ++i) s[i] = static_cast<double>(q - i);
    s[q / 2] = s[q / 2 - 1]; // one tie to exercise the collection pass
    for (auto _ : state) {
        auto mins = oracle::sign_support_minimizers(s, q / 2);
        benchmark::DoNotOptimize(mins.data());
    }
}
BENCHMARK(BM_SignSupportMinimizers)->Arg(8)->Arg(12);

static void BM_ExhaustiveNearest(benchmark::State& state) {
    const Matrix f = random_matrix(2, 2, 29);
    const Gauge gauge = Gauge::frobenius();
    for (auto _ : state) {
        auto res = oracle::exhaustive_nearest(f, 1, gauge, 8);
        benchmark::DoNotOptimize(res.distance);
    }
}
BENCHMARK(BM_ExhaustiveNearest);

BENCHMARK_MAIN();
