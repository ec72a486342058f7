#include "torsionkit/fixtures.hpp"
#include "torsionkit/pipeline.hpp"
#include "torsionkit/sampler.hpp"

#include <benchmark/benchmark.h>

using namespace torsionkit;

namespace {

// Uncached context construction for Z^f + Z_4 + Z_2 at degree bound k.
void BM_TruncationContext(benchmark::State& state) {
    AbelianGroup H(static_cast<int>(state.range(0)), {2, 4});
    const int k = static_cast<int>(state.range(1));
    for (auto _ : state) {
        TruncationContext ctx(H, k, 0);
        benchmark::DoNotOptimize(ctx.dimension());
    }
}
BENCHMARK(BM_TruncationContext)->ArgsProduct({{1, 2, 3}, {2, 3, 4, 5}});

void BM_TruncatedProduct(benchmark::State& state) {
    AbelianGroup H(3, {3});
    auto ctx = build_truncation_context(H, static_cast<int>(state.range(0)));
    auto a = truncate(H.element({1, -2, 1}, {1}), ctx), b = truncate(H.element({0, 3, -1}, {2}), ctx);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_TruncatedProduct)->DenseRange(2, 6);

void BM_FormDeterminant(benchmark::State& state) {
    std::mt19937_64 rng(1);
    auto f = random_alternating_form(rng, static_cast<int>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(form_determinant(f));
}
BENCHMARK(BM_FormDeterminant)->DenseRange(2, 6);

void BM_MasseyDeterminant(benchmark::State& state) {
    std::mt19937_64 rng(2);
    auto f = random_massey_form(rng, 2, static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(massey_determinant(f));
}
BENCHMARK(BM_MasseyDeterminant)->DenseRange(2, 4);

void BM_IntegralCheck(benchmark::State& state) {
    std::mt19937_64 rng(3);
    auto P = NicePresentation::from_file(sample_integral_presentation(rng, static_cast<int>(state.range(0)), {2}));
    for (auto _ : state) benchmark::DoNotOptimize(check_integral_theorem(P));
}
BENCHMARK(BM_IntegralCheck)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_ModRCheck(benchmark::State& state) {
    std::mt19937_64 rng(4);
    const long long r = state.range(0);
    auto P = NicePresentation::from_file(sample_mod_r_presentation(rng, r, 2, 1, {}));
    CheckOptions opt;
    opt.r = r;
    for (auto _ : state) benchmark::DoNotOptimize(check_mod_r_theorem(P, opt));
}
BENCHMARK(BM_ModRCheck)->Arg(2)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_BorromeanMassey(benchmark::State& state) {
    auto P = parse_nice_presentation(borromean_fixture());
    for (auto _ : state) benchmark::DoNotOptimize(check_massey_theorem(P));
}
BENCHMARK(BM_BorromeanMassey)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
