#include <benchmark/benchmark.h>

#include <random>

#include "fnd/verify.hpp"

using namespace fnd;

namespace {

NovikovScalar random_scalar(const ConfigPtr& cfg, std::mt19937_64& rng, int terms) {
    NovikovScalar s = NovikovScalar::zero(cfg);
    std::uniform_int_distribution<long> exp(-4, 4);
    for (int i = 0; i < terms; ++i) {
        Gamma0Elem g = Gamma0Elem::identity(cfg->rank());
        for (long& e : g.exps) e = exp(rng);
        s = s + NovikovScalar::monomial(cfg, g, Fq(mpq_class(1 + (i % 5)), cfg->field()));
    }
    if (s.trivially_empty()) s = NovikovScalar::one(cfg);
    return s;
}

void BM_ScalarMul(benchmark::State& state) {
    ConfigPtr cfg = profile_config(true, FieldSpec{});
    std::mt19937_64 rng(1);
    NovikovScalar a = random_scalar(cfg, rng, static_cast<int>(state.range(0)));
    NovikovScalar b = random_scalar(cfg, rng, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_ScalarMul)->Arg(4)->Arg(16)->Arg(64);

void BM_ScalarInverse(benchmark::State& state) {
    ConfigPtr cfg = profile_config(true, FieldSpec{});
    std::mt19937_64 rng(2);
    NovikovScalar a = random_scalar(cfg, rng, 4);
    ExactValue window = ExactValue::rational(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(a.inverse(window));
}
BENCHMARK(BM_ScalarInverse)->Arg(8)->Arg(16)->Arg(32);

void BM_WeightedReduce(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ConfigPtr cfg = profile_config(true, FieldSpec{});
    WeightedSpace ws{cfg, std::vector<ExactValue>(n, ExactValue()), ExactValue::rational(12),
                     ExactValue::rational(12)};
    std::mt19937_64 rng(3);
    std::vector<VecL> vecs;
    for (int i = 0; i < n; ++i) {
        VecL v = vec_zero(ws);
        for (auto& e : v) e = random_scalar(cfg, rng, 2);
        vecs.push_back(std::move(v));
    }
    for (auto _ : state) {
        WeightedReducer red(ws);
        for (const VecL& v : vecs) red.insert(v);
        benchmark::DoNotOptimize(red.size());
    }
}
BENCHMARK(BM_WeightedReduce)->Arg(4)->Arg(8)->Arg(16);

void BM_Barcode(benchmark::State& state) {
    FuzzCase fc = make_fuzz_case(42, state.range(0) != 0, FieldSpec{});
    for (auto _ : state) benchmark::DoNotOptimize(barcode_reduce(fc.scrambled));
}
BENCHMARK(BM_Barcode)->Arg(0)->Arg(1);

void BM_SpectralNumbers(benchmark::State& state) {
    FuzzCase fc = make_fuzz_case(7, state.range(0) != 0, FieldSpec{});
    for (auto _ : state) benchmark::DoNotOptimize(summarize_invariants(fc.scrambled));
}
BENCHMARK(BM_SpectralNumbers)->Arg(0)->Arg(1);

} // namespace

BENCHMARK_MAIN();
