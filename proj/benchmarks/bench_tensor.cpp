#include <benchmark/benchmark.h>

#include <tadm/chain.hpp>
#include <tadm/tensor.hpp>

#include <random>

namespace {

using namespace tadm;

Tensor random_tensor(const Shape &shape, uint64_t seed, bool real_only = false) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Tensor t(shape);
    for (long i = 0; i < t.size(); ++i)
        t.flat(i) = real_only ? cplx(dist(rng), 0.0) : cplx(dist(rng), dist(rng));
    return t;
}

// environment-style contraction: block [D, w, D] x site [D, 4, D]
void BM_EnvContract(benchmark::State &state) {
    const long d = state.range(0);
    Tensor block = random_tensor({d, 19, d}, 1);
    Tensor site = random_tensor({d, 4, d}, 2);
    for (auto _ : state) {
        Tensor out = contract(block, site, {{2, 0}});
        benchmark::DoNotOptimize(out.data().data());
    }
    state.SetComplexityN(d);
}
BENCHMARK(BM_EnvContract)->RangeMultiplier(2)->Range(8, 128)->Complexity();

// the same contraction on real-valued data hits the real GEMM path
void BM_EnvContractReal(benchmark::State &state) {
    const long d = state.range(0);
    Tensor block = random_tensor({d, 19, d}, 1, true);
    Tensor site = random_tensor({d, 4, d}, 2, true);
    for (auto _ : state) {
        Tensor out = contract(block, site, {{2, 0}});
        benchmark::DoNotOptimize(out.data().data());
    }
    state.SetComplexityN(d);
}
BENCHMARK(BM_EnvContractReal)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_SvdSplit(benchmark::State &state) {
    const long d = state.range(0);
    Tensor t = random_tensor({d, 4, d}, 3);
    for (auto _ : state) {
        SvdResult svd = svd_split(t, {0, 1});
        benchmark::DoNotOptimize(svd.s.data());
    }
}
BENCHMARK(BM_SvdSplit)->RangeMultiplier(2)->Range(8, 64);

void BM_ChainCompress(benchmark::State &state) {
    const long d = state.range(0);
    chain::Sites s;
    long bl = 1;
    for (int j = 0; j < 8; ++j) {
        long br = (j == 7) ? 1 : d;
        s.push_back(random_tensor({bl, 4, br}, 10 + static_cast<uint64_t>(j)));
        bl = br;
    }
    for (auto _ : state) {
        chain::Sites copy = s;
        chain::compress(copy, d / 2, 0.0);
        benchmark::DoNotOptimize(copy.data());
    }
}
BENCHMARK(BM_ChainCompress)->RangeMultiplier(2)->Range(8, 64);

} // namespace
