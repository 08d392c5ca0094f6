#include <benchmark/benchmark.h>

#include <tadm/hermitian_real.hpp>
#include <tadm/mpo.hpp>
#include <tadm/solver.hpp>

namespace {

using namespace tadm;

void BM_SolveSweepL6(benchmark::State &state) {
    const long d = state.range(0);
    SpinChainModel model = SpinChainModel::non_integrable(6);
    Mpo rho = initial_mpo(InitialState::PsiUp, model);
    Mpo hs = shift_traceless_mpo(hamiltonian_mpo(model), rho);
    SuperMpo c = commutator_mpo(hs);
    SolverConfig cfg;
    cfg.max_bond = d;
    cfg.max_sweeps = 2;
    cfg.stop_rel_q = 0.0;
    for (auto _ : state) {
        SolveResult r = solve(rho, c, cfg);
        benchmark::DoNotOptimize(r.report.final_q);
    }
}
BENCHMARK(BM_SolveSweepL6)->RangeMultiplier(2)->Range(8, 32)->Unit(benchmark::kMillisecond);

void BM_SolveSweepL6Real(benchmark::State &state) {
    const long d = state.range(0);
    SpinChainModel model = SpinChainModel::non_integrable(6);
    Mpo rho = initial_mpo(InitialState::PsiUp, model);
    Mpo hs = shift_traceless_mpo(hamiltonian_mpo(model), rho);
    SuperMpo c = commutator_mpo(hs);
    SolverConfig cfg;
    cfg.max_bond = d;
    cfg.max_sweeps = 2;
    cfg.stop_rel_q = 0.0;
    for (auto _ : state) {
        SolveResult r = solve_real(rho, c, cfg);
        benchmark::DoNotOptimize(r.report.final_q);
    }
}
BENCHMARK(BM_SolveSweepL6Real)->RangeMultiplier(2)->Range(8, 32)->Unit(benchmark::kMillisecond);

void BM_SuperSquare(benchmark::State &state) {
    const int L = static_cast<int>(state.range(0));
    SuperMpo c = commutator_mpo(hamiltonian_mpo(SpinChainModel::non_integrable(L)));
    for (auto _ : state) {
        SuperSquareResult sq = super_square(c, 0, 1e-12);
        benchmark::DoNotOptimize(sq.c2.max_bond());
    }
}
BENCHMARK(BM_SuperSquare)->DenseRange(6, 12, 3)->Unit(benchmark::kMillisecond);

} // namespace
