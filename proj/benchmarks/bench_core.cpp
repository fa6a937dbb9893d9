#include <benchmark/benchmark.h>

#include <random>

#include "chemotax/functionals.hpp"
#include "chemotax/solver.hpp"

using namespace chemotax;

namespace {

Field random_positive(const DomainSpec& dom, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(0.5, 1.5);
    Field f(dom.nx, dom.ny);
    for (double& v : f.values()) v = d(rng);
    return f;
}

SimState bump_state(const DomainSpec& dom) {
    SimState s;
    s.u = build_gaussian_bump(dom, 2.0, 0.4, 0.5, 0.15, 1e-8);
    s.w = build_gaussian_bump(dom, 2.0, 0.6, 0.5, 0.15, 1e-8);
    HelmholtzSolver hh(dom);
    s.v = hh.solve(s.w, 1.0, 1.0);
    s.z = hh.solve(s.u, 1.0, 1.0);
    return s;
}

void BM_HelmholtzDCT(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const DomainSpec dom(1.0, 1.0, n, n);
    HelmholtzSolver hh(dom);
    Field rhs = random_positive(dom, 1);
    for (auto _ : state) benchmark::DoNotOptimize(hh.solve(rhs, 1.0, 1e-3));
    state.SetItemsProcessed(state.iterations() * dom.cells());
}
BENCHMARK(BM_HelmholtzDCT)->Arg(64)->Arg(128)->Arg(256);

void BM_HelmholtzPCG(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const DomainSpec dom(1.0, 1.0, n, n);
    HelmholtzSolver hh(dom, HelmholtzBackend::pcg);
    Field rhs = random_positive(dom, 1);
    for (auto _ : state) benchmark::DoNotOptimize(hh.solve(rhs, 1.0, 1e-3));
    state.SetItemsProcessed(state.iterations() * dom.cells());
}
BENCHMARK(BM_HelmholtzPCG)->Arg(64)->Arg(128);

void BM_Step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const DomainSpec dom(1.0, 1.0, n, n);
    ModelParams p;
    SolverConfig cfg;
    HelmholtzSolver hh(dom);
    SimState s = bump_state(dom);
    for (auto _ : state) {
        StepResult r = step(s, p, cfg, 1e-4, hh);
        benchmark::DoNotOptimize(r.next.u.data());
    }
    state.SetItemsProcessed(state.iterations() * dom.cells());
}
BENCHMARK(BM_Step)->Arg(64)->Arg(128);

void BM_LyapunovF(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const DomainSpec dom(1.0, 1.0, n, n);
    ModelParams p;
    p.chi3 = 0.2;
    SimState s = bump_state(dom);
    for (auto _ : state) benchmark::DoNotOptimize(lyapunov_F(s, p, dom));
}
BENCHMARK(BM_LyapunovF)->Arg(64)->Arg(128);

void BM_Diagnostics(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const DomainSpec dom(1.0, 1.0, n, n);
    ModelParams p;
    SimState s = bump_state(dom);
    DerivedParams dp =
        make_derived_params(s.u, s.w, dom, p, 1.0, ConstantProvenance::user_supplied,
                            0.5, ConstantProvenance::user_supplied);
    for (auto _ : state)
        benchmark::DoNotOptimize(collect_diagnostics(s, p, dp, dom, {}, 1e-3));
}
BENCHMARK(BM_Diagnostics)->Arg(64)->Arg(128);

} // namespace

BENCHMARK_MAIN();
