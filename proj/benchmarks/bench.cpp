#include "gwb/bimodule.hpp"
#include "gwb/correspondence.hpp"
#include "gwb/random_gen.hpp"

#include <benchmark/benchmark.h>

using namespace gwb;

static void BM_AlgebraClosurePair(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto g = std::make_shared<const FiniteGroupoid>(pair_groupoid(n));
    auto mg = counting_measure(g);
    for (auto _ : state) {
        auto s = analyze_convolution_algebra(mg);
        benchmark::DoNotOptimize(s.dimension);
    }
}
BENCHMARK(BM_AlgebraClosurePair)->Arg(2)->Arg(3)->Arg(4);

static void BM_Commutant(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto g = std::make_shared<const FiniteGroupoid>(pair_groupoid(n));
    auto mg = counting_measure(g);
    RegularRepresentation rep(mg);
    std::vector<MatrixC> gens;
    for (ArrowId x = 0; x < mg.g->num_arrows(); ++x)
        gens.push_back(rep.to_orthonormal(rep.piL_delta(x)));
    auto algebra = generate_algebra(gens, rep.dim());
    for (auto _ : state) {
        auto c = commutant(algebra, rep.dim());
        benchmark::DoNotOptimize(c.size());
    }
}
BENCHMARK(BM_Commutant)->Arg(2)->Arg(3);

static void BM_FusionIntertwiner(benchmark::State& state) {
    std::mt19937 rng(static_cast<unsigned>(state.range(0)));
    auto chain = random_functor_chain(rng, 8);
    for (auto _ : state) {
        auto cert = fusion_intertwiner(chain.phi, chain.psi, chain.mg, chain.mh,
                                       chain.mk);
        benchmark::DoNotOptimize(cert.rank);
    }
}
BENCHMARK(BM_FusionIntertwiner)->Arg(1)->Arg(2)->Arg(3);

static void BM_BimoduleIntertwiner(benchmark::State& state) {
    std::mt19937 rng(static_cast<unsigned>(state.range(0)));
    auto chain = random_bibundle_chain(rng, 6);
    for (auto _ : state) {
        auto cert = bimodule_intertwiner(chain.b1, chain.b2, chain.mg, chain.mh,
                                         chain.mk);
        benchmark::DoNotOptimize(cert.rank);
    }
}
BENCHMARK(BM_BimoduleIntertwiner)->Arg(1)->Arg(2);

static void BM_MoritaDecide(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto pg = std::make_shared<const FiniteGroupoid>(pair_groupoid(n));
    auto point = std::make_shared<const FiniteGroupoid>(unit_groupoid(1));
    for (auto _ : state) {
        auto v = morita_decide(pg, point);
        benchmark::DoNotOptimize(v.equivalent);
    }
}
BENCHMARK(BM_MoritaDecide)->Arg(2)->Arg(3)->Arg(4);

BENCHMARK_MAIN();
