#include <benchmark/benchmark.h>

#include "sparseseries/algebraic.hpp"
#include "sparseseries/arith_sieve.hpp"
#include "sparseseries/criterion.hpp"
#include "sparseseries/sequence.hpp"
#include "sparseseries/series_eval.hpp"

using namespace sparseseries;

namespace {

void BM_SieveSigma(benchmark::State& state) {
    const std::uint64_t X = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto t = ArithTable::sieve(ArithFunction::Sigma, X);
        benchmark::DoNotOptimize(t.values().data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(X));
}
BENCHMARK(BM_SieveSigma)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 22);

void BM_XiProfileCubes(benchmark::State& state) {
    auto f2 = AlgebraicField::rational_base(2);
    const std::uint64_t H = 100000;
    auto cubes = CoefficientSequence::indicator(f2, power_support(mpq_class(3), H), H,
                                                false);
    const std::uint64_t nmax = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto prof = xi_abs_profile(cubes, nmax, 128);
        benchmark::DoNotOptimize(prof.data());
    }
}
BENCHMARK(BM_XiProfileCubes)->Arg(100)->Arg(1000)->Arg(10000);

void BM_WitnessSearchCubes(benchmark::State& state) {
    auto f2 = AlgebraicField::rational_base(2);
    const std::uint64_t H = 1000;
    auto cubes = CoefficientSequence::indicator(f2, power_support(mpq_class(3), H), H,
                                                false);
    auto zero = CoefficientSequence::zero(f2, H);
    const unsigned long umax = static_cast<unsigned long>(state.range(0));
    for (auto _ : state) {
        auto w = witness_search(cubes, zero, umax, 500, 128);
        benchmark::DoNotOptimize(w.data());
    }
}
BENCHMARK(BM_WitnessSearchCubes)->Arg(100)->Arg(1000);

void BM_ClassifySalem(benchmark::State& state) {
    auto poly = parse_monic_polynomial("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1");
    AlgebraicField::Options opt;
    opt.assume_irreducible = true;
    for (auto _ : state) {
        auto f = AlgebraicField::build(poly, opt);
        benchmark::DoNotOptimize(f->classification().kind);
    }
}
BENCHMARK(BM_ClassifySalem);

void BM_HouseQuadratic(benchmark::State& state) {
    auto f = AlgebraicField::build(parse_monic_polynomial("x^2-2x-1"));
    FieldElement x = f->from_coords({mpz_class(12345), mpz_class(-678)});
    for (auto _ : state) {
        Interval h = f->house(x, static_cast<long>(state.range(0)));
        benchmark::DoNotOptimize(h.lo());
    }
}
BENCHMARK(BM_HouseQuadratic)->Arg(64)->Arg(256)->Arg(1024);

void BM_DigitStreamCubes(benchmark::State& state) {
    const std::uint64_t P = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto ds = digit_stream_monomial(FiberWeight{}, 3, 2, P);
        benchmark::DoNotOptimize(ds.digits.data());
    }
}
BENCHMARK(BM_DigitStreamCubes)->Arg(10000)->Arg(100000)->Arg(1000000);

}  // namespace

BENCHMARK_MAIN();
