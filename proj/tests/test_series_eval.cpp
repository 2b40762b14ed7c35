#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "oracles.hpp"
#include "sparseseries/errors.hpp"
#include "sparseseries/series_eval.hpp"

using namespace sparseseries;

namespace {
FieldPtr base2() { return AlgebraicField::rational_base(2); }
}

TEST_CASE("evaluate_series basics") {
    auto f2 = base2();
    auto zero = CoefficientSequence::zero(f2, 100);
    Interval z = evaluate_series(zero, zero, 64);
    CHECK(z.is_point());
    CHECK(z.contains(mpq_class(0)));

    // q=2 cubes: sum 2^-n^3 = 2^-1 + 2^-8 + 2^-27 + ... = 0.5039062574...
    auto cubes = CoefficientSequence::indicator(
        f2, power_support(mpq_class(3), 1000), 1000, false);
    auto zero1000 = CoefficientSequence::zero(f2, 1000);
    Interval v = evaluate_series(cubes, zero1000, 160);
    mpq_class partial(0);
    for (std::uint64_t k = 1; k <= 5; ++k) {
        mpq_class t(1);
        for (std::uint64_t e = 0; e < k * k * k; ++e) t /= 2u;
        partial += t;
    }
    // the remainder past the 5-term partial is below 2^-215
    mpq_class slack(1);
    for (int e = 0; e < 215; ++e) slack /= 2u;
    CHECK(v.intersects(Interval::of_endpoints(partial, partial + slack, 256)));
    CHECK(v.width_leq_pow2(160));
    CHECK(v.certainly_greater(mpq_class(50390, 100000)));
    CHECK(v.certainly_less(mpq_class(50391, 100000)));

    // q = 1+sqrt2, a = indicator of {1}: value 1/q = sqrt2 - 1
    auto fq = AlgebraicField::build(parse_monic_polynomial("x^2-2x-1"));
    auto one = CoefficientSequence::indicator(fq, SupportSet::explicit_set({1}, 10), 10,
                                              true);
    Interval w = evaluate_series(one, CoefficientSequence::zero(fq, 10), 120);
    CHECK(w.certainly_greater(mpq_class(41421, 100000)));
    CHECK(w.certainly_less(mpq_class(41422, 100000)));
}

TEST_CASE("evaluate_series contains the exact stored partial sum") {
    auto f2 = base2();
    std::vector<CoefficientSequence::Entry> entries;
    std::map<std::uint64_t, long> vals{{1, 3}, {4, -2}, {9, 5}};
    for (auto& [n, v] : vals) entries.emplace_back(n, FieldElement::from_integer(v, 1));
    auto seq = CoefficientSequence::from_entries(f2, 20, std::move(entries),
                                                 TailMajorant{5, 1, false, ""}, true);
    Interval v = evaluate_series(seq, CoefficientSequence::zero(f2, 20), 128);
    mpq_class exact(0);
    for (auto& [n, c] : vals) {
        mpq_class t(c);
        for (std::uint64_t e = 0; e < n; ++e) t /= 2u;
        exact += t;
    }
    CHECK(v.contains(exact));
}

TEST_CASE("digit stream of cubes at t=2") {
    auto ds = digit_stream_monomial(FiberWeight{}, 3, 2, 100);
    CHECK(ds.nonzero_positions == std::vector<std::uint64_t>{1, 8, 27, 64});
    CHECK(ds.carry_overflow == 0);
    CHECK(ds.reliable_limit == 100);
    for (std::uint64_t p : {1, 8, 27, 64}) CHECK(ds.digit(p) == 1);
    CHECK(ds.digit(2) == 0);
}

TEST_CASE("digit stream with repeating digit: f=2, g(m)=m, t=10") {
    auto ds = digit_stream_monomial(FiberWeight{nullptr, 2}, 1, 10, 3);
    CHECK(ds.digit(1) == 2);
    CHECK(ds.digit(2) == 2);
    CHECK(ds.digit(3) == 2);
    CHECK(ds.carry_overflow == 0);
}

TEST_CASE("digit stream of the phi fiber matches the big-rational oracle") {
    const std::uint64_t P = 64;
    mpz_class need = required_value_set_horizon(ArithFunction::Phi, P + 1);
    auto phi = ArithTable::sieve(ArithFunction::Phi, need.get_ui() + 1);
    auto ds = digit_stream(FiberWeight{}, phi, 2, P);

    // oracle: exact rational accumulation of sum_m 2^-phi(m) over all m in
    // the table, then digit extraction by repeated doubling
    mpq_class value(0);
    for (std::uint64_t m = 1; m < phi.horizon(); ++m) {
        mpq_class t(1);
        std::uint64_t e = phi.value(m);
        mpq_class den(1);
        for (std::uint64_t i = 0; i < e; ++i) den *= 2u;
        value += t / den;
    }
    mpz_class ipart(value.get_num() / value.get_den());
    CHECK(ds.carry_overflow == ipart);
    mpq_class frac = value - mpq_class(ipart);
    for (std::uint64_t p = 1; p <= ds.reliable_limit; ++p) {
        frac *= 2u;
        mpz_class digit(frac.get_num() / frac.get_den());
        CAPTURE(p);
        CHECK(mpz_class(static_cast<unsigned long>(ds.digit(p))) == digit);
        frac -= mpq_class(digit);
    }
    // tail influence stays inside a thin window
    CHECK(ds.reliable_limit >= P - 40);
}

TEST_CASE("sigma stream carries an exact tail note") {
    auto sigma = ArithTable::sieve(ArithFunction::Sigma, 200);
    auto ds = digit_stream(FiberWeight{}, sigma, 2, 64);
    CHECK(ds.tail_bound_note.find("exact") != std::string::npos);
    // sigma values below 64 come from m < 64; fiber nonzero counts agree with
    // the sequence-lab support when no carries occur below the first crowded
    // position
    auto f2 = base2();
    auto seq = fiber_sequence(FiberWeight{}, sigma, f2, 65);
    // positions with a(n) = 1 and no carry interference must appear as
    // nonzero digits
    std::uint64_t ones = 0, hits = 0;
    for (const auto& [n, c] : seq.entries()) {
        if (c.rational_value() == 1) {
            ++ones;
            if (n <= ds.reliable_limit && ds.digit(n) != 0) ++hits;
        }
    }
    CHECK(ones > 0);
    CHECK(hits > 0);
}

TEST_CASE("digit stream horizon errors") {
    auto phi = ArithTable::sieve(ArithFunction::Phi, 50);
    CHECK_THROWS_AS(digit_stream(FiberWeight{}, phi, 2, 64), HorizonInsufficient);
    CHECK_THROWS_AS(digit_stream_monomial(FiberWeight{}, 3, 1, 100), InvalidInput);
}

TEST_CASE("nonzero digit density rows") {
    auto ds = digit_stream_monomial(FiberWeight{}, 3, 2, 2000);
    auto rows = nonzero_digit_density(ds, 3);
    REQUIRE(!rows.empty());
    // count(1000) = 9 (cubes 1..729)
    bool saw1000 = false;
    for (const auto& row : rows) {
        if (row.x == 1000) {
            saw1000 = true;
            CHECK(row.count == 9);
        }
    }
    CHECK(saw1000);
    // empty stream
    DigitStream empty;
    empty.base = 2;
    empty.positions = 100;
    empty.digits.assign(101, 0);
    auto er = nonzero_digit_density(empty, 1);
    for (const auto& row : er) CHECK(row.count == 0);
}

TEST_CASE("digit stream text export") {
    auto ds = digit_stream_monomial(FiberWeight{}, 3, 2, 100);
    std::ostringstream os;
    ds.write_text(os);
    std::string text = os.str();
    CHECK(text.find("t=2 P=100 reliable_limit=100") != std::string::npos);
    CHECK(text.find("1:1") != std::string::npos);
    CHECK(text.find("8:1") != std::string::npos);
    CHECK(text.find("64:1") != std::string::npos);
}

TEST_CASE("evaluate series of convolution power contains the square of the base") {
    auto f2 = base2();
    auto base = CoefficientSequence::indicator(
        f2, SupportSet::explicit_set({1, 8, 27}, 100), 100, true);
    auto b2 = convolution_power(base, 2, 100);
    Interval vb = evaluate_series(base, CoefficientSequence::zero(f2, 100), 140);
    Interval v2 = evaluate_series(b2, CoefficientSequence::zero(f2, 100), 140);
    CHECK(v2.intersects(mul(vb, vb)));
}
