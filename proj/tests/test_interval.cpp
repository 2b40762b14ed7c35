#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sparseseries/errors.hpp"
#include "sparseseries/interval.hpp"

using namespace sparseseries;

TEST_CASE("exact integer endpoints") {
    Interval a = Interval::exact(mpz_class(5), 64);
    CHECK(a.is_point());
    CHECK(a.contains(mpq_class(5)));
    CHECK(a.certainly_less(mpq_class(6)));
    CHECK(a.certainly_greater(mpq_class(4)));
}

TEST_CASE("rational one-third is outward rounded") {
    mpq_class third(1, 3);
    Interval a = Interval::of_rational(third, 64);
    CHECK(!a.is_point());
    CHECK(a.contains(third));
    CHECK(a.width_leq_pow2(60));
}

TEST_CASE("arithmetic encloses rational arithmetic") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<long> num(-1000, 1000);
    std::uniform_int_distribution<long> den(1, 97);
    for (int it = 0; it < 500; ++it) {
        mpq_class x(num(rng), den(rng));
        mpq_class y(num(rng), den(rng));
        x.canonicalize();
        y.canonicalize();
        Interval ix = Interval::of_rational(x, 64);
        Interval iy = Interval::of_rational(y, 64);
        CHECK(add(ix, iy).contains(x + y));
        CHECK(sub(ix, iy).contains(x - y));
        CHECK(mul(ix, iy).contains(x * y));
        if (y != 0 && !iy.contains_zero()) {
            mpq_class q = x / y;
            CHECK(div(ix, iy).contains(q));
        }
        CHECK(sqr(ix).contains(x * x));
        CHECK(abs(ix).contains(::abs(x)));
    }
}

TEST_CASE("mul sign cases") {
    auto I = [](long a, long b) {
        return Interval::of_endpoints(mpq_class(a), mpq_class(b), 64);
    };
    CHECK(mul(I(-2, 3), I(-5, 7)).contains(mpq_class(-2 * 7)));
    CHECK(mul(I(-2, 3), I(-5, 7)).contains(mpq_class(3 * 7)));
    CHECK(mul(I(-2, 3), I(-5, 7)).contains(mpq_class(10)));
    CHECK(mul(I(-3, -1), I(-4, -2)).contains(mpq_class(3)));
    CHECK(!mul(I(1, 2), I(3, 4)).contains(mpq_class(13)));
}

TEST_CASE("pow and root") {
    Interval two = Interval::exact(mpz_class(2), 96);
    Interval p = pow_ui(two, 10);
    CHECK(p.contains(mpq_class(1024)));
    CHECK(p.width_leq_pow2(80));
    Interval r = root_ui(p, 10);
    CHECK(r.contains(mpq_class(2)));
    CHECK_THROWS_AS(root_ui(Interval::of_endpoints(mpq_class(-1), mpq_class(1), 64), 3),
                    InvalidInput);
}

TEST_CASE("division across zero rejected") {
    Interval z = Interval::of_endpoints(mpq_class(-1), mpq_class(1), 64);
    CHECK_THROWS_AS(inv(z), InvalidInput);
}

TEST_CASE("log is monotone enclosure") {
    Interval e2 = Interval::of_endpoints(mpq_class(7), mpq_class(8), 128);
    Interval l = log_natural(e2);
    // ln 7 = 1.9459..., ln 8 = 2.0794...
    CHECK(l.contains(mpq_class(2)));
    CHECK(l.certainly_greater(mpq_class(19, 10)));
    CHECK(l.certainly_less(mpq_class(21, 10)));
}

TEST_CASE("complex modulus of 3+4i") {
    ComplexInterval z = ComplexInterval::exact(mpz_class(3), mpz_class(4), 96);
    Interval m = z.modulus();
    CHECK(m.contains(mpq_class(5)));
    CHECK(m.width_leq_pow2(80));
}

TEST_CASE("complex multiplication (1+2i)(3-i) = 5+5i") {
    ComplexInterval a = ComplexInterval::exact(mpz_class(1), mpz_class(2), 96);
    ComplexInterval b = ComplexInterval::exact(mpz_class(3), mpz_class(-1), 96);
    ComplexInterval p = mul(a, b);
    CHECK(p.real().contains(mpq_class(5)));
    CHECK(p.imag().contains(mpq_class(5)));
}

TEST_CASE("deterministic decimal rendering") {
    Interval a = Interval::of_rational(mpq_class(1, 3), 128);
    CHECK(a.to_string(10) == Interval::of_rational(mpq_class(1, 3), 128).to_string(10));
    Interval b = Interval::of_rational(mpq_class(1, 3), 256);
    CHECK(b.contains(mpq_class(1, 3)));
}
