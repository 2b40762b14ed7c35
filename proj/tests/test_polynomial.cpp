#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sparseseries/errors.hpp"
#include "sparseseries/polynomial.hpp"

using namespace sparseseries;

TEST_CASE("parse comma list and expression agree") {
    IntPolynomial a = parse_polynomial("-1,-2,1");
    IntPolynomial b = parse_polynomial("x^2-2x-1");
    IntPolynomial c = parse_polynomial("x^2 - 2*x - 1");
    CHECK(a == b);
    CHECK(b == c);
    CHECK(a.degree() == 2);
    CHECK(a.coeff(0) == -1);
    CHECK(a.coeff(1) == -2);
    CHECK(a.coeff(2) == 1);
}

TEST_CASE("parse rejects garbage") {
    CHECK_THROWS_AS(parse_polynomial("x^2 + $"), InvalidInput);
    CHECK_THROWS_AS(parse_polynomial("1,,2"), InvalidInput);
    CHECK_THROWS_AS(parse_monic_polynomial("2x^2-1"), InvalidInput);  // not monic
    CHECK_THROWS_AS(parse_monic_polynomial("5"), InvalidInput);       // constant
}

TEST_CASE("evaluation and derivative") {
    IntPolynomial p = parse_polynomial("x^3-x-1");
    CHECK(p.eval_int(mpz_class(2)) == 5);
    CHECK(p.derivative() == parse_polynomial("3x^2-1"));
    CHECK(p.sign_at_dyadic(mpz_class(3), 1) > 0);   // p(1.5) = 0.875 > 0
    CHECK(p.sign_at_dyadic(mpz_class(5), 2) < 0);   // p(1.25) < 0
}

TEST_CASE("resultant equals product of g over roots") {
    // p = x^2 - 2x - 1 (roots 1 +- sqrt2), g = x: product of roots = -1
    CHECK(resultant(parse_polynomial("x^2-2x-1"), parse_polynomial("x")) == -1);
    // g constant 7 over degree-1 p: 7
    CHECK(resultant(parse_polynomial("x-2"), IntPolynomial::constant(7)) == 7);
    // N(1 + q) for q = sqrt2: (1+sqrt2)(1-sqrt2) = -1
    CHECK(resultant(parse_polynomial("x^2-2"), parse_polynomial("1,1")) == -1);
    // shared root => 0
    CHECK(resultant(parse_polynomial("x^2-1"), parse_polynomial("x-1")) == 0);
    // zero polynomial
    CHECK(resultant(parse_polynomial("x^2-2"), IntPolynomial::zero()) == 0);
}

TEST_CASE("squarefree detection") {
    CHECK(is_squarefree(parse_polynomial("x^2-2")));
    CHECK(!is_squarefree(parse_polynomial("x^2-2x+1")));  // (x-1)^2
    CHECK(is_squarefree(parse_polynomial("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")));
}

TEST_CASE("irreducibility screen") {
    auto ok = screen_irreducibility(parse_monic_polynomial("x^2-2x-1"));
    CHECK(ok.passed);
    CHECK(ok.exact);

    auto root = screen_irreducibility(parse_monic_polynomial("x^2-3x+2"));  // (x-1)(x-2)
    CHECK(!root.passed);

    auto quad = screen_irreducibility(parse_monic_polynomial("x^4+2x^2+1"));  // (x^2+1)^2
    CHECK(!quad.passed);

    auto quad2 = screen_irreducibility(parse_monic_polynomial("x^4-x^2+1"));  // irreducible
    CHECK(quad2.passed);
    CHECK(quad2.exact);

    // x^4 + 4 = (x^2-2x+2)(x^2+2x+2): no rational root, quadratic split found
    auto sophie = screen_irreducibility(parse_monic_polynomial("x^4+4"));
    CHECK(!sophie.passed);

    auto lehmer = screen_irreducibility(
        parse_monic_polynomial("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1"));
    CHECK(lehmer.passed);
    CHECK(!lehmer.exact);  // degree > 4: advisory only
}

TEST_CASE("sturm root counting and isolation") {
    SturmChain s(parse_polynomial("x^2-2"));
    CHECK(s.count_real_roots() == 2);
    auto roots = s.isolate_real_roots();
    REQUIRE(roots.size() == 2);
    // half-open (a,b] isolation: adjacent intervals may share an endpoint
    CHECK(roots[0].second <= roots[1].first);

    auto [lo, hi] = s.refine(roots[1].first, roots[1].second, 80);
    CHECK(hi - lo <= mpq_class(1, mpz_class(1) << 80));
    // sqrt(2) = 1.41421356...
    CHECK(lo > mpq_class(14142, 10001));
    CHECK(hi < mpq_class(14143, 10000));

    SturmChain c(parse_polynomial("x^2+1"));
    CHECK(c.count_real_roots() == 0);

    SturmChain lin(parse_polynomial("x-2"));
    auto lr = lin.isolate_real_roots();
    REQUIRE(lr.size() == 1);
    CHECK(lr[0].first == 2);
    CHECK(lr[0].second == 2);
}

TEST_CASE("sturm on the lehmer polynomial") {
    IntPolynomial lehmer = parse_polynomial("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1");
    SturmChain s(lehmer);
    // Lehmer's polynomial has two real roots: lambda = 1.17628... and 1/lambda.
    CHECK(s.count_real_roots() == 2);
    CHECK(s.count_roots(mpq_class(1), s.root_bound()) == 1);
}

TEST_CASE("trace polynomial of self-reciprocal") {
    // x^2 - 3x + 1: T(y) = y - 3
    IntPolynomial t = trace_polynomial(parse_polynomial("x^2-3x+1"));
    CHECK(t == parse_polynomial("x-3"));
    // x^4 + x^3 + x^2 + x + 1: T = y^2 + y - 1
    IntPolynomial t2 = trace_polynomial(parse_polynomial("x^4+x^3+x^2+x+1"));
    CHECK(t2 == parse_polynomial("x^2+x-1"));
    CHECK_THROWS_AS(trace_polynomial(parse_polynomial("x^2-2")), InvalidInput);
}

TEST_CASE("self reciprocal check") {
    CHECK(parse_polynomial("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1").is_self_reciprocal());
    CHECK(!parse_polynomial("x^2-2x-1").is_self_reciprocal());
}

TEST_CASE("to_string round trips through parser") {
    IntPolynomial p = parse_polynomial("x^3-x-1");
    CHECK(parse_polynomial(p.to_string()) == p);
    IntPolynomial q = parse_polynomial("-2,0,0,1");
    CHECK(parse_polynomial(q.to_string()) == q);
}
