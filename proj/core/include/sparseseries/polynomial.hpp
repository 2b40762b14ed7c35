#pragma once

#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace sparseseries {

/// Dense univariate polynomial over Z, coefficients lowest-degree first.
/// The zero polynomial has an empty coefficient vector.
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<mpz_class> coeffs);

    static IntPolynomial zero() { return IntPolynomial(); }
    static IntPolynomial constant(const mpz_class& c);
    static IntPolynomial monomial(const mpz_class& c, size_t k);

    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }  // -1 for zero
    const std::vector<mpz_class>& coefficients() const { return c_; }
    const mpz_class& coeff(size_t i) const;
    const mpz_class& leading() const;

    mpz_class eval_int(const mpz_class& x) const;
    mpq_class eval_rational(const mpq_class& x) const;
    /// Sign of p(num / 2^exp2), computed exactly in integers.
    int sign_at_dyadic(const mpz_class& num, unsigned long exp2) const;

    IntPolynomial derivative() const;
    IntPolynomial reversed() const;  // x^deg * p(1/x)
    bool is_self_reciprocal() const;

    friend IntPolynomial add(const IntPolynomial& a, const IntPolynomial& b);
    friend IntPolynomial sub(const IntPolynomial& a, const IntPolynomial& b);
    friend IntPolynomial mul(const IntPolynomial& a, const IntPolynomial& b);
    friend IntPolynomial scale(const IntPolynomial& a, const mpz_class& k);

    bool operator==(const IntPolynomial& o) const { return c_ == o.c_; }

    std::string to_string() const;  // human-readable, "x^2 - 2*x - 1" style

private:
    void normalize();
    std::vector<mpz_class> c_;
};

IntPolynomial add(const IntPolynomial& a, const IntPolynomial& b);
IntPolynomial sub(const IntPolynomial& a, const IntPolynomial& b);
IntPolynomial mul(const IntPolynomial& a, const IntPolynomial& b);
IntPolynomial scale(const IntPolynomial& a, const mpz_class& k);

/// Monic integer polynomial of degree >= 1; the minimal-polynomial carrier.
class MonicIntPolynomial {
public:
    /// Throws InvalidInput unless leading coefficient is 1 and degree >= 1.
    explicit MonicIntPolynomial(IntPolynomial p);
    static MonicIntPolynomial from_coefficients(std::vector<mpz_class> coeffs);

    const IntPolynomial& poly() const { return p_; }
    long degree() const { return p_.degree(); }
    const mpz_class& coeff(size_t i) const { return p_.coeff(i); }

    bool operator==(const MonicIntPolynomial& o) const { return p_ == o.p_; }

    std::string to_string() const { return p_.to_string(); }
    /// Comma form "c0,c1,...,cd", lowest degree first.
    std::string to_coeff_string() const;

private:
    IntPolynomial p_;
};

/// Accepts either "c0,c1,...,cd" (lowest degree first) or a univariate
/// expression such as "x^2-2*x-1" (the '*' may be omitted: "x^2-2x-1").
IntPolynomial parse_polynomial(const std::string& text);
MonicIntPolynomial parse_monic_polynomial(const std::string& text);

/// Resultant of p and g over Z (Bareiss elimination on the Sylvester
/// matrix). For monic p this equals the product of g over the roots of p.
mpz_class resultant(const IntPolynomial& p, const IntPolynomial& g);

bool is_squarefree(const IntPolynomial& p);

/// Irreducibility screen per the construction policy: exact for degree <= 4
/// (rational-root test, and the quadratic-pair factor test at degree 4);
/// degree > 4 runs the rational-root screen only and reports
/// `exact == false`.
struct IrreducibilityScreen {
    bool passed;       // no factor found by the checks that ran
    bool exact;        // the checks that ran are decisive
    std::string note;  // which check failed, when !passed
};
IrreducibilityScreen screen_irreducibility(const MonicIntPolynomial& p);

/// Sturm-chain machinery on exact rational arithmetic.
class SturmChain {
public:
    explicit SturmChain(const IntPolynomial& p);

    /// Number of distinct real roots in (a, b].
    long count_roots(const mpq_class& a, const mpq_class& b) const;
    long count_real_roots() const;

    /// Isolating intervals (lo, hi] with exactly one real root each,
    /// sorted increasing. Rational roots are returned as [r, r] points.
    std::vector<std::pair<mpq_class, mpq_class>> isolate_real_roots() const;

    /// Shrink an isolating interval until hi - lo <= 2^-bits.
    std::pair<mpq_class, mpq_class> refine(const mpq_class& lo, const mpq_class& hi,
                                           long bits) const;

    /// A bound B with all real roots in [-B, B] (Cauchy bound).
    mpq_class root_bound() const;

private:
    long variations(const mpq_class& x) const;
    long variations_at_plus_infinity() const;
    long variations_at_minus_infinity() const;

    IntPolynomial p_;
    std::vector<IntPolynomial> chain_;  // primitive-part signed remainder chain
};

/// For a self-reciprocal p of even degree 2e, the unique T of degree e with
/// p(x) = x^e T(x + 1/x); T is monic when p is. Throws InvalidInput if p is
/// not self-reciprocal of even degree.
IntPolynomial trace_polynomial(const IntPolynomial& p);

}  // namespace sparseseries
