#pragma once

#include <string>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

namespace sparseseries {

/// Directed-rounded real interval [lo, hi].
///
/// Endpoints are MPFR numbers; every operation rounds the lower endpoint
/// toward -inf and the upper endpoint toward +inf, so the result interval
/// always encloses the exact mathematical result. Values are immutable in
/// the sense that no operation mutates its operands.
///
/// Binary operations produce results at the larger of the operand
/// precisions; leaves (constructed from integers/rationals) fix the working
/// precision of a computation.
class Interval {
public:
    Interval();                      // [0, 0]
    Interval(const Interval& o);
    Interval(Interval&& o) noexcept;
    Interval& operator=(const Interval& o);
    Interval& operator=(Interval&& o) noexcept;
    ~Interval();

    static Interval exact(const mpz_class& v, mpfr_prec_t prec);
    static Interval of_rational(const mpq_class& v, mpfr_prec_t prec);
    /// [lo, hi] with outward rounding; requires lo <= hi.
    static Interval of_endpoints(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec);
    /// Smallest interval containing both arguments.
    static Interval hull(const Interval& a, const Interval& b);

    mpfr_srcptr lo() const { return lo_; }
    mpfr_srcptr hi() const { return hi_; }
    mpfr_prec_t precision() const;

    bool is_point() const;
    bool contains_zero() const;
    bool contains(const mpq_class& v) const;
    bool contains(const Interval& o) const;    // o subseteq *this
    bool intersects(const Interval& o) const;

    /// hi < o.lo, certified.
    bool certainly_less(const Interval& o) const;
    bool certainly_less(const mpq_class& v) const;     // hi < v
    bool certainly_greater(const mpq_class& v) const;  // lo > v
    bool certainly_geq(const mpq_class& v) const;      // lo >= v
    bool certainly_nonnegative() const;                // lo >= 0
    bool certainly_positive() const;                   // lo > 0

    /// True when hi - lo <= 2^-bits (width computed with upward rounding).
    bool width_leq_pow2(long bits) const;
    /// Upper bound on the width as a double (inf if it overflows).
    double width_upper_double() const;
    double lo_double() const;  // rounded down
    double hi_double() const;  // rounded up

    /// Decimal rendering "[lo_str, hi_str]" with directed rounding on each
    /// endpoint; deterministic for identical intervals.
    std::string to_string(int digits = 20) const;
    std::string lo_string(int digits = 20) const;
    std::string hi_string(int digits = 20) const;

    /// Exact hex-float endpoint encodings; from_hex restores the value
    /// bit-for-bit at the stored precision.
    std::string lo_hex() const;
    std::string hi_hex() const;
    static Interval from_hex(const std::string& lo, const std::string& hi,
                             mpfr_prec_t prec);
    bool same_value(const Interval& o) const;

    friend Interval add(const Interval& a, const Interval& b);
    friend Interval sub(const Interval& a, const Interval& b);
    friend Interval mul(const Interval& a, const Interval& b);
    /// Division; divisor must not contain zero.
    friend Interval div(const Interval& a, const Interval& b);
    friend Interval neg(const Interval& a);
    friend Interval abs(const Interval& a);
    friend Interval sqr(const Interval& a);
    friend Interval sqrt(const Interval& a);              // a >= 0
    friend Interval root_ui(const Interval& a, unsigned long n);  // a >= 0
    /// a^n for a with lo >= 0.
    friend Interval pow_ui(const Interval& a, unsigned long n);
    friend Interval inv(const Interval& a);                // a must not contain 0
    friend Interval log_natural(const Interval& a);        // a > 0
    friend Interval exp_natural(const Interval& a);
    friend Interval max_of(const Interval& a, const Interval& b);
    friend Interval min_of(const Interval& a, const Interval& b);
    friend Interval intersect(const Interval& a, const Interval& b);  // must intersect

    Interval rounded_to(mpfr_prec_t prec) const;  // outward re-rounding

private:
    struct raw_tag {};
    Interval(raw_tag, mpfr_prec_t prec);
    mpfr_t lo_;
    mpfr_t hi_;

    friend class ComplexInterval;
};

Interval add(const Interval& a, const Interval& b);
Interval sub(const Interval& a, const Interval& b);
Interval mul(const Interval& a, const Interval& b);
Interval div(const Interval& a, const Interval& b);
Interval neg(const Interval& a);
Interval abs(const Interval& a);
Interval sqr(const Interval& a);
Interval sqrt(const Interval& a);
Interval root_ui(const Interval& a, unsigned long n);
Interval pow_ui(const Interval& a, unsigned long n);
Interval inv(const Interval& a);
Interval log_natural(const Interval& a);
Interval exp_natural(const Interval& a);
Interval max_of(const Interval& a, const Interval& b);
Interval min_of(const Interval& a, const Interval& b);
Interval intersect(const Interval& a, const Interval& b);

/// Rectangular complex interval re + i*im.
class ComplexInterval {
public:
    ComplexInterval() = default;
    ComplexInterval(Interval re, Interval im) : re_(std::move(re)), im_(std::move(im)) {}

    static ComplexInterval exact(const mpz_class& re, const mpz_class& im, mpfr_prec_t prec);

    const Interval& real() const { return re_; }
    const Interval& imag() const { return im_; }

    bool intersects(const ComplexInterval& o) const;
    bool is_real_line() const;  // im == [0,0]

    friend ComplexInterval add(const ComplexInterval& a, const ComplexInterval& b);
    friend ComplexInterval sub(const ComplexInterval& a, const ComplexInterval& b);
    friend ComplexInterval mul(const ComplexInterval& a, const ComplexInterval& b);

    /// Enclosure of |z| over the box.
    Interval modulus() const;

    std::string to_string(int digits = 20) const;

private:
    Interval re_;
    Interval im_;
};

ComplexInterval add(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval sub(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval mul(const ComplexInterval& a, const ComplexInterval& b);

}  // namespace sparseseries
