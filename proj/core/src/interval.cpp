#include "sparseseries/interval.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "sparseseries/errors.hpp"

namespace sparseseries {

namespace {
constexpr mpfr_prec_t kDefaultPrec = 64;
}

Interval::Interval(raw_tag, mpfr_prec_t prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
}

Interval::Interval() : Interval(raw_tag{}, kDefaultPrec) {
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& o) {
    mpfr_init2(lo_, mpfr_get_prec(o.lo_));
    mpfr_init2(hi_, mpfr_get_prec(o.hi_));
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept {
    mpfr_init2(lo_, mpfr_get_prec(o.lo_));
    mpfr_init2(hi_, mpfr_get_prec(o.hi_));
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

Interval& Interval::operator=(const Interval& o) {
    if (this != &o) {
        mpfr_set_prec(lo_, mpfr_get_prec(o.lo_));
        mpfr_set_prec(hi_, mpfr_get_prec(o.hi_));
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
    if (this != &o) {
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
    }
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::exact(const mpz_class& v, mpfr_prec_t prec) {
    Interval r(Interval::raw_tag{}, prec);
    mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
    return r;
}

Interval Interval::of_rational(const mpq_class& v, mpfr_prec_t prec) {
    Interval r(Interval::raw_tag{}, prec);
    mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::of_endpoints(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec) {
    if (lo > hi) throw InvalidInput("interval endpoints out of order");
    Interval r(Interval::raw_tag{}, prec);
    mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::hull(const Interval& a, const Interval& b) {
    Interval r(Interval::raw_tag{}, std::max(a.precision(), b.precision()));
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

mpfr_prec_t Interval::precision() const {
    return std::max(mpfr_get_prec(lo_), mpfr_get_prec(hi_));
}

bool Interval::is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }

bool Interval::contains_zero() const {
    return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

bool Interval::contains(const mpq_class& v) const {
    return mpfr_cmp_q(lo_, v.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, v.get_mpq_t()) >= 0;
}

bool Interval::contains(const Interval& o) const {
    return mpfr_lessequal_p(lo_, o.lo_) && mpfr_greaterequal_p(hi_, o.hi_);
}

bool Interval::intersects(const Interval& o) const {
    return !(mpfr_less_p(hi_, o.lo_) || mpfr_less_p(o.hi_, lo_));
}

bool Interval::certainly_less(const Interval& o) const {
    return mpfr_less_p(hi_, o.lo_) != 0;
}

bool Interval::certainly_less(const mpq_class& v) const {
    return mpfr_cmp_q(hi_, v.get_mpq_t()) < 0;
}

bool Interval::certainly_greater(const mpq_class& v) const {
    return mpfr_cmp_q(lo_, v.get_mpq_t()) > 0;
}

bool Interval::certainly_geq(const mpq_class& v) const {
    return mpfr_cmp_q(lo_, v.get_mpq_t()) >= 0;
}

bool Interval::certainly_nonnegative() const { return mpfr_sgn(lo_) >= 0; }

bool Interval::certainly_positive() const { return mpfr_sgn(lo_) > 0; }

bool Interval::width_leq_pow2(long bits) const {
    mpfr_t w;
    mpfr_init2(w, precision());
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    bool ok;
    if (mpfr_zero_p(w)) {
        ok = true;
    } else if (mpfr_sgn(w) < 0) {
        ok = true;  // cannot happen for well-formed intervals
    } else {
        mpfr_t bound;
        mpfr_init2(bound, 8);
        mpfr_set_ui(bound, 1, MPFR_RNDN);
        mpfr_mul_2si(bound, bound, -bits, MPFR_RNDN);  // exact
        ok = mpfr_lessequal_p(w, bound) != 0;
        mpfr_clear(bound);
    }
    mpfr_clear(w);
    return ok;
}

double Interval::width_upper_double() const {
    mpfr_t w;
    mpfr_init2(w, precision());
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
}

double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

std::string Interval::lo_string(int digits) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*RDe", digits, lo_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

std::string Interval::hi_string(int digits) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*RUe", digits, hi_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

std::string Interval::to_string(int digits) const {
    return "[" + lo_string(digits) + ", " + hi_string(digits) + "]";
}

std::string Interval::lo_hex() const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%Ra", lo_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

std::string Interval::hi_hex() const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%Ra", hi_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

Interval Interval::from_hex(const std::string& lo, const std::string& hi,
                            mpfr_prec_t prec) {
    Interval r(raw_tag{}, prec);
    if (mpfr_set_str(r.lo_, lo.c_str(), 0, MPFR_RNDD) != 0 ||
        mpfr_set_str(r.hi_, hi.c_str(), 0, MPFR_RNDU) != 0)
        throw InvalidInput("bad hex interval encoding");
    return r;
}

bool Interval::same_value(const Interval& o) const {
    return mpfr_equal_p(lo_, o.lo_) && mpfr_equal_p(hi_, o.hi_);
}

Interval Interval::rounded_to(mpfr_prec_t prec) const {
    Interval r(Interval::raw_tag{}, prec);
    mpfr_set(r.lo_, lo_, MPFR_RNDD);
    mpfr_set(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval add(const Interval& a, const Interval& b) {
    Interval r(Interval::raw_tag{}, std::max(a.precision(), b.precision()));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval sub(const Interval& a, const Interval& b) {
    Interval r(Interval::raw_tag{}, std::max(a.precision(), b.precision()));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
}

Interval neg(const Interval& a) {
    Interval r(Interval::raw_tag{}, a.precision());
    mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    return r;
}

Interval mul(const Interval& a, const Interval& b) {
    mpfr_prec_t prec = std::max(a.precision(), b.precision());
    Interval r(Interval::raw_tag{}, prec);
    // Fast paths on definite signs; general case takes min/max of the four
    // endpoint products in each rounding direction.
    int asl = mpfr_sgn(a.lo_), bsl = mpfr_sgn(b.lo_);
    int ash = mpfr_sgn(a.hi_), bsh = mpfr_sgn(b.hi_);
    if (asl >= 0 && bsl >= 0) {
        mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_mul(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }
    if (ash <= 0 && bsh <= 0) {
        mpfr_mul(r.lo_, a.hi_, b.hi_, MPFR_RNDD);
        mpfr_mul(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
        return r;
    }
    mpfr_t t, best;
    mpfr_init2(t, prec);
    mpfr_init2(best, prec);

    mpfr_srcptr as[2] = {a.lo_, a.hi_};
    mpfr_srcptr bs[2] = {b.lo_, b.hi_};

    mpfr_mul(best, as[0], bs[0], MPFR_RNDD);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            if (i == 0 && j == 0) continue;
            mpfr_mul(t, as[i], bs[j], MPFR_RNDD);
            if (mpfr_less_p(t, best)) mpfr_set(best, t, MPFR_RNDD);
        }
    mpfr_set(r.lo_, best, MPFR_RNDD);

    mpfr_mul(best, as[0], bs[0], MPFR_RNDU);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            if (i == 0 && j == 0) continue;
            mpfr_mul(t, as[i], bs[j], MPFR_RNDU);
            if (mpfr_greater_p(t, best)) mpfr_set(best, t, MPFR_RNDU);
        }
    mpfr_set(r.hi_, best, MPFR_RNDU);

    mpfr_clear(t);
    mpfr_clear(best);
    return r;
}

Interval inv(const Interval& a) {
    if (a.contains_zero()) throw InvalidInput("interval inversion across zero");
    Interval r(Interval::raw_tag{}, a.precision());
    mpfr_ui_div(r.lo_, 1, a.hi_, MPFR_RNDD);
    mpfr_ui_div(r.hi_, 1, a.lo_, MPFR_RNDU);
    return r;
}

Interval div(const Interval& a, const Interval& b) { return mul(a, inv(b)); }

Interval abs(const Interval& a) {
    Interval r(Interval::raw_tag{}, a.precision());
    if (mpfr_sgn(a.lo_) >= 0) return a;
    if (mpfr_sgn(a.hi_) <= 0) return neg(a);
    // straddles zero
    mpfr_t nl;
    mpfr_init2(nl, a.precision());
    mpfr_neg(nl, a.lo_, MPFR_RNDU);
    mpfr_set_zero(r.lo_, 1);
    mpfr_max(r.hi_, nl, a.hi_, MPFR_RNDU);
    mpfr_clear(nl);
    return r;
}

Interval sqr(const Interval& a) {
    Interval m = abs(a);
    Interval r(Interval::raw_tag{}, a.precision());
    mpfr_sqr(r.lo_, m.lo_, MPFR_RNDD);
    mpfr_sqr(r.hi_, m.hi_, MPFR_RNDU);
    return r;
}

Interval sqrt(const Interval& a) {
    if (mpfr_sgn(a.lo_) < 0) throw InvalidInput("sqrt of interval with negative part");
    Interval r(Interval::raw_tag{}, a.precision());
    mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval root_ui(const Interval& a, unsigned long n) {
    if (mpfr_sgn(a.lo_) < 0) throw InvalidInput("root of interval with negative part");
    if (n == 0) throw InvalidInput("zeroth root");
    Interval r(Interval::raw_tag{}, a.precision());
    mpfr_rootn_ui(r.lo_, a.lo_, n, MPFR_RNDD);
    mpfr_rootn_ui(r.hi_, a.hi_, n, MPFR_RNDU);
    return r;
}

Interval pow_ui(const Interval& a, unsigned long n) {
    if (mpfr_sgn(a.lo_) < 0) throw InvalidInput("pow_ui requires nonnegative base");
    Interval r(Interval::raw_tag{}, a.precision());
    if (n == 0) {
        mpfr_set_ui(r.lo_, 1, MPFR_RNDD);
        mpfr_set_ui(r.hi_, 1, MPFR_RNDU);
        return r;
    }
    mpfr_pow_ui(r.lo_, a.lo_, n, MPFR_RNDD);
    mpfr_pow_ui(r.hi_, a.hi_, n, MPFR_RNDU);
    return r;
}

Interval log_natural(const Interval& a) {
    if (mpfr_sgn(a.lo_) <= 0) throw InvalidInput("log of interval not strictly positive");
    Interval r(Interval::raw_tag{}, a.precision());
    mpfr_log(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_log(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval exp_natural(const Interval& a) {
    Interval r(Interval::raw_tag{}, a.precision());
    mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval max_of(const Interval& a, const Interval& b) {
    Interval r(Interval::raw_tag{}, std::max(a.precision(), b.precision()));
    mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval min_of(const Interval& a, const Interval& b) {
    Interval r(Interval::raw_tag{}, std::max(a.precision(), b.precision()));
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval intersect(const Interval& a, const Interval& b) {
    if (!a.intersects(b)) throw InvalidInput("intersecting disjoint intervals");
    Interval r(Interval::raw_tag{}, std::max(a.precision(), b.precision()));
    mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

ComplexInterval ComplexInterval::exact(const mpz_class& re, const mpz_class& im,
                                       mpfr_prec_t prec) {
    return ComplexInterval(Interval::exact(re, prec), Interval::exact(im, prec));
}

bool ComplexInterval::intersects(const ComplexInterval& o) const {
    return re_.intersects(o.re_) && im_.intersects(o.im_);
}

bool ComplexInterval::is_real_line() const {
    return mpfr_zero_p(im_.lo()) && mpfr_zero_p(im_.hi());
}

ComplexInterval add(const ComplexInterval& a, const ComplexInterval& b) {
    return ComplexInterval(add(a.re_, b.re_), add(a.im_, b.im_));
}

ComplexInterval sub(const ComplexInterval& a, const ComplexInterval& b) {
    return ComplexInterval(sub(a.re_, b.re_), sub(a.im_, b.im_));
}

ComplexInterval mul(const ComplexInterval& a, const ComplexInterval& b) {
    return ComplexInterval(sub(mul(a.re_, b.re_), mul(a.im_, b.im_)),
                           add(mul(a.re_, b.im_), mul(a.im_, b.re_)));
}

Interval ComplexInterval::modulus() const {
    return sqrt(add(sqr(re_), sqr(im_)));
}

std::string ComplexInterval::to_string(int digits) const {
    return re_.to_string(digits) + " + i*" + im_.to_string(digits);
}

}  // namespace sparseseries
