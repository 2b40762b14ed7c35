#include "sparseseries/algebraic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include <mpfr.h>

#include "sparseseries/errors.hpp"

namespace sparseseries {

namespace {

mpq_class mpq_from_mpfr(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) return mpq_class(0);
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    mpq_class q(m);
    if (e >= 0) {
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    } else {
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    }
    return q;
}

Interval interval_abs_of_rational_range(const mpq_class& lo, const mpq_class& hi,
                                        mpfr_prec_t prec) {
    if (sgn(lo) >= 0) return Interval::of_endpoints(lo, hi, prec);
    if (sgn(hi) <= 0) return Interval::of_endpoints(-hi, -lo, prec);
    return Interval::of_endpoints(mpq_class(0), std::max<mpq_class>(-lo, hi), prec);
}

ComplexInterval eval_horner_complex(const IntPolynomial& g, const ComplexInterval& z,
                                    mpfr_prec_t prec) {
    ComplexInterval acc = ComplexInterval::exact(0, 0, prec);
    const auto& c = g.coefficients();
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = mul(acc, z);
        acc = add(acc, ComplexInterval::exact(*it, 0, prec));
    }
    return acc;
}

Interval eval_horner_real(const IntPolynomial& g, const Interval& x, mpfr_prec_t prec) {
    Interval acc = Interval::exact(0, prec);
    const auto& c = g.coefficients();
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = mul(acc, x);
        acc = add(acc, Interval::exact(*it, prec));
    }
    return acc;
}

// Plain complex arithmetic on mpfr (round to nearest); used only to produce
// approximations that are then certified with interval arithmetic.
struct Cplx {
    mpfr_t re, im;
    explicit Cplx(mpfr_prec_t prec) {
        mpfr_init2(re, prec);
        mpfr_init2(im, prec);
        mpfr_set_zero(re, 1);
        mpfr_set_zero(im, 1);
    }
    Cplx(const Cplx& o) {
        mpfr_init2(re, mpfr_get_prec(o.re));
        mpfr_init2(im, mpfr_get_prec(o.im));
        mpfr_set(re, o.re, MPFR_RNDN);
        mpfr_set(im, o.im, MPFR_RNDN);
    }
    Cplx& operator=(const Cplx& o) {
        if (this != &o) {
            mpfr_set_prec(re, mpfr_get_prec(o.re));
            mpfr_set_prec(im, mpfr_get_prec(o.im));
            mpfr_set(re, o.re, MPFR_RNDN);
            mpfr_set(im, o.im, MPFR_RNDN);
        }
        return *this;
    }
    ~Cplx() {
        mpfr_clear(re);
        mpfr_clear(im);
    }
};

struct CplxWork {
    mpfr_prec_t prec;
    mpfr_t t1, t2, t3, t4;
    explicit CplxWork(mpfr_prec_t p) : prec(p) {
        mpfr_inits2(p, t1, t2, t3, t4, static_cast<mpfr_ptr>(nullptr));
    }
    ~CplxWork() { mpfr_clears(t1, t2, t3, t4, static_cast<mpfr_ptr>(nullptr)); }

    void mul(Cplx& out, const Cplx& a, const Cplx& b) {
        mpfr_mul(t1, a.re, b.re, MPFR_RNDN);
        mpfr_mul(t2, a.im, b.im, MPFR_RNDN);
        mpfr_mul(t3, a.re, b.im, MPFR_RNDN);
        mpfr_mul(t4, a.im, b.re, MPFR_RNDN);
        mpfr_sub(out.re, t1, t2, MPFR_RNDN);
        mpfr_add(out.im, t3, t4, MPFR_RNDN);
    }
    void div(Cplx& out, const Cplx& a, const Cplx& b) {
        // (a * conj b) / |b|^2
        mpfr_mul(t1, b.re, b.re, MPFR_RNDN);
        mpfr_mul(t2, b.im, b.im, MPFR_RNDN);
        mpfr_add(t1, t1, t2, MPFR_RNDN);  // |b|^2
        mpfr_mul(t2, a.re, b.re, MPFR_RNDN);
        mpfr_mul(t3, a.im, b.im, MPFR_RNDN);
        mpfr_add(t2, t2, t3, MPFR_RNDN);
        mpfr_mul(t3, a.im, b.re, MPFR_RNDN);
        mpfr_mul(t4, a.re, b.im, MPFR_RNDN);
        mpfr_sub(t3, t3, t4, MPFR_RNDN);
        mpfr_div(out.re, t2, t1, MPFR_RNDN);
        mpfr_div(out.im, t3, t1, MPFR_RNDN);
    }
    void sub(Cplx& out, const Cplx& a, const Cplx& b) {
        mpfr_sub(out.re, a.re, b.re, MPFR_RNDN);
        mpfr_sub(out.im, a.im, b.im, MPFR_RNDN);
    }
    void add(Cplx& out, const Cplx& a, const Cplx& b) {
        mpfr_add(out.re, a.re, b.re, MPFR_RNDN);
        mpfr_add(out.im, a.im, b.im, MPFR_RNDN);
    }
    // |z|^2 into t1 (clobbers t2); returns as double exponent estimate
    void abs2(mpfr_ptr out, const Cplx& a) {
        mpfr_mul(out, a.re, a.re, MPFR_RNDN);
        mpfr_mul(t2, a.im, a.im, MPFR_RNDN);
        mpfr_add(out, out, t2, MPFR_RNDN);
    }
};

void eval_poly_and_derivative(const IntPolynomial& p, const Cplx& z, Cplx& pz, Cplx& dpz,
                              CplxWork& w, mpfr_prec_t prec) {
    Cplx acc(prec), dacc(prec), tmp(prec);
    const auto& c = p.coefficients();
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        // dacc = dacc*z + acc; acc = acc*z + coeff
        w.mul(tmp, dacc, z);
        w.add(dacc, tmp, acc);
        w.mul(tmp, acc, z);
        mpfr_add_z(tmp.re, tmp.re, it->get_mpz_t(), MPFR_RNDN);
        acc = tmp;
    }
    pz = acc;
    dpz = dacc;
}

// Aberth-Ehrlich: simultaneous approximation of all roots of p.
std::vector<Cplx> aberth_roots(const IntPolynomial& p, mpfr_prec_t prec, int max_iter) {
    long d = p.degree();
    CplxWork w(prec);
    std::vector<Cplx> z;
    z.reserve(static_cast<size_t>(d));
    // Initial points on a circle of the Cauchy radius, offset to break
    // symmetry with the real axis.
    double bound = 1.0;
    for (const auto& c : p.coefficients()) {
        double v = std::fabs(c.get_d());
        bound = std::max(bound, v);
    }
    bound = 1.0 + bound;
    for (long k = 0; k < d; ++k) {
        Cplx zi(prec);
        double ang = (2.0 * M_PI * static_cast<double>(k)) / static_cast<double>(d) + 0.41;
        mpfr_set_d(zi.re, bound * 0.8 * std::cos(ang), MPFR_RNDN);
        mpfr_set_d(zi.im, bound * 0.8 * std::sin(ang), MPFR_RNDN);
        z.push_back(zi);
    }
    mpfr_t corr_norm, limit;
    mpfr_init2(corr_norm, prec);
    mpfr_init2(limit, prec);
    mpfr_set_ui(limit, 1, MPFR_RNDN);
    mpfr_mul_2si(limit, limit, -(prec - 8), MPFR_RNDN);

    Cplx pz(prec), dpz(prec), newton(prec), s(prec), tmp(prec), one(prec), denom(prec);
    mpfr_set_ui(one.re, 1, MPFR_RNDN);
    for (int iter = 0; iter < max_iter; ++iter) {
        bool all_small = true;
        for (long i = 0; i < d; ++i) {
            eval_poly_and_derivative(p, z[static_cast<size_t>(i)], pz, dpz, w, prec);
            w.abs2(w.t1, pz);
            if (mpfr_zero_p(w.t1)) continue;
            w.abs2(w.t1, dpz);
            if (mpfr_zero_p(w.t1)) {
                // derivative vanished at iterate: nudge
                mpfr_add_d(z[static_cast<size_t>(i)].re, z[static_cast<size_t>(i)].re,
                           1e-3, MPFR_RNDN);
                all_small = false;
                continue;
            }
            w.div(newton, pz, dpz);
            // s = sum_{j != i} 1/(z_i - z_j)
            mpfr_set_zero(s.re, 1);
            mpfr_set_zero(s.im, 1);
            for (long j = 0; j < d; ++j) {
                if (j == i) continue;
                w.sub(tmp, z[static_cast<size_t>(i)], z[static_cast<size_t>(j)]);
                w.abs2(w.t1, tmp);
                if (mpfr_zero_p(w.t1)) {
                    mpfr_add_d(tmp.re, tmp.re, 1e-6, MPFR_RNDN);
                }
                w.div(tmp, one, tmp);
                w.add(s, s, tmp);
            }
            w.mul(tmp, newton, s);
            w.sub(denom, one, tmp);
            w.abs2(w.t1, denom);
            if (mpfr_zero_p(w.t1)) continue;
            w.div(tmp, newton, denom);
            w.sub(z[static_cast<size_t>(i)], z[static_cast<size_t>(i)], tmp);
            w.abs2(corr_norm, tmp);
            mpfr_sqrt(corr_norm, corr_norm, MPFR_RNDN);
            // relative to max(1, |z_i|)
            w.abs2(w.t1, z[static_cast<size_t>(i)]);
            mpfr_sqrt(w.t1, w.t1, MPFR_RNDN);
            if (mpfr_cmp_ui(w.t1, 1) < 0) mpfr_set_ui(w.t1, 1, MPFR_RNDN);
            mpfr_mul(w.t1, w.t1, limit, MPFR_RNDN);
            if (!mpfr_lessequal_p(corr_norm, w.t1)) all_small = false;
        }
        if (all_small) break;
    }
    mpfr_clear(corr_norm);
    mpfr_clear(limit);
    return z;
}

// Certified radius of a disk around the dyadic point (re, im) containing at
// least one root of p: d * |p(z)| / |p'(z)|, evaluated with outward rounding.
// Returns false when |p'(z)| cannot be bounded away from zero.
bool certified_radius(const IntPolynomial& p, const mpq_class& re, const mpq_class& im,
                      mpfr_prec_t prec, mpq_class* radius_out) {
    ComplexInterval z(Interval::of_rational(re, prec), Interval::of_rational(im, prec));
    ComplexInterval pz = eval_horner_complex(p, z, prec);
    ComplexInterval dpz = eval_horner_complex(p.derivative(), z, prec);
    Interval num = pz.modulus();
    Interval den = dpz.modulus();
    if (!den.certainly_positive()) return false;
    mpfr_t r;
    mpfr_init2(r, prec);
    mpfr_div(r, num.hi(), den.lo(), MPFR_RNDU);
    mpfr_mul_ui(r, r, static_cast<unsigned long>(p.degree()), MPFR_RNDU);
    *radius_out = mpq_from_mpfr(r);
    mpfr_clear(r);
    return true;
}

struct Box2 {
    mpq_class rlo, rhi, ilo, ihi;
    bool disjoint(const Box2& o) const {
        return rhi < o.rlo || o.rhi < rlo || ihi < o.ilo || o.ihi < ilo;
    }
};

// Newton refinement of one conjugate-pair representative to a certified
// radius <= 2^-target_bits. Returns false if it cannot get there.
bool newton_refine(const IntPolynomial& p, mpq_class& re, mpq_class& im, mpq_class& rad,
                   long target_bits) {
    mpq_class target(1);
    target >>= static_cast<unsigned long>(target_bits);
    if (rad <= target) return true;
    mpfr_prec_t wp = static_cast<mpfr_prec_t>(std::max<long>(128, 2 * target_bits + 64));
    for (int rounds = 0; rounds < 4; ++rounds, wp *= 2) {
        Cplx z(wp);
        mpfr_set_q(z.re, re.get_mpq_t(), MPFR_RNDN);
        mpfr_set_q(z.im, im.get_mpq_t(), MPFR_RNDN);
        CplxWork w(wp);
        Cplx pz(wp), dpz(wp), step(wp);
        for (int it = 0; it < 80; ++it) {
            eval_poly_and_derivative(p, z, pz, dpz, w, wp);
            w.abs2(w.t1, dpz);
            if (mpfr_zero_p(w.t1)) break;
            w.div(step, pz, dpz);
            w.sub(z, z, step);
        }
        mpq_class nre = mpq_from_mpfr(z.re);
        mpq_class nim = mpq_from_mpfr(z.im);
        mpq_class nrad;
        if (certified_radius(p, nre, nim, wp, &nrad) && nim > nrad && nrad <= target) {
            re = nre;
            im = nim;
            rad = nrad;
            return true;
        }
    }
    return false;
}

}  // namespace

std::string to_string(BaseKind k) {
    switch (k) {
        case BaseKind::Pisot: return "Pisot";
        case BaseKind::Salem: return "Salem";
        case BaseKind::NeitherPisotNorSalem: return "NeitherPisotNorSalem";
        case BaseKind::Undecided: return "Undecided";
    }
    return "Undecided";
}

FieldElement::FieldElement(std::vector<mpz_class> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw InvalidInput("field element needs at least one coordinate");
}

FieldElement FieldElement::zero(long degree) {
    return FieldElement(std::vector<mpz_class>(static_cast<size_t>(degree), mpz_class(0)));
}

FieldElement FieldElement::from_integer(const mpz_class& v, long degree) {
    std::vector<mpz_class> c(static_cast<size_t>(degree), mpz_class(0));
    c[0] = v;
    return FieldElement(std::move(c));
}

bool FieldElement::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(),
                       [](const mpz_class& c) { return c == 0; });
}

bool FieldElement::is_rational_integer() const {
    for (size_t i = 1; i < coords_.size(); ++i)
        if (coords_[i] != 0) return false;
    return true;
}

const mpz_class& FieldElement::rational_value() const {
    if (!is_rational_integer())
        throw InvalidInput("element is not a rational integer");
    return coords_[0];
}

IntPolynomial FieldElement::to_polynomial() const {
    return IntPolynomial(std::vector<mpz_class>(coords_));
}

std::string FieldElement::to_string() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < coords_.size(); ++i) {
        if (i) os << ",";
        os << coords_[i].get_str();
    }
    os << ")";
    return os.str();
}

AlgebraicField::AlgebraicField(MonicIntPolynomial minpoly, Options options)
    : minpoly_(std::move(minpoly)), options_(options) {}

std::shared_ptr<const AlgebraicField> AlgebraicField::rational_base(const mpz_class& t) {
    if (t < 2) throw InvalidInput("rational base must be an integer >= 2");
    std::vector<mpz_class> c{-t, 1};
    return build(MonicIntPolynomial::from_coefficients(std::move(c)));
}

mpz_class AlgebraicField::rational_q() const {
    if (!is_rational()) throw NonRationalField("field has degree > 1");
    return -minpoly_.coeff(0);
}

std::shared_ptr<const AlgebraicField> AlgebraicField::build(
    const MonicIntPolynomial& minpoly) {
    return build(minpoly, Options());
}

std::shared_ptr<const AlgebraicField> AlgebraicField::build(const MonicIntPolynomial& minpoly,
                                                            Options options) {
    auto screen = screen_irreducibility(minpoly);
    if (!screen.passed)
        throw ReducibleRejected("minimal polynomial rejected: " + screen.note);
    if (!screen.exact && !options.assume_irreducible)
        throw ReducibleRejected(
            "degree > 4 irreducibility cannot be verified exactly; "
            "pass assume_irreducible to proceed");

    std::shared_ptr<AlgebraicField> f(new AlgebraicField(minpoly, options));
    f->isolate_roots();
    f->classify();
    return f;
}

void AlgebraicField::isolate_roots() {
    const long d = degree();
    const IntPolynomial& p = minpoly_.poly();
    sturm_ = std::make_unique<SturmChain>(p);

    auto isolated = sturm_->isolate_real_roots();
    const long bits = options_.precision_bits;
    for (auto& [lo, hi] : isolated) {
        auto [rlo, rhi] = sturm_->refine(lo, hi, bits + 1);
        real_roots_.push_back({rlo, rhi});
    }
    const long R = static_cast<long>(real_roots_.size());

    // Principal root: the largest real root, which must exceed 1.
    mpq_class bound = sturm_->root_bound();
    if (sturm_->count_roots(mpq_class(1), bound) < 1)
        throw NoRealRootAboveOne("no real root greater than 1");
    principal_real_ = real_roots_.size() - 1;
    // Refine until the principal box lies strictly right of 1 (the root
    // cannot equal 1: the rational-root screen already ran).
    {
        auto& pr = real_roots_[principal_real_];
        long extra = bits + 1;
        while (!(pr.lo > 1)) {
            auto [rlo, rhi] = sturm_->refine(pr.lo, pr.hi, extra);
            pr.lo = rlo;
            pr.hi = rhi;
            extra *= 2;
            if (extra > bits * (1L << 12))
                throw RefinementBudgetExceeded("cannot separate principal root from 1");
        }
    }


    // Separate adjacent real boxes strictly (isolating intervals may share
    // a bisection endpoint).
    {
        long extra = 2 * bits + 4;
        for (int k = 0;; ++k) {
            bool ok = true;
            for (size_t i = 0; i + 1 < real_roots_.size(); ++i)
                if (!(real_roots_[i].hi < real_roots_[i + 1].lo)) {
                    ok = false;
                    break;
                }
            if (ok) break;
            if (k >= 32) throw RefinementBudgetExceeded("real root separation failed");
            for (auto& rr : real_roots_) {
                auto [l, h] = sturm_->refine(rr.lo, rr.hi, extra);
                rr = {l, h};
            }
            extra *= 2;
        }
    }

    const long npairs = (d - R) / 2;
    if ((d - R) % 2 != 0)
        throw RefinementBudgetExceeded("real/complex root count mismatch");

    if (npairs > 0) {
        mpfr_prec_t wp = static_cast<mpfr_prec_t>(std::max<long>(128, bits + 32));
        bool done = false;
        for (int attempt = 0; attempt <= options_.refinement_doublings && !done;
             ++attempt, wp *= 2) {
            auto approx = aberth_roots(p, wp, 400);
            // Split approximations into near-real and complex ones.
            struct Cand {
                mpq_class re, im, rad;
            };
            std::vector<Cand> cands;
            cands.reserve(approx.size());
            bool cert_ok = true;
            for (auto& z : approx) {
                Cand c;
                c.re = mpq_from_mpfr(z.re);
                c.im = mpq_from_mpfr(z.im);
                if (!certified_radius(p, c.re, c.im, wp, &c.rad)) {
                    cert_ok = false;
                    break;
                }
                cands.push_back(std::move(c));
            }
            if (!cert_ok) continue;
            std::vector<Cand> complex_cands;
            long near_real = 0;
            for (auto& c : cands) {
                if (::abs(c.im) <= c.rad)
                    ++near_real;
                else
                    complex_cands.push_back(std::move(c));
            }
            if (near_real != R || static_cast<long>(complex_cands.size()) != 2 * npairs)
                continue;
            // Pair each Im > 0 candidate with its conjugate partner.
            std::vector<Cand> ups, downs;
            for (auto& c : complex_cands)
                (sgn(c.im) > 0 ? ups : downs).push_back(std::move(c));
            if (static_cast<long>(ups.size()) != npairs ||
                static_cast<long>(downs.size()) != npairs)
                continue;
            auto by_re = [](const Cand& a, const Cand& b) {
                return a.re < b.re || (a.re == b.re && a.im < b.im);
            };
            std::sort(ups.begin(), ups.end(), by_re);
            std::sort(downs.begin(), downs.end(), by_re);
            std::vector<ComplexPair> pairs;
            bool ok = true;
            for (long j = 0; j < npairs && ok; ++j) {
                // Symmetrized center of the conjugate pair.
                mpq_class re = (ups[static_cast<size_t>(j)].re +
                                downs[static_cast<size_t>(j)].re) /
                               2;
                mpq_class im = (ups[static_cast<size_t>(j)].im -
                                downs[static_cast<size_t>(j)].im) /
                               2;
                mpq_class rad;
                if (!certified_radius(p, re, im, wp, &rad) || !(im > rad)) {
                    ok = false;
                    break;
                }
                mpq_class target(1);
                target >>= static_cast<unsigned long>(bits + 1);
                if (rad > target) {
                    ok = false;
                    break;
                }
                pairs.push_back({re, im, rad});
            }
            if (!ok) continue;
            std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
                return a.re < b.re || (a.re == b.re && a.im < b.im);
            });
            // Disjointness of all d boxes certifies one root per box.
            std::vector<Box2> all;
            for (const auto& rr : real_roots_)
                all.push_back({rr.lo, rr.hi, mpq_class(0), mpq_class(0)});
            for (const auto& cp : pairs) {
                all.push_back({cp.re - cp.radius, cp.re + cp.radius, cp.im - cp.radius,
                               cp.im + cp.radius});
                all.push_back({cp.re - cp.radius, cp.re + cp.radius, -cp.im - cp.radius,
                               -cp.im + cp.radius});
            }
            bool dis = true;
            for (size_t i = 0; i < all.size() && dis; ++i)
                for (size_t j = i + 1; j < all.size() && dis; ++j)
                    if (!all[i].disjoint(all[j])) dis = false;
            if (!dis) continue;
            complex_pairs_ = std::move(pairs);
            done = true;
        }
        if (!done)
            throw RefinementBudgetExceeded("could not certify complex conjugate boxes");
    }

    // Materialize the canonical box list: real roots ascending, then pairs
    // ascending by real part (Im > 0 first).
    mpfr_prec_t bp = static_cast<mpfr_prec_t>(std::max<long>(64, bits + 8));
    for (const auto& rr : real_roots_)
        boxes_.emplace_back(Interval::of_endpoints(rr.lo, rr.hi, bp),
                            Interval::exact(0, bp));
    for (const auto& cp : complex_pairs_) {
        boxes_.emplace_back(Interval::of_endpoints(cp.re - cp.radius, cp.re + cp.radius, bp),
                            Interval::of_endpoints(cp.im - cp.radius, cp.im + cp.radius, bp));
        boxes_.emplace_back(Interval::of_endpoints(cp.re - cp.radius, cp.re + cp.radius, bp),
                            Interval::of_endpoints(-cp.im - cp.radius, -cp.im + cp.radius, bp));
    }
    principal_index_ = principal_real_;
    best_real_ = real_roots_;
    best_pairs_ = complex_pairs_;
}

AlgebraicField::RealRoot AlgebraicField::refined_real(std::size_t i, long bits) const {
    RealRoot cur;
    {
        std::lock_guard<std::mutex> lk(cache_mu_);
        cur = best_real_[i];
    }
    mpq_class target(1);
    target >>= static_cast<unsigned long>(bits);
    if (cur.hi - cur.lo <= target) return cur;
    auto [lo, hi] = sturm_->refine(cur.lo, cur.hi, bits);
    RealRoot next{lo, hi};
    {
        std::lock_guard<std::mutex> lk(cache_mu_);
        RealRoot& b = best_real_[i];
        if (next.hi - next.lo < b.hi - b.lo) b = next;
    }
    return next;
}

AlgebraicField::ComplexPair AlgebraicField::refined_pair(std::size_t i, long bits) const {
    ComplexPair cur;
    {
        std::lock_guard<std::mutex> lk(cache_mu_);
        cur = best_pairs_[i];
    }
    mpq_class target(1);
    target >>= static_cast<unsigned long>(bits);
    if (cur.radius <= target) return cur;
    ComplexPair next = cur;
    if (!newton_refine(minpoly_.poly(), next.re, next.im, next.radius, bits))
        throw RefinementBudgetExceeded("complex box refinement failed");
    {
        std::lock_guard<std::mutex> lk(cache_mu_);
        ComplexPair& b = best_pairs_[i];
        if (next.radius < b.radius) b = next;
    }
    return next;
}

void AlgebraicField::classify() {
    const long d = degree();
    mpfr_prec_t wp = static_cast<mpfr_prec_t>(std::max<long>(64, options_.precision_bits));

    if (d == 1) {
        classification_.kind = BaseKind::Pisot;
        classification_.margin = Interval::exact(1, wp);
        return;
    }

    auto real_copy = real_roots_;
    auto pair_copy = complex_pairs_;

    for (int attempt = 0; attempt <= options_.refinement_doublings; ++attempt, wp *= 2) {
        bool undecided = false;
        bool any_above = false;
        Interval max_mod = Interval::exact(0, wp);
        Interval above_mod = Interval::exact(0, wp);

        for (size_t i = 0; i < real_copy.size(); ++i) {
            if (i == principal_real_) continue;
            // Exact rational comparison against 1, refining as needed.
            auto& rr = real_copy[i];
            for (int k = 0; k < 64; ++k) {
                mpq_class alo = std::min<mpq_class>(::abs(rr.lo), ::abs(rr.hi));
                mpq_class ahi = std::max<mpq_class>(::abs(rr.lo), ::abs(rr.hi));
                if (sgn(rr.lo) < 0 && sgn(rr.hi) > 0) alo = 0;
                if (ahi < 1) {
                    max_mod = max_of(max_mod, interval_abs_of_rational_range(rr.lo, rr.hi, wp));
                    break;
                }
                if (alo > 1) {
                    any_above = true;
                    above_mod = max_of(above_mod,
                                       interval_abs_of_rational_range(rr.lo, rr.hi, wp));
                    break;
                }
                auto [l2, h2] = sturm_->refine(rr.lo, rr.hi,
                                               static_cast<long>(wp) * (k + 1));
                rr = {l2, h2};
                if (k == 63) undecided = true;
            }
        }

        for (const auto& cp : pair_copy) {
            ComplexInterval box(
                Interval::of_endpoints(cp.re - cp.radius, cp.re + cp.radius, wp),
                Interval::of_endpoints(cp.im - cp.radius, cp.im + cp.radius, wp));
            Interval m = box.modulus();
            if (m.certainly_less(mpq_class(1))) {
                max_mod = max_of(max_mod, m);
            } else if (m.certainly_greater(mpq_class(1))) {
                any_above = true;
                above_mod = max_of(above_mod, m);
            } else {
                undecided = true;
            }
        }

        if (any_above) {
            classification_.kind = BaseKind::NeitherPisotNorSalem;
            classification_.margin = sparseseries::sub(above_mod, Interval::exact(1, wp));
            return;
        }
        if (!undecided) {
            classification_.kind = BaseKind::Pisot;
            classification_.margin = sparseseries::sub(Interval::exact(1, wp), max_mod);
            return;
        }

        // Boxes cannot decide: if the polynomial is self-reciprocal the
        // reciprocal-pairing argument decides exactly.
        if (minpoly_.poly().is_self_reciprocal() && d % 2 == 0) {
            IntPolynomial t = trace_polynomial(minpoly_.poly());
            SturmChain st(t);
            long e = d / 2;
            long total_real = st.count_real_roots();
            mpq_class tb = st.root_bound();
            long kplus = st.count_roots(mpq_class(2), tb);
            long kminus = st.count_roots(-tb, mpq_class(-2));
            if (total_real < e || kplus != 1 || kminus != 0) {
                classification_.kind = BaseKind::NeitherPisotNorSalem;
                classification_.margin = Interval::exact(0, wp);
                return;
            }
            if (e >= 2) {
                classification_.kind = BaseKind::Salem;
                classification_.margin = Interval::exact(0, wp);
            } else {
                classification_.kind = BaseKind::Pisot;
                classification_.margin =
                    sparseseries::sub(Interval::exact(1, wp),
                                      inv(principal_root(static_cast<long>(wp))));
            }
            return;
        }

        // Refine the complex certificates and retry.
        std::vector<ComplexPair> refined;
        bool ok = true;
        for (const auto& cp : pair_copy) {
            ComplexPair np = cp;
            if (!newton_refine(minpoly_.poly(), np.re, np.im, np.radius,
                               static_cast<long>(wp) * 2)) {
                ok = false;
                break;
            }
            refined.push_back(np);
        }
        if (ok) pair_copy = std::move(refined);
    }
    classification_.kind = BaseKind::Undecided;
    classification_.margin = Interval::exact(0, 64);
}

FieldElement AlgebraicField::from_coords(std::vector<mpz_class> coords) const {
    if (static_cast<long>(coords.size()) != degree())
        throw InvalidInput("coordinate count must equal field degree");
    return FieldElement(std::move(coords));
}

FieldElement AlgebraicField::generator() const {
    if (degree() == 1) return from_integer(rational_q());
    std::vector<mpz_class> c(static_cast<size_t>(degree()), mpz_class(0));
    c[1] = 1;
    return FieldElement(std::move(c));
}

void AlgebraicField::check_element(const FieldElement& x) const {
    if (x.degree() != degree())
        throw InvalidInput("element does not belong to this field");
}

FieldElement AlgebraicField::reduce(IntPolynomial p) const {
    const long d = degree();
    std::vector<mpz_class> c(p.coefficients());
    c.resize(std::max<size_t>(c.size(), static_cast<size_t>(d)), mpz_class(0));
    for (long k = static_cast<long>(c.size()) - 1; k >= d; --k) {
        if (c[static_cast<size_t>(k)] == 0) continue;
        mpz_class f = c[static_cast<size_t>(k)];
        // subtract f * x^(k-d) * minpoly
        for (long i = 0; i <= d; ++i)
            c[static_cast<size_t>(k - d + i)] -= f * minpoly_.coeff(static_cast<size_t>(i));
    }
    c.resize(static_cast<size_t>(d));
    return FieldElement(std::move(c));
}

FieldElement AlgebraicField::add(const FieldElement& x, const FieldElement& y) const {
    check_element(x);
    check_element(y);
    std::vector<mpz_class> c(static_cast<size_t>(degree()));
    for (size_t i = 0; i < c.size(); ++i) c[i] = x.coords()[i] + y.coords()[i];
    return FieldElement(std::move(c));
}

FieldElement AlgebraicField::sub(const FieldElement& x, const FieldElement& y) const {
    check_element(x);
    check_element(y);
    std::vector<mpz_class> c(static_cast<size_t>(degree()));
    for (size_t i = 0; i < c.size(); ++i) c[i] = x.coords()[i] - y.coords()[i];
    return FieldElement(std::move(c));
}

FieldElement AlgebraicField::negate(const FieldElement& x) const {
    check_element(x);
    std::vector<mpz_class> c(static_cast<size_t>(degree()));
    for (size_t i = 0; i < c.size(); ++i) c[i] = -x.coords()[i];
    return FieldElement(std::move(c));
}

FieldElement AlgebraicField::mul(const FieldElement& x, const FieldElement& y) const {
    check_element(x);
    check_element(y);
    return reduce(sparseseries::mul(x.to_polynomial(), y.to_polynomial()));
}

mpz_class AlgebraicField::norm(const FieldElement& x) const {
    check_element(x);
    return resultant(minpoly_.poly(), x.to_polynomial());
}

std::vector<ComplexInterval> AlgebraicField::refined_roots(long precision_bits) const {
    mpfr_prec_t bp = static_cast<mpfr_prec_t>(std::max<long>(64, precision_bits + 8));
    std::vector<ComplexInterval> out;
    for (size_t i = 0; i < real_roots_.size(); ++i) {
        RealRoot rr = refined_real(i, precision_bits + 1);
        out.emplace_back(Interval::of_endpoints(rr.lo, rr.hi, bp), Interval::exact(0, bp));
    }
    for (size_t i = 0; i < complex_pairs_.size(); ++i) {
        ComplexPair cp = refined_pair(i, precision_bits + 2);
        out.emplace_back(Interval::of_endpoints(cp.re - cp.radius, cp.re + cp.radius, bp),
                         Interval::of_endpoints(cp.im - cp.radius, cp.im + cp.radius, bp));
        out.emplace_back(Interval::of_endpoints(cp.re - cp.radius, cp.re + cp.radius, bp),
                         Interval::of_endpoints(-cp.im - cp.radius, -cp.im + cp.radius, bp));
    }
    return out;
}

Interval AlgebraicField::principal_root(long precision_bits) const {
    RealRoot rr = refined_real(principal_real_, precision_bits + 1);
    mpfr_prec_t bp = static_cast<mpfr_prec_t>(std::max<long>(64, precision_bits + 8));
    return Interval::of_endpoints(rr.lo, rr.hi, bp);
}

bool AlgebraicField::q_certainly_greater(const mpq_class& v) const {
    long bits = 32;
    for (int k = 0; k < 24; ++k, bits *= 2) {
        Interval q = principal_root(bits);
        if (q.certainly_greater(v)) return true;
        if (q.certainly_less(v)) return false;
        if (degree() == 1) return mpq_class(rational_q()) > v;
    }
    throw RefinementBudgetExceeded("cannot compare q against rational bound");
}

Interval AlgebraicField::principal_value(const FieldElement& x, long precision_bits) const {
    check_element(x);
    IntPolynomial g = x.to_polynomial();
    if (degree() == 1 || x.is_rational_integer()) {
        mpz_class v = x.coords()[0];
        if (degree() == 1) v = g.eval_int(rational_q());
        size_t nbits = mpz_sizeinbase(v.get_mpz_t(), 2);
        return Interval::exact(v, static_cast<mpfr_prec_t>(std::max<size_t>(64, nbits + 2)));
    }
    long wp = precision_bits + 16;
    for (int attempt = 0; attempt < 10; ++attempt, wp *= 2) {
        Interval q = principal_root(wp);
        Interval val = eval_horner_real(g, q, static_cast<mpfr_prec_t>(wp + 16));
        if (val.width_leq_pow2(precision_bits)) return val;
    }
    throw RefinementBudgetExceeded("principal value refinement failed");
}

Interval AlgebraicField::principal_abs(const FieldElement& x, long precision_bits) const {
    return abs(principal_value(x, precision_bits));
}

Interval AlgebraicField::house(const FieldElement& x, long precision_bits) const {
    check_element(x);
    if (x.is_zero()) return Interval::exact(0, 64);
    if (x.is_rational_integer()) {
        mpz_class v = ::abs(x.coords()[0]);
        size_t nbits = mpz_sizeinbase(v.get_mpz_t(), 2);
        return Interval::exact(v, static_cast<mpfr_prec_t>(std::max<size_t>(64, nbits + 2)));
    }
    IntPolynomial g = x.to_polynomial();
    long wp = precision_bits + 16;
    for (int attempt = 0; attempt < 10; ++attempt, wp *= 2) {
        mpfr_prec_t bp = static_cast<mpfr_prec_t>(wp + 16);
        Interval best = Interval::exact(0, bp);
        for (size_t i = 0; i < real_roots_.size(); ++i) {
            RealRoot rr = refined_real(i, wp);
            Interval val = eval_horner_real(g, Interval::of_endpoints(rr.lo, rr.hi, bp), bp);
            best = max_of(best, abs(val));
        }
        for (size_t i = 0; i < complex_pairs_.size(); ++i) {
            ComplexPair cp = refined_pair(i, wp);
            ComplexInterval box(
                Interval::of_endpoints(cp.re - cp.radius, cp.re + cp.radius, bp),
                Interval::of_endpoints(cp.im - cp.radius, cp.im + cp.radius, bp));
            best = max_of(best, eval_horner_complex(g, box, bp).modulus());
        }
        if (best.width_leq_pow2(precision_bits)) return best;
    }
    throw RefinementBudgetExceeded("house refinement failed");
}

ComplexInterval AlgebraicField::embed(const FieldElement& x, std::size_t conjugate_index,
                                      long precision_bits) const {
    check_element(x);
    if (conjugate_index >= static_cast<size_t>(degree()))
        throw InvalidInput("conjugate index out of range");
    IntPolynomial g = x.to_polynomial();
    long wp = precision_bits + 16;
    const size_t R = real_roots_.size();
    for (int attempt = 0; attempt < 10; ++attempt, wp *= 2) {
        mpfr_prec_t bp = static_cast<mpfr_prec_t>(wp + 16);
        ComplexInterval val;
        if (conjugate_index < R) {
            RealRoot rr = refined_real(conjugate_index, wp);
            val = ComplexInterval(
                eval_horner_real(g, Interval::of_endpoints(rr.lo, rr.hi, bp), bp),
                Interval::exact(0, bp));
        } else {
            size_t pi = (conjugate_index - R) / 2;
            bool upper = ((conjugate_index - R) % 2) == 0;
            ComplexPair cp = refined_pair(pi, wp);
            mpq_class im = upper ? cp.im : mpq_class(-cp.im);
            ComplexInterval box(
                Interval::of_endpoints(cp.re - cp.radius, cp.re + cp.radius, bp),
                Interval::of_endpoints(im - cp.radius, im + cp.radius, bp));
            val = eval_horner_complex(g, box, bp);
        }
        if (val.real().width_leq_pow2(precision_bits) &&
            val.imag().width_leq_pow2(precision_bits))
            return val;
    }
    throw RefinementBudgetExceeded("embedding refinement failed");
}

}  // namespace sparseseries
