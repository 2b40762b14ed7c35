#include "sparseseries/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "sparseseries/errors.hpp"

namespace sparseseries {

IntPolynomial::IntPolynomial(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) {
    normalize();
}

void IntPolynomial::normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPolynomial IntPolynomial::constant(const mpz_class& c) {
    return IntPolynomial(std::vector<mpz_class>{c});
}

IntPolynomial IntPolynomial::monomial(const mpz_class& c, size_t k) {
    std::vector<mpz_class> v(k + 1, mpz_class(0));
    v[k] = c;
    return IntPolynomial(std::move(v));
}

const mpz_class& IntPolynomial::coeff(size_t i) const {
    static const mpz_class zero(0);
    return i < c_.size() ? c_[i] : zero;
}

const mpz_class& IntPolynomial::leading() const {
    if (c_.empty()) throw InvalidInput("leading coefficient of zero polynomial");
    return c_.back();
}

mpz_class IntPolynomial::eval_int(const mpz_class& x) const {
    mpz_class acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

mpq_class IntPolynomial::eval_rational(const mpq_class& x) const {
    mpq_class acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + mpq_class(*it);
    return acc;
}

int IntPolynomial::sign_at_dyadic(const mpz_class& num, unsigned long exp2) const {
    // p(num/2^exp2) * 2^(exp2*deg) = sum c_i * num^i * 2^(exp2*(deg-i)), an integer.
    if (c_.empty()) return 0;
    mpz_class acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = acc * num + (*it << (exp2 * static_cast<unsigned long>(
                                              std::distance(c_.rbegin(), it))));
    }
    return sgn(acc);
}

IntPolynomial IntPolynomial::derivative() const {
    if (c_.size() <= 1) return IntPolynomial();
    std::vector<mpz_class> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
    return IntPolynomial(std::move(d));
}

IntPolynomial IntPolynomial::reversed() const {
    std::vector<mpz_class> r(c_.rbegin(), c_.rend());
    return IntPolynomial(std::move(r));
}

bool IntPolynomial::is_self_reciprocal() const {
    if (c_.empty()) return false;
    size_t n = c_.size();
    for (size_t i = 0; i < n; ++i)
        if (c_[i] != c_[n - 1 - i]) return false;
    return true;
}

IntPolynomial add(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<mpz_class> r(std::max(a.c_.size(), b.c_.size()), mpz_class(0));
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return IntPolynomial(std::move(r));
}

IntPolynomial sub(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<mpz_class> r(std::max(a.c_.size(), b.c_.size()), mpz_class(0));
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
    return IntPolynomial(std::move(r));
}

IntPolynomial mul(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return IntPolynomial();
    std::vector<mpz_class> r(a.c_.size() + b.c_.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return IntPolynomial(std::move(r));
}

IntPolynomial scale(const IntPolynomial& a, const mpz_class& k) {
    std::vector<mpz_class> r(a.c_.size());
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] = a.c_[i] * k;
    return IntPolynomial(std::move(r));
}

std::string IntPolynomial::to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (long i = degree(); i >= 0; --i) {
        const mpz_class& ci = c_[static_cast<size_t>(i)];
        if (ci == 0) continue;
        mpz_class a = ::abs(ci);
        if (first) {
            if (ci < 0) os << "-";
            first = false;
        } else {
            os << (ci < 0 ? " - " : " + ");
        }
        if (i == 0 || a != 1) os << a.get_str();
        if (i > 0) {
            if (a != 1) os << "*";
            os << "x";
            if (i > 1) os << "^" << i;
        }
    }
    if (first) return "0";
    return os.str();
}

MonicIntPolynomial::MonicIntPolynomial(IntPolynomial p) : p_(std::move(p)) {
    if (p_.degree() < 1) throw InvalidInput("minimal polynomial must have degree >= 1");
    if (p_.leading() != 1) throw InvalidInput("minimal polynomial must be monic");
}

MonicIntPolynomial MonicIntPolynomial::from_coefficients(std::vector<mpz_class> coeffs) {
    return MonicIntPolynomial(IntPolynomial(std::move(coeffs)));
}

std::string MonicIntPolynomial::to_coeff_string() const {
    std::ostringstream os;
    for (long i = 0; i <= degree(); ++i) {
        if (i) os << ",";
        os << p_.coeff(static_cast<size_t>(i)).get_str();
    }
    return os.str();
}

namespace {

IntPolynomial parse_comma_list(const std::string& text) {
    std::vector<mpz_class> coeffs;
    std::string tok;
    std::istringstream is(text);
    while (std::getline(is, tok, ',')) {
        size_t b = tok.find_first_not_of(" \t");
        size_t e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) throw InvalidInput("empty coefficient in list: " + text);
        tok = tok.substr(b, e - b + 1);
        try {
            coeffs.emplace_back(tok);
        } catch (const std::invalid_argument&) {
            throw InvalidInput("bad integer coefficient '" + tok + "'");
        }
    }
    if (coeffs.empty()) throw InvalidInput("empty coefficient list");
    return IntPolynomial(std::move(coeffs));
}

// Expression grammar: sum of terms; a term is a product of integer factors
// and powers of x, with '*' optional before x.
IntPolynomial parse_expression(const std::string& text) {
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto parse_uint = [&]() -> mpz_class {
        size_t b = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (b == i) throw InvalidInput("expected integer at position " +
                                       std::to_string(b) + " in '" + text + "'");
        return mpz_class(text.substr(b, i - b));
    };

    IntPolynomial total;
    bool expect_term = true;
    int sign = 1;
    skip_ws();
    while (i < text.size()) {
        skip_ws();
        if (i >= text.size()) break;
        char ch = text[i];
        if (ch == '+' || ch == '-') {
            if (expect_term && ch == '-') {
                sign = -sign;
            } else if (expect_term && ch == '+') {
                // leading plus, no effect
            } else {
                sign = (ch == '-') ? -1 : 1;
            }
            ++i;
            expect_term = true;
            continue;
        }
        // term
        mpz_class coef(1);
        unsigned long expo = 0;
        bool saw_factor = false;
        for (;;) {
            skip_ws();
            if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                coef *= parse_uint();
                saw_factor = true;
            } else if (i < text.size() && (text[i] == 'x' || text[i] == 'X')) {
                ++i;
                unsigned long e = 1;
                skip_ws();
                if (i < text.size() && text[i] == '^') {
                    ++i;
                    skip_ws();
                    e = static_cast<unsigned long>(parse_uint().get_ui());
                }
                expo += e;
                saw_factor = true;
            } else {
                break;
            }
            skip_ws();
            if (i < text.size() && text[i] == '*') {
                ++i;
                continue;
            }
            // juxtaposition like "2x" continues the same term
            if (i < text.size() && (text[i] == 'x' || text[i] == 'X')) continue;
            break;
        }
        if (!saw_factor)
            throw InvalidInput("unexpected character '" + std::string(1, ch) +
                               "' in polynomial '" + text + "'");
        total = add(total, IntPolynomial::monomial(sign * coef, expo));
        sign = 1;
        expect_term = false;
    }
    if (expect_term && total.is_zero())
        throw InvalidInput("empty polynomial expression");
    return total;
}

}  // namespace

IntPolynomial parse_polynomial(const std::string& text) {
    if (text.find('x') != std::string::npos || text.find('X') != std::string::npos)
        return parse_expression(text);
    return parse_comma_list(text);
}

MonicIntPolynomial parse_monic_polynomial(const std::string& text) {
    return MonicIntPolynomial(parse_polynomial(text));
}

mpz_class resultant(const IntPolynomial& p, const IntPolynomial& g) {
    if (g.is_zero()) return 0;
    if (p.is_zero()) return 0;
    long n = p.degree(), m = g.degree();
    if (m == 0) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), g.coeff(0).get_mpz_t(), static_cast<unsigned long>(n));
        return r;
    }
    size_t dim = static_cast<size_t>(n + m);
    std::vector<std::vector<mpz_class>> a(dim, std::vector<mpz_class>(dim, mpz_class(0)));
    // m rows of p, n rows of g, coefficients highest-degree first.
    for (long r = 0; r < m; ++r)
        for (long k = 0; k <= n; ++k)
            a[static_cast<size_t>(r)][static_cast<size_t>(r + k)] =
                p.coeff(static_cast<size_t>(n - k));
    for (long r = 0; r < n; ++r)
        for (long k = 0; k <= m; ++k)
            a[static_cast<size_t>(m + r)][static_cast<size_t>(r + k)] =
                g.coeff(static_cast<size_t>(m - k));

    // Bareiss fraction-free elimination with row pivoting.
    mpz_class prev(1);
    int sign = 1;
    for (size_t k = 0; k + 1 < dim; ++k) {
        if (a[k][k] == 0) {
            size_t piv = k + 1;
            while (piv < dim && a[piv][k] == 0) ++piv;
            if (piv == dim) return 0;  // singular: p and g share a root
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < dim; ++i) {
            for (size_t j = k + 1; j < dim; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign * a[dim - 1][dim - 1];
}

namespace {

mpz_class content(const IntPolynomial& p) {
    mpz_class g(0);
    for (const auto& c : p.coefficients()) g = gcd(g, c);
    return g;
}

IntPolynomial primitive_part(const IntPolynomial& p) {
    if (p.is_zero()) return p;
    mpz_class g = content(p);
    if (g == 0 || g == 1) return p;
    std::vector<mpz_class> r(p.coefficients());
    for (auto& c : r) c /= g;
    return IntPolynomial(std::move(r));
}

// Remainder of a*lc(b)^k by b (pseudo-division), sign-faithful up to a
// positive factor, then reduced to primitive part.
IntPolynomial pseudo_rem_primitive(const IntPolynomial& a, const IntPolynomial& b) {
    IntPolynomial r = a;
    const long db = b.degree();
    const mpz_class& lb = b.leading();
    // Multiply by lb^2 per step so the applied factor is positive regardless
    // of the sign of lb: sign variations are preserved.
    while (!r.is_zero() && r.degree() >= db) {
        long shift = r.degree() - db;
        mpz_class c = r.leading();
        r = sub(scale(r, lb * lb), mul(b, IntPolynomial::monomial(c * lb, shift)));
    }
    return primitive_part(r);
}

}  // namespace

bool is_squarefree(const IntPolynomial& p) {
    if (p.degree() <= 1) return true;
    // gcd(p, p') trivial <=> squarefree; compute a PRS and test last nonzero degree.
    IntPolynomial a = primitive_part(p);
    IntPolynomial b = primitive_part(p.derivative());
    while (!b.is_zero()) {
        IntPolynomial r = pseudo_rem_primitive(a, b);
        a = b;
        b = r;
    }
    return a.degree() == 0;
}

IrreducibilityScreen screen_irreducibility(const MonicIntPolynomial& mp) {
    const IntPolynomial& p = mp.poly();
    long d = p.degree();
    if (d == 1) return {true, true, ""};

    if (!is_squarefree(p))
        return {false, true, "polynomial has a repeated factor"};

    // Rational-root test: monic, so rational roots are integer divisors of c0.
    mpz_class c0 = p.coeff(0);
    if (c0 == 0) return {false, true, "x divides the polynomial"};
    mpz_class ac0 = ::abs(c0);
    for (mpz_class t(1); t * t <= ac0; ++t) {
        if (ac0 % t != 0) continue;
        mpz_class divs[2] = {t, mpz_class(ac0 / t)};
        for (const auto& dv : divs) {
            for (int s = -1; s <= 1; s += 2) {
                mpz_class cand = s * dv;
                if (p.eval_int(cand) == 0)
                    return {false, true,
                            "integer root " + cand.get_str() + " found"};
            }
        }
    }
    if (d <= 3) return {true, true, ""};

    if (d == 4) {
        // Monic quartic with no rational root factors only as two monic
        // quadratics (x^2+px+r)(x^2+sx+w) with rw = e, p+s = a, ps = b-r-w,
        // pw+rs = c.
        const mpz_class a = p.coeff(3), b = p.coeff(2), c = p.coeff(1), e = p.coeff(0);
        mpz_class ae = ::abs(e);
        for (mpz_class t(1); t * t <= ae; ++t) {
            if (ae % t != 0) continue;
            for (const mpz_class& r0 : {mpz_class(t), mpz_class(ae / t)}) {
                for (int sr = -1; sr <= 1; sr += 2) {
                    mpz_class r = sr * r0;
                    if (r == 0) continue;
                    mpz_class w = e / r;
                    if (r * w != e) continue;
                    // p+s = a, p*s = b-r-w
                    mpz_class ps = b - r - w;
                    mpz_class disc = a * a - 4 * ps;
                    if (disc < 0) continue;
                    mpz_class sq;
                    mpz_sqrt(sq.get_mpz_t(), disc.get_mpz_t());
                    if (sq * sq != disc) continue;
                    if ((a + sq) % 2 != 0) continue;
                    mpz_class pp = (a + sq) / 2, ss = (a - sq) / 2;
                    if (pp * w + r * ss == c || ss * w + r * pp == c)
                        return {false, true, "factors into two quadratics"};
                }
            }
        }
        return {true, true, ""};
    }
    return {true, false, ""};
}

SturmChain::SturmChain(const IntPolynomial& p) : p_(primitive_part(p)) {
    if (p_.is_zero()) throw InvalidInput("Sturm chain of zero polynomial");
    chain_.push_back(p_);
    IntPolynomial d = primitive_part(p_.derivative());
    if (!d.is_zero()) chain_.push_back(d);
    while (chain_.size() >= 2 && !chain_.back().is_zero()) {
        const IntPolynomial& a = chain_[chain_.size() - 2];
        const IntPolynomial& b = chain_.back();
        if (b.degree() == 0) break;
        IntPolynomial r = pseudo_rem_primitive(a, b);
        if (r.is_zero()) break;
        chain_.push_back(sub(IntPolynomial(), r));  // negate
    }
    if (p_.degree() >= 2 && chain_.back().degree() > 0)
        throw InvalidInput("Sturm chain requires a squarefree polynomial");
}

long SturmChain::variations(const mpq_class& x) const {
    long v = 0;
    int prev = 0;
    for (const auto& q : chain_) {
        int s = sgn(q.eval_rational(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++v;
        prev = s;
    }
    return v;
}

long SturmChain::variations_at_plus_infinity() const {
    long v = 0;
    int prev = 0;
    for (const auto& q : chain_) {
        int s = sgn(q.leading());
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++v;
        prev = s;
    }
    return v;
}

long SturmChain::variations_at_minus_infinity() const {
    long v = 0;
    int prev = 0;
    for (const auto& q : chain_) {
        int s = sgn(q.leading());
        if (q.degree() % 2 != 0) s = -s;
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++v;
        prev = s;
    }
    return v;
}

long SturmChain::count_roots(const mpq_class& a, const mpq_class& b) const {
    if (a >= b) return 0;
    return variations(a) - variations(b);
}

long SturmChain::count_real_roots() const {
    return variations_at_minus_infinity() - variations_at_plus_infinity();
}

mpq_class SturmChain::root_bound() const {
    // Cauchy: 1 + max |c_i| / |lc|
    mpz_class m(0);
    for (const auto& c : p_.coefficients()) m = std::max(m, mpz_class(::abs(c)));
    mpq_class b(m);
    b /= mpq_class(::abs(p_.leading()));
    return b + 1;
}

std::vector<std::pair<mpq_class, mpq_class>> SturmChain::isolate_real_roots() const {
    std::vector<std::pair<mpq_class, mpq_class>> out;
    if (p_.degree() == 1) {
        // root = -c0/c1, exact
        mpq_class r(-p_.coeff(0));
        r /= mpq_class(p_.coeff(1));
        r.canonicalize();
        out.emplace_back(r, r);
        return out;
    }
    mpq_class b = root_bound();
    mpq_class lo = -b, hi = b;
    // p(-B) != 0 and p(B) != 0 by strictness of the Cauchy bound.
    struct Seg {
        mpq_class a, b;
        long count;
    };
    std::vector<Seg> stack;
    long total = count_roots(lo, hi);
    if (total > 0) stack.push_back({lo, hi, total});
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        if (s.count == 1) {
            if (sgn(p_.eval_rational(s.b)) == 0) {
                out.emplace_back(s.b, s.b);
            } else {
                out.emplace_back(s.a, s.b);
            }
            continue;
        }
        mpq_class mid = (s.a + s.b) / 2;
        if (sgn(p_.eval_rational(mid)) == 0) {
            // Rational root exactly at mid: emit the point, then carve an
            // interval around it small enough to contain no other root.
            out.emplace_back(mid, mid);
            mpq_class eps = (s.b - s.a) / 4;
            long lc, rc;
            for (;;) {
                lc = count_roots(s.a, mid - eps);
                rc = count_roots(mid + eps, s.b);
                if (lc + rc + 1 == s.count && sgn(p_.eval_rational(mid - eps)) != 0 &&
                    sgn(p_.eval_rational(mid + eps)) != 0)
                    break;
                eps /= 2;
            }
            if (lc > 0) stack.push_back({s.a, mid - eps, lc});
            if (rc > 0) stack.push_back({mid + eps, s.b, rc});
            continue;
        }
        long lc = count_roots(s.a, mid);
        long rc = s.count - lc;
        if (lc > 0) stack.push_back({s.a, mid, lc});
        if (rc > 0) stack.push_back({mid, s.b, rc});
    }
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::pair<mpq_class, mpq_class> SturmChain::refine(const mpq_class& lo,
                                                   const mpq_class& hi, long bits) const {
    mpq_class a = lo, b = hi;
    if (a == b) return {a, b};
    mpq_class target(1);
    target >>= static_cast<unsigned long>(bits);
    // Invariant: exactly one root in (a, b]; p(b) != 0 unless b is the root.
    int sb = sgn(p_.eval_rational(b));
    if (sb == 0) return {b, b};
    int sa = sgn(p_.eval_rational(a));
    if (sa == 0) {
        // Root exactly at left endpoint cannot happen for (a, b] count,
        // unless caller passed a root: treat as point.
        if (count_roots(a, b) == 0) return {a, a};
    }
    if (sa == sb) {
        // No sign change: fall back to Sturm-count bisection.
        while (b - a > target) {
            mpq_class mid = (a + b) / 2;
            if (sgn(p_.eval_rational(mid)) == 0) return {mid, mid};
            if (count_roots(a, mid) == 1)
                b = mid;
            else
                a = mid;
        }
        return {a, b};
    }
    while (b - a > target) {
        mpq_class mid = (a + b) / 2;
        int sm = sgn(p_.eval_rational(mid));
        if (sm == 0) return {mid, mid};
        if (sm == sa)
            a = mid;
        else
            b = mid;
    }
    return {a, b};
}

IntPolynomial trace_polynomial(const IntPolynomial& p) {
    if (!p.is_self_reciprocal() || p.degree() < 2 || p.degree() % 2 != 0)
        throw InvalidInput("trace polynomial requires self-reciprocal even degree");
    size_t e = static_cast<size_t>(p.degree() / 2);
    // C_0 = 2, C_1 = y, C_k = y*C_{k-1} - C_{k-2} with x^k + x^-k = C_k(x + 1/x).
    std::vector<IntPolynomial> C(e + 1);
    C[0] = IntPolynomial::constant(2);
    if (e >= 1) C[1] = IntPolynomial::monomial(1, 1);
    for (size_t k = 2; k <= e; ++k)
        C[k] = sub(mul(IntPolynomial::monomial(1, 1), C[k - 1]), C[k - 2]);
    IntPolynomial t = IntPolynomial::constant(p.coeff(e));
    for (size_t k = 1; k <= e; ++k) t = add(t, scale(C[k], p.coeff(e + k)));
    return t;
}

}  // namespace sparseseries
