#include "sparseseries/sequence.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "sparseseries/errors.hpp"

namespace sparseseries {

namespace {

mpz_class ceil_q(const mpq_class& q) {
    mpz_class out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

mpz_class floor_q(const mpq_class& q) {
    mpz_class out;
    mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

// q^e for integer e of either sign, from positive base enclosures.
Interval signed_power(const Interval& q, const Interval& qinv, long e) {
    if (e >= 0) return pow_ui(q, static_cast<unsigned long>(e));
    return pow_ui(qinv, static_cast<unsigned long>(-e));
}

Interval principal_of(const AlgebraicField& f, const FieldElement& c, long prec) {
    return f.principal_value(c, prec);
}

Interval abs_principal_of(const AlgebraicField& f, const FieldElement& c, long prec) {
    return abs(f.principal_value(c, prec));
}

Interval house_of(const AlgebraicField& f, const FieldElement& c, long prec) {
    return f.house(c, prec);
}

void require_majorant_usable(const CoefficientSequence& seq) {
    const auto& m = seq.majorant();
    if (seq.complete_below_horizon() || m.M == 0) return;
    if (!seq.field()->q_certainly_greater(m.r))
        throw MajorantTooWeak("tail majorant growth r = " + m.r.get_str() +
                              " is not certified below q");
}

// Upper bound of M * sum_{m >= H0} r^m q^{E-m} = M r^H0 q^{E-H0} / (1 - r/q),
// the geometric tail of house-bounded coefficients at and beyond H0.
Interval geometric_tail_upper(const CoefficientSequence& seq, std::uint64_t H0, long E,
                              const Interval& q, const Interval& qinv, mpfr_prec_t wp) {
    const auto& mj = seq.majorant();
    if (seq.complete_below_horizon() || mj.M == 0)
        return Interval::exact(0, wp);
    Interval M = Interval::of_rational(mj.M, wp);
    Interval r = Interval::of_rational(mj.r, wp);
    Interval ratio = mul(r, qinv);  // r/q < 1 certified by require_majorant_usable
    Interval one = Interval::exact(1, wp);
    Interval head = mul(M, mul(pow_ui(r, H0), signed_power(q, qinv, E - static_cast<long>(H0))));
    return div(head, sub(one, ratio));
}

}  // namespace

SupportSet::SupportSet(std::vector<std::uint64_t> elements, std::uint64_t horizon,
                       std::string generator_id)
    : elements_(std::move(elements)), horizon_(horizon), generator_id_(std::move(generator_id)) {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (elements_[i] < 1 || elements_[i] >= horizon_)
            throw InvalidInput("support element out of [1, horizon)");
        if (i > 0 && elements_[i] <= elements_[i - 1])
            throw InvalidInput("support elements must be strictly increasing");
    }
}

SupportSet SupportSet::explicit_set(std::vector<std::uint64_t> elements,
                                    std::uint64_t horizon) {
    return SupportSet(std::move(elements), horizon, "explicit");
}

bool SupportSet::contains(std::uint64_t n) const {
    return std::binary_search(elements_.begin(), elements_.end(), n);
}

std::uint64_t SupportSet::count_below(const mpq_class& x) const {
    mpz_class bound = ceil_q(x);  // n < x  <=>  n <= ceil(x) - 1
    if (bound <= 1) return 0;
    if (!bound.fits_ulong_p())
        return elements_.size();
    std::uint64_t b = bound.get_ui();  // n <= b - 1  <=>  n < b
    return static_cast<std::uint64_t>(
        std::lower_bound(elements_.begin(), elements_.end(), b) - elements_.begin());
}

SupportSet power_support(const mpq_class& alpha, std::uint64_t H) {
    if (alpha <= 1) throw InvalidInput("power_support needs alpha > 1");
    mpz_class p = alpha.get_num(), qd = alpha.get_den();
    if (!p.fits_ulong_p() || !qd.fits_ulong_p())
        throw InvalidInput("power_support exponent too large");
    unsigned long pe = p.get_ui(), qe = qd.get_ui();
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1;; ++n) {
        mpz_class t;
        mpz_class base(static_cast<unsigned long>(n));
        mpz_pow_ui(t.get_mpz_t(), base.get_mpz_t(), pe);
        mpz_class root;
        mpz_root(root.get_mpz_t(), t.get_mpz_t(), qe);  // floor((n^p)^(1/q))
        if (root >= static_cast<long>(1)) {
            if (!root.fits_ulong_p() || root.get_ui() >= H) break;
            std::uint64_t v = root.get_ui();
            if (out.empty() || out.back() != v) out.push_back(v);
        }
    }
    return SupportSet(std::move(out), H, "power:" + alpha.get_str());
}

SupportSet sumset(const SupportSet& A, const SupportSet& B, std::uint64_t H) {
    if (A.size() == 0 || B.size() == 0)
        throw InvalidInput("sumset requires non-empty sets");
    std::vector<bool> hit(static_cast<std::size_t>(H), false);
    for (std::uint64_t a : A.elements()) {
        if (a >= H) break;
        for (std::uint64_t b : B.elements()) {
            std::uint64_t s = a + b;
            if (s >= H) break;
            hit[static_cast<std::size_t>(s)] = true;
        }
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = 1; s < H; ++s)
        if (hit[static_cast<std::size_t>(s)]) out.push_back(s);
    return SupportSet(std::move(out), H,
                      "sumset(" + A.generator_id() + "," + B.generator_id() + ")");
}

CoefficientSequence CoefficientSequence::from_entries(FieldPtr field, std::uint64_t H,
                                                      std::vector<Entry> entries,
                                                      TailMajorant majorant, bool complete) {
    if (!field) throw InvalidInput("sequence needs a field");
    if (H < 2) throw InvalidInput("sequence horizon must be >= 2");
    if (majorant.M < 0 || majorant.r < 1)
        throw InvalidInput("majorant needs M >= 0 and r >= 1");
    Interval max_house = Interval::exact(0, 96);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto& [n, c] = entries[i];
        if (n < 1 || n >= H) throw InvalidInput("coefficient index out of [1, horizon)");
        if (i > 0 && n <= entries[i - 1].first)
            throw InvalidInput("coefficient indices must be strictly increasing");
        if (c.is_zero()) throw InvalidInput("stored coefficients must be nonzero");
        if (c.degree() != field->degree())
            throw InvalidInput("coefficient does not belong to the field");
        max_house = max_of(max_house, house_of(*field, c, 64));
    }
    // house(c(n)) <= M r^n: with r >= 1 it suffices that max house <= M;
    // otherwise certify entry by entry.
    if (!entries.empty()) {
        bool shortcut = mpfr_cmp_q(max_house.hi(), majorant.M.get_mpq_t()) <= 0;
        if (!shortcut) {
            Interval r = Interval::of_rational(majorant.r, 128);
            Interval M = Interval::of_rational(majorant.M, 128);
            for (const auto& [n, c] : entries) {
                Interval bound = mul(M, pow_ui(r, n));
                Interval h = house_of(*field, c, 96);
                if (!(mpfr_cmp(h.hi(), bound.lo()) <= 0))
                    throw InvalidInput("tail majorant does not dominate coefficient at n = " +
                                       std::to_string(n));
            }
        }
    }
    return CoefficientSequence(std::move(field), H, std::move(entries), std::move(majorant),
                               complete);
}

CoefficientSequence CoefficientSequence::zero(FieldPtr field, std::uint64_t H) {
    return from_entries(std::move(field), H, {}, TailMajorant{0, 1, false, ""}, true);
}

CoefficientSequence CoefficientSequence::indicator(FieldPtr field, const SupportSet& support,
                                                   std::uint64_t H, bool complete) {
    if (H < 2) throw InvalidInput("sequence horizon must be >= 2");
    std::vector<Entry> entries;
    entries.reserve(support.size());
    FieldElement one = FieldElement::from_integer(1, field->degree());
    for (std::uint64_t n : support.elements()) {
        if (n >= H) break;
        entries.emplace_back(n, one);
    }
    return from_entries(std::move(field), H, std::move(entries),
                        TailMajorant{1, 1, false, "indicator"}, complete);
}

std::optional<FieldElement> CoefficientSequence::coefficient(std::uint64_t n) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                               [](const Entry& e, std::uint64_t v) { return e.first < v; });
    if (it == entries_.end() || it->first != n) return std::nullopt;
    return it->second;
}

std::vector<std::uint64_t> CoefficientSequence::support() const {
    std::vector<std::uint64_t> s;
    s.reserve(entries_.size());
    for (const auto& [n, c] : entries_) s.push_back(n);
    return s;
}

std::uint64_t CoefficientSequence::support_count_below(const mpq_class& x) const {
    mpz_class bound = ceil_q(x);
    if (bound <= 1) return 0;
    if (!bound.fits_ulong_p()) return entries_.size();
    std::uint64_t b = bound.get_ui();
    auto it = std::lower_bound(entries_.begin(), entries_.end(), b,
                               [](const Entry& e, std::uint64_t v) { return e.first < v; });
    return static_cast<std::uint64_t>(it - entries_.begin());
}

std::uint64_t CoefficientSequence::last_support() const {
    if (entries_.empty()) throw EmptySupport("sequence has no support");
    return entries_.back().first;
}

bool CoefficientSequence::certainly_nonnegative(long precision_bits) const {
    for (const auto& [n, c] : entries_) {
        if (c.is_rational_integer()) {
            if (c.rational_value() < 0) return false;
            continue;
        }
        if (!field_->principal_value(c, precision_bits).certainly_nonnegative())
            return false;
    }
    return true;
}

bool CoefficientSequence::rational_integer_coefficients() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const Entry& e) { return e.second.is_rational_integer(); });
}

Interval CoefficientSequence::sum_house_below(const mpq_class& x, long precision_bits) const {
    Interval acc = Interval::exact(0, precision_bits + 32);
    mpq_class xx(x);
    for (const auto& [n, c] : entries_) {
        if (mpq_class(static_cast<unsigned long>(n)) >= xx) break;
        acc = add(acc, house_of(*field_, c, precision_bits));
    }
    return acc;
}

Interval CoefficientSequence::sum_abs_principal_below(const mpq_class& x,
                                                      long precision_bits) const {
    Interval acc = Interval::exact(0, precision_bits + 32);
    mpq_class xx(x);
    for (const auto& [n, c] : entries_) {
        if (mpq_class(static_cast<unsigned long>(n)) >= xx) break;
        acc = add(acc, abs_principal_of(*field_, c, precision_bits));
    }
    return acc;
}

Interval CoefficientSequence::sum_principal_below(const mpq_class& x,
                                                  long precision_bits) const {
    Interval acc = Interval::exact(0, precision_bits + 32);
    mpq_class xx(x);
    for (const auto& [n, c] : entries_) {
        if (mpq_class(static_cast<unsigned long>(n)) >= xx) break;
        acc = add(acc, principal_of(*field_, c, precision_bits));
    }
    return acc;
}

void CoefficientSequence::write_jsonl(std::ostream& os) const {
    nlohmann::json header;
    header["type"] = "header";
    header["schema"] = "sparse-series-seq/1";
    header["minpoly"] = field_->minpoly().to_coeff_string();
    header["horizon"] = horizon_;
    header["majorant"] = {{"M", majorant_.M.get_str()},
                          {"r", majorant_.r.get_str()},
                          {"asserted_beyond", majorant_.asserted_beyond},
                          {"note", majorant_.note}};
    header["complete"] = complete_;
    os << header.dump() << "\n";
    for (const auto& [n, c] : entries_) {
        nlohmann::json rec;
        rec["n"] = n;
        nlohmann::json coords = nlohmann::json::array();
        for (const auto& v : c.coords()) {
            if (v.fits_slong_p())
                coords.push_back(v.get_si());
            else
                coords.push_back(v.get_str());
        }
        rec["coords"] = coords;
        os << rec.dump() << "\n";
    }
}

CoefficientSequence CoefficientSequence::read_jsonl(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidInput("empty sequence stream");
    nlohmann::json header = nlohmann::json::parse(line);
    if (header.value("type", "") != "header")
        throw InvalidInput("sequence stream must start with a header record");
    AlgebraicField::Options opt;
    opt.assume_irreducible = true;  // the field was validated when serialized
    FieldPtr field =
        AlgebraicField::build(parse_monic_polynomial(header.at("minpoly").get<std::string>()),
                              opt);
    std::uint64_t H = header.at("horizon").get<std::uint64_t>();
    TailMajorant mj;
    mj.M = mpq_class(header.at("majorant").at("M").get<std::string>());
    mj.r = mpq_class(header.at("majorant").at("r").get<std::string>());
    mj.asserted_beyond = header.at("majorant").value("asserted_beyond", false);
    mj.note = header.at("majorant").value("note", "");
    bool complete = header.value("complete", false);
    std::vector<Entry> entries;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        nlohmann::json rec = nlohmann::json::parse(line);
        std::uint64_t n = rec.at("n").get<std::uint64_t>();
        std::vector<mpz_class> coords;
        for (const auto& v : rec.at("coords")) {
            if (v.is_string())
                coords.emplace_back(v.get<std::string>());
            else
                coords.push_back(mpz_class(v.get<long>()));
        }
        entries.emplace_back(n, FieldElement(std::move(coords)));
    }
    return from_entries(std::move(field), H, std::move(entries), std::move(mj), complete);
}

CoefficientSequence fiber_sequence(const FiberWeight& f, const ArithTable& g,
                                   const FieldPtr& field, std::uint64_t H) {
    if (f.constant < 0) throw InvalidInput("fiber weight must be non-negative");
    mpz_class need = required_value_set_horizon(g.function_id(), H);
    if (mpz_class(static_cast<unsigned long>(g.horizon())) < need)
        throw HorizonInsufficient("g table cannot cover all preimages below " +
                                      std::to_string(H),
                                  need);
    if (g.function_id() == ArithFunction::Phi) {
        std::uint64_t start = g.horizon() - g.horizon() / 10;
        for (std::uint64_t m = std::max<std::uint64_t>(start, 1); m < g.horizon(); ++m)
            if (g.values()[static_cast<std::size_t>(m)] < H)
                throw HorizonInsufficient(
                    "phi preimage policy violated in the top decile at m = " +
                        std::to_string(m),
                    mpz_class(static_cast<unsigned long>(g.horizon())) * 2);
    }

    std::map<std::uint64_t, mpz_class> acc;
    for (std::uint64_t m = 1; m < g.horizon(); ++m) {
        std::uint64_t n = g.values()[static_cast<std::size_t>(m)];
        if (n < 1 || n >= H) continue;
        mpz_class w = f(m);
        if (w != 0) acc[n] += w;
    }
    std::vector<CoefficientSequence::Entry> entries;
    mpq_class maxval(0);
    for (auto& [n, v] : acc) {
        if (v == 0) continue;
        if (mpq_class(v) > maxval) maxval = mpq_class(v);
        entries.emplace_back(n, FieldElement::from_integer(v, field->degree()));
    }
    TailMajorant mj;
    mj.M = maxval;
    mj.r = mpq_class(mpz_class((1 << 20) + 1), mpz_class(1 << 20));
    mj.asserted_beyond = !entries.empty();
    mj.note = "fiber growth bound verified below the horizon only";
    bool complete = entries.empty();
    return CoefficientSequence::from_entries(field, H, std::move(entries), std::move(mj),
                                             complete);
}

CoefficientSequence convolution_power(const CoefficientSequence& a, unsigned j,
                                      std::uint64_t H,
                                      std::optional<std::size_t> coefficient_bit_cap) {
    if (j < 1) throw InvalidInput("convolution power needs j >= 1");
    if (!a.rational_integer_coefficients() || !a.certainly_nonnegative())
        throw InvalidInput("convolution power needs non-negative rational-integer "
                           "coefficients");
    if (H < 2 || H > a.horizon())
        throw InvalidInput("convolution horizon must be within the input horizon");

    std::map<std::uint64_t, mpz_class> base;
    for (const auto& [n, c] : a.entries()) base[n] = c.rational_value();

    std::map<std::uint64_t, mpz_class> cur = base;
    for (unsigned step = 2; step <= j; ++step) {
        std::map<std::uint64_t, mpz_class> next;
        for (const auto& [u, cu] : cur) {
            for (const auto& [v, cv] : base) {
                std::uint64_t s = u + v;
                if (s >= H) break;
                next[s] += cu * cv;
            }
        }
        cur = std::move(next);
    }

    std::vector<CoefficientSequence::Entry> entries;
    mpq_class maxval(0);
    for (auto& [n, v] : cur) {
        if (v == 0) continue;
        if (coefficient_bit_cap &&
            mpz_sizeinbase(v.get_mpz_t(), 2) > *coefficient_bit_cap)
            throw OverflowPolicy("convolution coefficient exceeds the configured bit cap");
        if (mpq_class(v) > maxval) maxval = mpq_class(v);
        entries.emplace_back(n, FieldElement::from_integer(v, a.field()->degree()));
    }

    const auto& mj_a = a.majorant();
    TailMajorant mj;
    // Product rule with the composition-count polynomial folded into M over
    // the finite horizon: b_j(n) <= n^(j-1) M^j r^n <= H^(j-1) M^j r^n.
    mpq_class Mj(1);
    for (unsigned t = 0; t < j; ++t) Mj *= mj_a.M;
    for (unsigned t = 1; t < j; ++t) Mj *= mpq_class(static_cast<unsigned long>(H));
    if (Mj < maxval) Mj = maxval;
    mj.M = Mj;
    mj.r = mj_a.r;
    // b_j vanishes at and beyond H only when a is known complete and even
    // the largest j-fold sum of its support stays below H.
    bool complete = a.complete_below_horizon() &&
                    (a.is_zero() || static_cast<unsigned __int128>(a.last_support()) * j <
                                        static_cast<unsigned __int128>(H));
    mj.asserted_beyond = !complete && !entries.empty();
    mj.note = complete ? "" : "polynomial factor folded into M below the horizon only";
    return CoefficientSequence::from_entries(a.field(), H, std::move(entries), std::move(mj),
                                             complete);
}

CoefficientSequence sum_sequences(const CoefficientSequence& a,
                                  const CoefficientSequence& b) {
    if (a.field()->minpoly().poly() != b.field()->minpoly().poly())
        throw InvalidInput("sequence sum requires matching fields");
    std::uint64_t H = std::min(a.horizon(), b.horizon());
    std::vector<CoefficientSequence::Entry> entries;
    auto ia = a.entries().begin(), ea = a.entries().end();
    auto ib = b.entries().begin(), eb = b.entries().end();
    const AlgebraicField& f = *a.field();
    while (ia != ea || ib != eb) {
        std::uint64_t na = (ia != ea) ? ia->first : UINT64_MAX;
        std::uint64_t nb = (ib != eb) ? ib->first : UINT64_MAX;
        std::uint64_t n = std::min(na, nb);
        if (n >= H) break;
        FieldElement c = f.zero();
        if (na == n) c = f.add(c, (ia++)->second);
        if (nb == n) c = f.add(c, (ib++)->second);
        if (!c.is_zero()) entries.emplace_back(n, c);
    }
    TailMajorant mj;
    mj.M = a.majorant().M + b.majorant().M;
    mj.r = std::max(a.majorant().r, b.majorant().r);
    mj.asserted_beyond = a.majorant().asserted_beyond || b.majorant().asserted_beyond;
    bool complete = a.complete_below_horizon() && b.complete_below_horizon() &&
                    a.horizon() == b.horizon();
    return CoefficientSequence::from_entries(a.field(), H, std::move(entries), std::move(mj),
                                             complete);
}

namespace {

// Shared core of the xi evaluators: sum over stored m >= N of w(m) q^(N-m)
// plus the majorant tail, where w is the signed or absolute principal value.
Interval xi_eval(const CoefficientSequence& seq, std::uint64_t N, long precision_bits,
                 bool absolute) {
    require_majorant_usable(seq);
    long wp = precision_bits + 96;
    const AlgebraicField& f = *seq.field();
    for (int attempt = 0; attempt < 6; ++attempt, wp *= 2) {
        mpfr_prec_t bp = static_cast<mpfr_prec_t>(wp);
        Interval q = f.principal_root(wp);
        Interval qinv = inv(q);
        Interval acc = Interval::exact(0, bp);
        const auto& entries = seq.entries();
        auto it = std::lower_bound(
            entries.begin(), entries.end(), N,
            [](const CoefficientSequence::Entry& e, std::uint64_t v) { return e.first < v; });
        for (; it != entries.end(); ++it) {
            Interval w = absolute ? abs_principal_of(f, it->second, wp)
                                  : principal_of(f, it->second, wp);
            acc = add(acc, mul(w, pow_ui(qinv, it->first - N)));
        }
        std::uint64_t H0 = std::max<std::uint64_t>(N, seq.horizon());
        Interval tail = geometric_tail_upper(seq, H0, static_cast<long>(N), q, qinv, bp);
        Interval spread = absolute
                              ? Interval::hull(Interval::exact(0, bp), tail)
                              : Interval::hull(neg(tail), tail);
        acc = add(acc, spread);
        if (acc.width_leq_pow2(precision_bits) || attempt == 5) return acc;
    }
    return Interval::exact(0, 64);  // unreachable
}

}  // namespace

Interval xi_tail(const CoefficientSequence& seq, std::uint64_t N, long precision_bits) {
    if (N < 1) throw InvalidInput("xi index must be >= 1");
    return xi_eval(seq, N, precision_bits, false);
}

Interval xi_tail_abs(const CoefficientSequence& seq, std::uint64_t N, long precision_bits) {
    if (N < 1) throw InvalidInput("xi index must be >= 1");
    return xi_eval(seq, N, precision_bits, true);
}

namespace {

std::vector<Interval> xi_profile_impl(const CoefficientSequence& seq, std::uint64_t N_max,
                                      long precision_bits, bool absolute) {
    require_majorant_usable(seq);
    if (N_max < 1) return {};
    long wp = precision_bits + 96;
    const AlgebraicField& f = *seq.field();
    mpfr_prec_t bp = static_cast<mpfr_prec_t>(wp);
    Interval qinv = inv(f.principal_root(wp));
    Interval top = xi_eval(seq, N_max + 1, precision_bits + 16, absolute);
    std::vector<Interval> out(static_cast<std::size_t>(N_max));
    Interval cur = top;
    auto it = seq.entries().rbegin();
    // skip entries at or above N_max + 1 (already inside `top`)
    while (it != seq.entries().rend() && it->first > N_max) ++it;
    for (std::uint64_t N = N_max; N >= 1; --N) {
        cur = mul(cur, qinv);
        if (it != seq.entries().rend() && it->first == N) {
            Interval w = absolute ? abs_principal_of(f, it->second, wp)
                                  : principal_of(f, it->second, wp);
            cur = add(cur, w);
            ++it;
        }
        out[static_cast<std::size_t>(N - 1)] = cur;
    }
    return out;
}

}  // namespace

std::vector<Interval> xi_abs_profile(const CoefficientSequence& seq, std::uint64_t N_max,
                                     long precision_bits) {
    return xi_profile_impl(seq, N_max, precision_bits, true);
}

std::vector<Interval> xi_signed_profile(const CoefficientSequence& seq, std::uint64_t N_max,
                                        long precision_bits) {
    return xi_profile_impl(seq, N_max, precision_bits, false);
}

Interval r_statistic(const CoefficientSequence& seq, const mpq_class& X, const mpq_class& z,
                     long precision_bits) {
    RDecomposition d = r_decomposition_check(seq, 1, X, z, precision_bits);
    return d.R;
}

RDecomposition r_decomposition_check(const CoefficientSequence& seq, const mpq_class& eta,
                                     const mpq_class& x, const mpq_class& z,
                                     long precision_bits) {
    if (eta <= 0 || eta > 1) throw InvalidInput("eta must be in (0, 1]");
    if (z < 0) throw InvalidInput("z must be >= 0");
    if (mpq_class(static_cast<unsigned long>(seq.horizon())) < x)
        throw OutOfHorizon("x exceeds the sequence horizon");
    require_majorant_usable(seq);

    long wp = precision_bits + 96;
    mpfr_prec_t bp = static_cast<mpfr_prec_t>(wp);
    const AlgebraicField& f = *seq.field();
    Interval q = f.principal_root(wp);
    Interval qinv = inv(q);
    Interval invq1 = inv(sub(q, Interval::exact(1, bp)));

    mpz_class nmax_z = ceil_q(eta * x) - 1;  // outer n ranges over [1, nmax]
    RDecomposition out{Interval::exact(0, bp), Interval::exact(0, bp),
                       Interval::exact(0, bp)};
    if (nmax_z < 1) return out;
    long nmax = nmax_z.get_si();
    mpz_class jmin_z = ceil_q(z);
    if (jmin_z < 0) jmin_z = 0;
    mpz_class mcap(static_cast<unsigned long>(seq.horizon()));
    if (jmin_z > mcap + 1) jmin_z = mcap + 1;  // beyond every stored index
    long jmin = jmin_z.get_si();

    Interval r1 = Interval::exact(0, bp), r2 = Interval::exact(0, bp);
    for (const auto& [m_u, c] : seq.entries()) {
        long m = static_cast<long>(m_u);
        long U = std::min<long>(nmax, m - jmin);
        if (U < 1) continue;
        // sum_{n=1}^{U} q^(n-m) = (q^(U+1-m) - q^(1-m)) / (q-1)
        Interval window = mul(sub(signed_power(q, qinv, U + 1 - m), signed_power(q, qinv, 1 - m)),
                              invq1);
        Interval term = mul(abs_principal_of(f, c, wp), window);
        if (mpq_class(static_cast<unsigned long>(m_u)) < x)
            r1 = add(r1, term);
        else
            r2 = add(r2, term);
    }
    // Beyond-horizon mass: every m >= H lands in R2 when x <= H (enforced
    // above via the horizon check), bounded by the geometric majorant with
    // window sum <= q^(nmax+1-m)/(q-1).
    Interval tail = mul(geometric_tail_upper(seq, seq.horizon(), nmax + 1, q, qinv, bp),
                        invq1);
    r2 = add(r2, Interval::hull(Interval::exact(0, bp), tail));

    out.R1 = r1;
    out.R2 = r2;
    out.R = add(r1, r2);
    return out;
}

TailStats stats(const CoefficientSequence& seq, const mpq_class& x, const mpq_class& z,
                const mpq_class& eta, long precision_bits) {
    if (mpq_class(static_cast<unsigned long>(seq.horizon())) < x)
        throw OutOfHorizon("x exceeds the sequence horizon");
    if (eta <= 0 || eta > 1) throw InvalidInput("eta must be in (0, 1]");
    TailStats out;
    out.x = x;
    out.z = z;
    out.eta = eta;
    out.N_count = seq.support_count_below(x);
    out.S_value = seq.sum_house_below(x, precision_bits);
    out.R_value = r_statistic(seq, eta * x, z, precision_bits);
    return out;
}

}  // namespace sparseseries
