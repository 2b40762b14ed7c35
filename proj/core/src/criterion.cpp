#include "sparseseries/criterion.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "sparseseries/errors.hpp"
#include "sparseseries/parallel.hpp"

namespace sparseseries {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::PassTrend: return "PASS-trend";
        case Verdict::FailTrend: return "FAIL-trend";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

CheckpointSchedule CheckpointSchedule::geometric(const mpq_class& first,
                                                 const mpq_class& last,
                                                 const mpq_class& factor) {
    if (first < 1 || last < first || factor <= 1)
        throw InvalidInput("geometric schedule needs 1 <= first <= last, factor > 1");
    CheckpointSchedule s;
    for (mpq_class v = first; v <= last; v *= factor) s.x.push_back(v);
    return s;
}

void CheckpointSchedule::validate() const {
    if (x.empty()) throw InvalidInput("schedule needs at least one checkpoint");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 1) throw InvalidInput("checkpoints must be >= 1");
        if (i && x[i] <= x[i - 1])
            throw InvalidInput("checkpoints must be strictly increasing");
    }
    if (!y.empty() && y.size() != x.size())
        throw InvalidInput("y schedule length must match x");
    for (const auto& v : y)
        if (v < 1) throw InvalidInput("y entries must be >= 1");
    if (!z.empty() && z.size() != x.size())
        throw InvalidInput("z schedule length must match x");
    for (const auto& v : z)
        if (v < 1) throw InvalidInput("z entries must be >= 1");
    if (eta <= 0 || eta > 1) throw InvalidInput("eta must be in (0, 1]");
    if (interlace_delta && *interlace_delta <= 1)
        throw InvalidInput("Delta must be > 1");
    if (interlace_l && *interlace_l <= 0) throw InvalidInput("L must be positive");
}

namespace {

bool leq_certified(const Interval& a, const Interval& b) {
    return mpfr_cmp(a.hi(), b.lo()) <= 0;
}

bool less_certified(const Interval& a, const Interval& b) {
    return mpfr_cmp(a.hi(), b.lo()) < 0;
}

Verdict o_verdict(const std::vector<Interval>& r, const TrendRule& rule) {
    if (r.size() < 2) return Verdict::Inconclusive;
    const Interval& first = r.front();
    const Interval& last = r.back();
    Interval half = mul(first, Interval::of_rational(rule.halving, 96));
    std::size_t decreases = 0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
        if (less_certified(r[i + 1], r[i])) ++decreases;
    std::size_t needed = (r.size() - 1 + 1) / 2;  // ceil((m-1)/2)
    if (leq_certified(last, half) && decreases >= needed) return Verdict::PassTrend;
    if (mpfr_cmp(last.lo(), first.hi()) >= 0) return Verdict::FailTrend;
    return Verdict::Inconclusive;
}

Verdict big_o_verdict(const std::vector<Interval>& r, const TrendRule& rule) {
    bool all_below = true;
    for (const auto& v : r) {
        if (v.certainly_greater(rule.big_o_cap)) return Verdict::FailTrend;
        if (!(mpfr_cmp_q(v.hi(), rule.big_o_cap.get_mpq_t()) <= 0)) all_below = false;
    }
    return all_below ? Verdict::PassTrend : Verdict::Inconclusive;
}

struct ResolvedSchedule {
    std::vector<mpq_class> x;
    std::vector<mpq_class> y;
    std::vector<mpq_class> z_exact;  // empty when z was derived as intervals
    std::vector<Interval> z;
    mpq_class eta;
};

ResolvedSchedule resolve_schedule(const CheckpointSchedule& s, const CoefficientSequence& a,
                                  const CoefficientSequence& b, bool need_exact_z) {
    s.validate();
    ResolvedSchedule r;
    r.x = s.x;
    r.y = s.y.empty() ? s.x : s.y;
    r.eta = s.eta;
    if (!s.z.empty()) {
        r.z_exact = s.z;
        for (const auto& v : s.z) r.z.push_back(Interval::of_rational(v, 128));
    } else if (s.theorem_a_z) {
        if (need_exact_z)
            throw InvalidInput("this checker needs an explicit rational z schedule");
        for (const auto& xi : s.x) {
            mpq_class denom(std::max<std::uint64_t>(
                1, std::max(a.support_count_below(xi), b.support_count_below(xi))));
            mpq_class u = xi / denom;
            r.z.push_back(sqrt(Interval::of_rational(u, 128)));
        }
    } else if (s.z_loglog_delta) {
        if (need_exact_z)
            throw InvalidInput("this checker needs an explicit rational z schedule");
        if (*s.z_loglog_delta <= 0) throw InvalidInput("loglog z rule needs delta > 0");
        Interval logq = log_natural(a.field()->principal_root(128));
        Interval mu = mul(Interval::of_rational(2 + *s.z_loglog_delta, 128), inv(logq));
        Interval one = Interval::exact(1, 128);
        for (const auto& xi : s.x) {
            Interval xv = Interval::of_rational(xi, 128);
            if (xi > 3) {
                r.z.push_back(max_of(one, mul(mu, log_natural(log_natural(xv)))));
            } else {
                r.z.push_back(one);
            }
        }
    } else {
        throw InvalidInput("schedule needs z entries (or the Theorem-A derivation)");
    }
    return r;
}

void require_checker_inputs(const CoefficientSequence& a, const CoefficientSequence& b) {
    if (a.field()->minpoly().poly() != b.field()->minpoly().poly())
        throw InvalidInput("sequences must live in the same field");
    if (a.is_zero())
        throw InvalidInput("the main sequence needs infinite support; it is empty");
    if (!a.certainly_nonnegative())
        throw InvalidInput("the main sequence must be non-negative");
}

ConditionRow row_x_to_infinity(const ResolvedSchedule& rs) {
    ConditionRow row;
    row.condition_id = "i";
    row.description = "x_n -> infinity (schedule metadata)";
    row.checkpoints = rs.x;
    for (const auto& v : rs.x) row.ratios.push_back(Interval::of_rational(v, 64));
    row.verdict = (rs.x.size() >= 2) ? Verdict::PassTrend : Verdict::Inconclusive;
    if (rs.x.size() < 2) row.note = "single checkpoint";
    return row;
}

ConditionRow row_house_sum(const CoefficientSequence& a, const CoefficientSequence& b,
                           const ResolvedSchedule& rs, const TrendRule& rule,
                           long prec) {
    ConditionRow row;
    row.condition_id = "ii";
    row.description = "S_a(x), S_b(x) = O(y)";
    row.checkpoints = rs.x;
    for (std::size_t i = 0; i < rs.x.size(); ++i) {
        Interval s = max_of(a.sum_house_below(rs.x[i], prec), b.sum_house_below(rs.x[i], prec));
        row.ratios.push_back(mul(s, Interval::of_rational(1 / rs.y[i], prec)));
    }
    row.verdict = big_o_verdict(row.ratios, rule);
    return row;
}

ConditionRow row_sparsity(const CoefficientSequence& a, const CoefficientSequence& b,
                          const ResolvedSchedule& rs, const TrendRule& rule) {
    ConditionRow row;
    row.condition_id = "iii";
    row.description = "#N_a(x), #N_b(x) = o(x/z)";
    row.checkpoints = rs.x;
    for (std::size_t i = 0; i < rs.x.size(); ++i) {
        std::uint64_t count =
            std::max(a.support_count_below(rs.x[i]), b.support_count_below(rs.x[i]));
        mpq_class scale(static_cast<unsigned long>(count));
        scale /= rs.x[i];
        row.ratios.push_back(mul(rs.z[i], Interval::of_rational(scale, 96)));
    }
    row.verdict = o_verdict(row.ratios, rule);
    return row;
}

mpq_class mpq_pow_ui(const mpq_class& base, unsigned long e) {
    mpq_class out(1);
    for (unsigned long i = 0; i < e; ++i) out *= base;
    return out;
}

ConditionRow row_average_decay(const CoefficientSequence& a, const CoefficientSequence& b,
                               const ResolvedSchedule& rs, const TrendRule& rule,
                               long prec) {
    ConditionRow row;
    row.condition_id = "iv";
    row.description = "R_a(eta x, z), R_b(eta x, z) = o(x / y^(d-1))";
    row.checkpoints = rs.x;
    unsigned long dm1 = static_cast<unsigned long>(a.field()->degree() - 1);
    for (std::size_t i = 0; i < rs.x.size(); ++i) {
        Interval ra = r_statistic(a, rs.eta * rs.x[i], rs.z_exact[i], prec);
        Interval rb = r_statistic(b, rs.eta * rs.x[i], rs.z_exact[i], prec);
        mpq_class scale = mpq_pow_ui(rs.y[i], dm1) / rs.x[i];
        row.ratios.push_back(mul(max_of(ra, rb), Interval::of_rational(scale, prec)));
    }
    row.verdict = o_verdict(row.ratios, rule);
    return row;
}

ConditionRow row_interlacing(const CoefficientSequence& a, const CoefficientSequence& b,
                             const CheckpointSchedule& s, CriterionReport& report) {
    ConditionRow row;
    row.condition_id = "v";
    row.description = "interlacing of N_a within gaps of N_b";
    auto bsup = b.support();
    if (bsup.size() < 2) {
        row.vacuous = true;
        row.verdict = Verdict::PassTrend;
        row.note = "N_b has fewer than two elements at this horizon";
        return row;
    }
    if (!s.interlace_delta || !s.interlace_l) {
        row.verdict = Verdict::Inconclusive;
        row.note = "Delta and L not supplied";
        return row;
    }
    std::uint64_t horizon = std::min(a.horizon(), b.horizon());
    SupportSet A(a.support(), a.horizon(), "sequence-a");
    SupportSet B(std::move(bsup), b.horizon(), "sequence-b");
    InterlacingResult res =
        check_interlacing(A, B, *s.interlace_delta, *s.interlace_l, horizon);
    row.verdict = res.pass ? Verdict::PassTrend : Verdict::FailTrend;
    row.note = "pairs checked: " + std::to_string(res.pairs_checked);
    if (!res.violations.empty()) {
        const auto& v = res.violations.front();
        row.note += "; first violation m=" + std::to_string(v.m) +
                    " m+=" + std::to_string(v.m_plus) + " mu=" + v.mu.get_str();
    }
    report.interlacing_violations = res.violations;
    return row;
}

// max over the window of house(coef(n))^(1/n); the window is the upper half
// of the horizon, falling back to the full support when empty there.
Interval rho_hat(const CoefficientSequence& a, const CoefficientSequence& b, long prec) {
    Interval rho = Interval::exact(1, prec);
    std::uint64_t H = std::max(a.horizon(), b.horizon());
    for (int pass = 0; pass < 2; ++pass) {
        std::uint64_t start = pass == 0 ? std::max<std::uint64_t>(2, H / 2) : 1;
        bool seen = false;
        for (const CoefficientSequence* seq : {&a, &b}) {
            if (seq->rational_integer_coefficients()) {
                std::map<mpz_class, std::uint64_t> first_n;
                for (const auto& [n, c] : seq->entries()) {
                    if (n < start) continue;
                    seen = true;
                    mpz_class v = ::abs(c.rational_value());
                    auto it = first_n.find(v);
                    if (it == first_n.end()) first_n.emplace(v, n);
                }
                for (const auto& [v, n] : first_n) {
                    if (v <= 1) continue;  // 1^(1/n) = 1 is the baseline
                    rho = max_of(rho, root_ui(Interval::exact(v, prec),
                                              static_cast<unsigned long>(n)));
                }
            } else {
                for (const auto& [n, c] : seq->entries()) {
                    if (n < start) continue;
                    seen = true;
                    rho = max_of(rho, root_ui(seq->field()->house(c, prec),
                                              static_cast<unsigned long>(n)));
                }
            }
        }
        if (seen) break;
    }
    return rho;
}

ConditionRow row_pointwise(const CoefficientSequence& a, const CoefficientSequence& b,
                           const ResolvedSchedule& rs, const Interval& q,
                           const std::string& id, Interval* rho_out, long prec) {
    ConditionRow row;
    row.condition_id = id;
    row.description = "rho = limsup max(house a(n), house b(n))^(1/n) < q";
    Interval rho = rho_hat(a, b, prec);
    row.checkpoints = {rs.x.back()};
    row.ratios = {rho};
    if (less_certified(rho, q))
        row.verdict = Verdict::PassTrend;
    else if (mpfr_cmp(rho.lo(), q.hi()) >= 0)
        row.verdict = Verdict::FailTrend;
    else
        row.verdict = Verdict::Inconclusive;
    if (rho_out) *rho_out = rho;
    return row;
}

ConditionRow row_y_growth(const CoefficientSequence& a, const ResolvedSchedule& rs,
                          const Interval& q, const Interval& rho, long prec) {
    ConditionRow row;
    row.condition_id = "iv-2";
    row.description = "limsup y^((d-1)/x) < q/rho";
    row.checkpoints = rs.x;
    long d = a.field()->degree();
    if (d == 1) {
        for (std::size_t i = 0; i < rs.x.size(); ++i)
            row.ratios.push_back(Interval::exact(1, 64));
        row.verdict = Verdict::PassTrend;
        row.note = "degree 1: y-factor vanishes";
        return row;
    }
    for (std::size_t i = 0; i < rs.x.size(); ++i) {
        mpq_class expo(d - 1);
        expo /= rs.x[i];
        Interval lam = exp_natural(mul(Interval::of_rational(expo, prec),
                                       log_natural(Interval::of_rational(rs.y[i], prec))));
        row.ratios.push_back(lam);
    }
    Interval threshold = div(q, rho);
    Interval tail_max = row.ratios[row.ratios.size() / 2];
    for (std::size_t i = row.ratios.size() / 2; i < row.ratios.size(); ++i)
        tail_max = max_of(tail_max, row.ratios[i]);
    if (less_certified(tail_max, threshold))
        row.verdict = Verdict::PassTrend;
    else if (mpfr_cmp(row.ratios.back().lo(), threshold.hi()) >= 0)
        row.verdict = Verdict::FailTrend;
    else
        row.verdict = Verdict::Inconclusive;
    return row;
}

ConditionRow row_partial_sums(const CoefficientSequence& a, const CoefficientSequence& b,
                              const ResolvedSchedule& rs, const Interval& q,
                              const TrendRule& rule, const std::string& id, long prec) {
    ConditionRow row;
    row.condition_id = id;
    row.description = "sum_{m<x} a(m), sum_{m<x} |b(m)| = o(q^z x / y^(d-1))";
    row.checkpoints = rs.x;
    unsigned long dm1 = static_cast<unsigned long>(a.field()->degree() - 1);
    Interval logq = log_natural(q);
    for (std::size_t i = 0; i < rs.x.size(); ++i) {
        Interval sa = a.sum_abs_principal_below(rs.x[i], prec);
        Interval sb = b.sum_abs_principal_below(rs.x[i], prec);
        Interval qz = exp_natural(mul(rs.z[i], logq));
        mpq_class scale = mpq_pow_ui(rs.y[i], dm1) / rs.x[i];
        row.ratios.push_back(
            div(mul(max_of(sa, sb), Interval::of_rational(scale, prec)), qz));
    }
    row.verdict = o_verdict(row.ratios, rule);
    return row;
}

void fill_metadata(CriterionReport& report, const CoefficientSequence& a,
                   const CoefficientSequence& b, const ResolvedSchedule& rs) {
    const AlgebraicField& f = *a.field();
    report.minpoly = f.minpoly().to_coeff_string();
    report.base_description =
        to_string(f.classification().kind) + " q=" + f.principal_root(64).to_string(20);
    auto describe = [](const CoefficientSequence& s) {
        return "support=" + std::to_string(s.entries().size()) +
               ",horizon=" + std::to_string(s.horizon()) + ",M=" + s.majorant().M.get_str() +
               ",r=" + s.majorant().r.get_str() +
               (s.complete_below_horizon() ? ",complete" : "");
    };
    report.sequence_a = describe(a);
    report.sequence_b = describe(b);
    report.schedule_x = rs.x;
    report.schedule_y = rs.y;
    report.schedule_z = rs.z;
    report.eta = rs.eta;
}

}  // namespace

CriterionReport check_theorem_main(const CoefficientSequence& a, const CoefficientSequence& b,
                                   const CheckpointSchedule& schedule, const TrendRule& rule) {
    require_checker_inputs(a, b);
    ResolvedSchedule rs = resolve_schedule(schedule, a, b, /*need_exact_z=*/true);
    const long prec = 128;
    CriterionReport report;
    report.theorem = "main";
    fill_metadata(report, a, b, rs);
    report.rows.push_back(row_x_to_infinity(rs));
    report.rows.push_back(row_house_sum(a, b, rs, rule, prec));
    report.rows.push_back(row_sparsity(a, b, rs, rule));
    report.rows.push_back(row_average_decay(a, b, rs, rule, prec));
    report.rows.push_back(row_interlacing(a, b, schedule, report));
    return report;
}

CriterionReport check_theorem_prepared(const CoefficientSequence& a,
                                       const CoefficientSequence& b,
                                       const CheckpointSchedule& schedule,
                                       const TrendRule& rule) {
    require_checker_inputs(a, b);
    ResolvedSchedule rs = resolve_schedule(schedule, a, b, /*need_exact_z=*/false);
    const long prec = 128;
    Interval q = a.field()->principal_root(prec);
    CriterionReport report;
    report.theorem = "prepared";
    fill_metadata(report, a, b, rs);
    Interval rho = Interval::exact(1, prec);
    report.rows.push_back(row_pointwise(a, b, rs, q, "iv-1", &rho, prec));
    report.rows.push_back(row_x_to_infinity(rs));
    report.rows.push_back(row_house_sum(a, b, rs, rule, prec));
    report.rows.push_back(row_sparsity(a, b, rs, rule));
    report.rows.push_back(row_y_growth(a, rs, q, rho, prec));
    report.rows.push_back(row_partial_sums(a, b, rs, q, rule, "iv-3", prec));
    report.rows.push_back(row_interlacing(a, b, schedule, report));
    return report;
}

CriterionReport check_theorem_rational(const mpz_class& t, const CoefficientSequence& a,
                                       const CoefficientSequence& b,
                                       const CheckpointSchedule& schedule,
                                       const TrendRule& rule) {
    if (t < 2) throw InvalidInput("rational base t must be >= 2");
    if (!a.field()->is_rational())
        throw NonRationalField("rational-base checker needs a degree-1 field");
    if (a.field()->rational_q() != t)
        throw InvalidInput("field base does not match t");
    require_checker_inputs(a, b);
    ResolvedSchedule rs = resolve_schedule(schedule, a, b, /*need_exact_z=*/false);
    const long prec = 128;
    Interval q = a.field()->principal_root(prec);
    CriterionReport report;
    report.theorem = (schedule.z.empty() && schedule.theorem_a_z) ? "rational-theorem-a"
                                                                  : "rational";
    fill_metadata(report, a, b, rs);
    Interval rho = Interval::exact(1, prec);
    report.rows.push_back(row_pointwise(a, b, rs, q, "pointwise", &rho, prec));
    report.rows.push_back(row_x_to_infinity(rs));
    // S = o(t^z x): the y-factors vanish at degree 1
    {
        ConditionRow row;
        row.condition_id = "ii";
        row.description = "S_a(x), S_b(x) = o(t^z x)";
        row.checkpoints = rs.x;
        Interval logq = log_natural(q);
        for (std::size_t i = 0; i < rs.x.size(); ++i) {
            Interval s = max_of(a.sum_house_below(rs.x[i], prec),
                                b.sum_house_below(rs.x[i], prec));
            Interval qz = exp_natural(mul(rs.z[i], logq));
            row.ratios.push_back(
                div(mul(s, Interval::of_rational(1 / rs.x[i], prec)), qz));
        }
        row.verdict = o_verdict(row.ratios, rule);
        report.rows.push_back(row);
    }
    report.rows.push_back(row_sparsity(a, b, rs, rule));
    report.rows.push_back(row_interlacing(a, b, schedule, report));
    return report;
}

InterlacingResult check_interlacing(const SupportSet& A, const SupportSet& B,
                                    const mpq_class& Delta, const mpq_class& L,
                                    std::uint64_t horizon, std::size_t violation_cap) {
    if (Delta <= 1 || L <= 0)
        throw InvalidInput("interlacing needs Delta > 1 and L > 0");
    InterlacingResult res;
    const auto& bs = B.elements();
    const auto& as = A.elements();
    if (bs.size() < 2) {
        res.vacuous = true;
        return res;
    }
    auto record = [&](std::uint64_t m, std::uint64_t mp, const mpq_class& mu) {
        res.pass = false;
        if (res.violations.size() < violation_cap) res.violations.push_back({m, mp, mu});
    };
    for (std::size_t bi = 0; bi + 1 < bs.size(); ++bi) {
        std::uint64_t m = bs[bi], mp = bs[bi + 1];
        if (mp >= horizon) break;
        ++res.pairs_checked;
        mpq_class U(static_cast<unsigned long>(mp - m));
        U /= Delta;  // valid mu: [L, U)
        if (U <= L) continue;
        // Coverage scan: a in A covers mu in ((a-m)/Delta, a-m].
        bool covered_L = false;
        mpq_class c = L;  // [L, c] covered so far (once covered_L holds)
        bool violated = false;
        auto ai = std::upper_bound(as.begin(), as.end(), m);
        for (; ai != as.end(); ++ai) {
            mpq_class hi(static_cast<unsigned long>(*ai - m));
            mpq_class lo = hi / Delta;
            if (lo >= U) break;
            if (hi < L) continue;
            if (!covered_L) {
                if (lo < L) {
                    covered_L = true;
                    c = hi;
                } else {
                    record(m, mp, L);
                    violated = true;
                    break;
                }
            } else {
                if (lo <= c) {
                    if (hi > c) c = hi;
                } else {
                    // gap (c, min(lo, U)): any interior point violates
                    mpq_class mu = (c + std::min(lo, U)) / 2;
                    record(m, mp, mu);
                    violated = true;
                    break;
                }
            }
            if (c >= U) break;
        }
        if (!violated) {
            if (!covered_L)
                record(m, mp, L);
            else if (c < U)
                record(m, mp, (c + U) / 2);
        }
    }
    return res;
}

std::vector<DegreeEllRow> degree_ell_ratio(const CoefficientSequence& a, unsigned ell,
                                           std::uint64_t horizon, long precision_bits) {
    if (ell < 1) throw InvalidInput("degree_ell_ratio needs ell >= 1");
    if (a.is_zero()) throw EmptySupport("degree_ell_ratio needs non-empty support");
    std::vector<DegreeEllRow> rows;
    Interval Q = Interval::exact(0, precision_bits);
    std::uint64_t k = 0;
    for (const auto& [n, c] : a.entries()) {
        if (n >= horizon) break;
        ++k;
        Q = max_of(Q, max_of(Interval::exact(mpz_class(static_cast<unsigned long>(n)),
                                             precision_bits),
                             a.field()->house(c, precision_bits)));
        DegreeEllRow row;
        row.k = k;
        row.n_k = n;
        Interval logQ = log_natural(Q);
        if (logQ.certainly_positive()) {
            mpz_class ke(static_cast<unsigned long>(k));
            mpz_class kl;
            mpz_pow_ui(kl.get_mpz_t(), ke.get_mpz_t(), ell);
            row.ratio = div(Interval::exact(mpz_class(static_cast<unsigned long>(n)),
                                            precision_bits),
                            mul(Interval::exact(kl, precision_bits), logQ));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw EmptySupport("no support below the requested horizon");
    return rows;
}

LiouvilleGap liouville_gap(const SupportSet& support) {
    const auto& s = support.elements();
    if (s.size() < 2) throw TooFewElements("liouville_gap needs at least two elements");
    LiouvilleGap out;
    out.max_ratio = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        mpq_class ratio(static_cast<unsigned long>(s[i + 1]),
                        static_cast<unsigned long>(s[i]));
        ratio.canonicalize();
        if (ratio > out.max_ratio) {
            out.max_ratio = ratio;
            out.at_k = static_cast<std::uint64_t>(i + 1);
            out.n_k = s[i];
            out.n_k_plus = s[i + 1];
        }
    }
    return out;
}

namespace {

mpz_class ceil_q(const mpq_class& q) {
    mpz_class out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

enum class Cmp { Less, GreaterEq, Straddle };

Cmp compare_to(const Interval& v, const mpq_class& bound) {
    if (v.certainly_less(bound)) return Cmp::Less;
    if (v.certainly_geq(bound)) return Cmp::GreaterEq;
    return Cmp::Straddle;
}

}  // namespace

CensusResult good_N_census(const CoefficientSequence& c, const mpq_class& w,
                           const mpq_class& delta, const mpq_class& eta, const mpq_class& x,
                           const mpq_class& z, long precision_bits) {
    if (delta <= 0) throw InvalidInput("delta must be positive");
    if (w < 1) throw InvalidInput("w must be >= 1");
    if (eta <= 0 || eta > 1) throw InvalidInput("eta must be in (0, 1]");
    if (z < 0) throw InvalidInput("z must be >= 0");
    mpz_class nmax_z = ceil_q(eta * x) - 1;
    CensusResult out;
    if (nmax_z < 1) return out;
    if (nmax_z > static_cast<long>(c.horizon()))
        throw OutOfHorizon("census range exceeds the sequence horizon");
    std::uint64_t nmax = nmax_z.get_ui();
    mpq_class target = delta / w;
    auto profile = xi_abs_profile(c, nmax, precision_bits);
    std::vector<long> unresolved;
    for (std::uint64_t N = 1; N <= nmax; ++N) {
        Cmp cmp = compare_to(profile[static_cast<std::size_t>(N - 1)], target);
        if (cmp == Cmp::Straddle) {
            ++out.refined;
            long wp = precision_bits;
            for (int k = 0; k < 3 && cmp == Cmp::Straddle; ++k) {
                wp *= 2;
                cmp = compare_to(xi_tail_abs(c, N, wp), target);
            }
        }
        if (cmp == Cmp::Less)
            ++out.count;
        else if (cmp == Cmp::Straddle)
            unresolved.push_back(static_cast<long>(N));
    }
    if (!unresolved.empty())
        throw UnresolvedIntervals("census comparisons unresolved after refinement budget",
                                  std::move(unresolved));
    return out;
}

CensusResult dominance_census(const CoefficientSequence& a, const CoefficientSequence& b,
                              const mpq_class& eta, const mpq_class& x,
                              long precision_bits) {
    if (a.is_zero()) throw InvalidInput("dominance census needs non-empty N_a");
    if (eta <= 0 || eta > 1) throw InvalidInput("eta must be in (0, 1]");
    mpz_class nmax_z = ceil_q(eta * x) - 1;
    CensusResult out;
    if (nmax_z < 1) return out;
    if (nmax_z > static_cast<long>(std::min(a.horizon(), b.horizon())))
        throw OutOfHorizon("census range exceeds the sequence horizons");
    std::uint64_t nmax = nmax_z.get_ui();
    auto pa = xi_abs_profile(a, nmax, precision_bits);
    auto pb = xi_abs_profile(b, nmax, precision_bits);
    std::vector<long> unresolved;
    for (std::uint64_t N = 1; N <= nmax; ++N) {
        const Interval* ia = &pa[static_cast<std::size_t>(N - 1)];
        const Interval* ib = &pb[static_cast<std::size_t>(N - 1)];
        Interval ra, rb;
        bool decided = false, dominates = false;
        long wp = precision_bits;
        for (int k = 0; k <= 3; ++k) {
            if (mpfr_cmp(ia->lo(), ib->hi()) > 0) {
                decided = true;
                dominates = true;
                break;
            }
            if (mpfr_cmp(ia->hi(), ib->lo()) <= 0) {
                decided = true;
                break;
            }
            if (k == 3) break;
            ++out.refined;
            wp *= 2;
            ra = xi_tail_abs(a, N, wp);
            rb = xi_tail_abs(b, N, wp);
            ia = &ra;
            ib = &rb;
        }
        if (!decided) {
            unresolved.push_back(static_cast<long>(N));
            continue;
        }
        if (dominates) ++out.count;
    }
    if (!unresolved.empty())
        throw UnresolvedIntervals("dominance comparisons unresolved after refinement budget",
                                  std::move(unresolved));
    return out;
}

std::vector<NormWitness> witness_search(const CoefficientSequence& a,
                                        const CoefficientSequence& b,
                                        unsigned long u_max, std::uint64_t N_max,
                                        long precision_bits) {
    if (u_max < 1) throw InvalidInput("witness search needs u_max >= 1");
    if (N_max < 1) throw InvalidInput("witness search needs N_max >= 1");
    require_checker_inputs(a, b);
    CoefficientSequence sum = sum_sequences(a, b);

    const long prec = precision_bits;
    auto abs_sum = xi_abs_profile(sum, N_max, prec);
    auto sig_sum = xi_signed_profile(sum, N_max, prec);
    auto sig_a = xi_signed_profile(a, N_max, prec);
    auto abs_b = xi_abs_profile(b, N_max, prec);

    const unsigned long dm1 = static_cast<unsigned long>(a.field()->degree() - 1);

    // Prefix house sums S_{a+b}(N) and the N-wise base factors
    // xi_N(|a+b|) * S(N)^(d-1).
    std::vector<Interval> S(static_cast<std::size_t>(N_max) + 1);
    {
        Interval acc = Interval::exact(0, prec);
        auto it = sum.entries().begin();
        for (std::uint64_t N = 1; N <= N_max; ++N) {
            // S(N) sums n < N
            while (it != sum.entries().end() && it->first < N) {
                acc = add(acc, sum.field()->house(it->second, prec));
                ++it;
            }
            S[static_cast<std::size_t>(N)] = acc;
        }
    }
    std::vector<Interval> base(static_cast<std::size_t>(N_max) + 1);
    std::vector<int> dom(static_cast<std::size_t>(N_max) + 1, 0);  // 1 yes, -1 no, 0 straddle
    for (std::uint64_t N = 1; N <= N_max; ++N) {
        base[static_cast<std::size_t>(N)] =
            mul(abs_sum[static_cast<std::size_t>(N - 1)],
                pow_ui(S[static_cast<std::size_t>(N)], dm1));
        const Interval& ia = sig_a[static_cast<std::size_t>(N - 1)];
        const Interval& ib = abs_b[static_cast<std::size_t>(N - 1)];
        if (mpfr_cmp(ia.lo(), ib.hi()) > 0)
            dom[static_cast<std::size_t>(N)] = 1;
        else if (mpfr_cmp(ia.hi(), ib.lo()) <= 0)
            dom[static_cast<std::size_t>(N)] = -1;
    }

    std::vector<std::optional<NormWitness>> found(u_max);
    std::vector<long> unresolved_N;
    std::mutex unresolved_mu;

    parallel_for(u_max, [&](std::size_t idx) {
        unsigned long u = static_cast<unsigned long>(idx) + 1;
        mpz_class ud_z;
        mpz_ui_pow_ui(ud_z.get_mpz_t(), u, dm1 + 1);
        mpq_class threshold(1);
        threshold /= mpq_class(ud_z);  // u^d * base < 1  <=>  base < 1/u^d
        for (std::uint64_t N = 1; N <= N_max; ++N) {
            int d_state = dom[static_cast<std::size_t>(N)];
            if (d_state == 0) {
                long wpd = prec;
                for (int k = 0; k < 3 && d_state == 0; ++k) {
                    wpd *= 2;
                    Interval ia = xi_tail(a, N, wpd);
                    Interval ib = xi_tail_abs(b, N, wpd);
                    if (mpfr_cmp(ia.lo(), ib.hi()) > 0)
                        d_state = 1;
                    else if (mpfr_cmp(ia.hi(), ib.lo()) <= 0)
                        d_state = -1;
                }
            }
            if (d_state != 1) continue;
            Cmp cmp = compare_to(base[static_cast<std::size_t>(N)], threshold);
            Interval refined_base = base[static_cast<std::size_t>(N)];
            long wp = prec;
            for (int k = 0; k < 3 && cmp == Cmp::Straddle; ++k) {
                wp *= 2;
                Interval xin = xi_tail_abs(sum, N, wp);
                Interval SN = Interval::exact(0, wp);
                for (const auto& [n, c] : sum.entries()) {
                    if (n >= N) break;
                    SN = add(SN, sum.field()->house(c, wp));
                }
                refined_base = mul(xin, pow_ui(SN, dm1));
                cmp = compare_to(refined_base, threshold);
            }
            if (cmp == Cmp::Straddle) {
                std::lock_guard<std::mutex> lk(unresolved_mu);
                unresolved_N.push_back(static_cast<long>(N));
                continue;
            }
            if (cmp != Cmp::Less) continue;
            NormWitness w;
            w.u = u;
            w.N = N;
            Interval uI = Interval::exact(mpz_class(u), prec);
            w.value = mul(uI, sig_sum[static_cast<std::size_t>(N - 1)]);
            w.conjugate_product = pow_ui(mul(uI, S[static_cast<std::size_t>(N)]), dm1);
            w.contradiction = true;
            found[idx] = std::move(w);
            return;
        }
    });

    if (!unresolved_N.empty()) {
        std::sort(unresolved_N.begin(), unresolved_N.end());
        throw UnresolvedIntervals("witness comparisons unresolved after refinement budget",
                                  std::move(unresolved_N));
    }

    std::vector<NormWitness> out;
    std::vector<unsigned long> failing;
    for (unsigned long u = 1; u <= u_max; ++u) {
        if (found[u - 1])
            out.push_back(*found[u - 1]);
        else
            failing.push_back(u);
    }
    if (!failing.empty()) {
        std::string msg = "no norm witness for " + std::to_string(failing.size()) +
                          " denominator(s), first u = " + std::to_string(failing[0]);
        throw NoWitnessFound(msg, std::move(failing));
    }
    return out;
}

}  // namespace sparseseries
