#include "sparseseries/series_eval.hpp"

#include <algorithm>
#include <ostream>

#include "sparseseries/errors.hpp"

namespace sparseseries {

Interval evaluate_series(const CoefficientSequence& a, const CoefficientSequence& b,
                         long precision_bits) {
    CoefficientSequence sum = sum_sequences(a, b);
    long wp = precision_bits + 8;
    for (int attempt = 0; attempt < 8; ++attempt, wp *= 2) {
        Interval xi1 = xi_tail(sum, 1, wp);
        Interval q = sum.field()->principal_root(wp);
        Interval v = mul(xi1, inv(q));
        if (v.width_leq_pow2(precision_bits)) return v;
    }
    throw RefinementBudgetExceeded("series enclosure did not reach the target width");
}

namespace {

// Integer value of sum over positions p in [lo, hi) of mass[p] * t^(hi-1-p),
// with the matching power t^(hi-lo), assembled by a balanced product tree.
struct TreeNode {
    mpz_class value;
    mpz_class power;
};

TreeNode digit_tree(const std::vector<mpz_class>& mass, std::uint64_t lo, std::uint64_t hi,
                    std::uint64_t t) {
    if (hi - lo <= 64) {
        TreeNode n;
        n.value = 0;
        n.power = 1;
        for (std::uint64_t p = lo; p < hi; ++p) {
            n.value *= static_cast<unsigned long>(t);
            n.value += mass[static_cast<std::size_t>(p)];
            n.power *= static_cast<unsigned long>(t);
        }
        return n;
    }
    std::uint64_t mid = lo + (hi - lo) / 2;
    TreeNode l = digit_tree(mass, lo, mid, t);
    TreeNode r = digit_tree(mass, mid, hi, t);
    TreeNode n;
    n.value = l.value * r.power + r.value;
    n.power = l.power * r.power;
    return n;
}

// Base-t digits of v, least significant first, via balanced splitting.
void extract_digits(const mpz_class& v, std::uint64_t t, std::size_t count,
                    std::vector<std::uint8_t>& out, std::size_t offset) {
    if (count <= 32) {
        mpz_class cur = v;
        for (std::size_t i = 0; i < count; ++i) {
            out[offset + i] = static_cast<std::uint8_t>(mpz_fdiv_q_ui(
                cur.get_mpz_t(), cur.get_mpz_t(), static_cast<unsigned long>(t)));
        }
        return;
    }
    std::size_t half = count / 2;
    mpz_class tp;
    mpz_ui_pow_ui(tp.get_mpz_t(), static_cast<unsigned long>(t),
                  static_cast<unsigned long>(half));
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), v.get_mpz_t(), tp.get_mpz_t());
    extract_digits(r, t, half, out, offset);
    extract_digits(q, t, count - half, out, offset + half);
}

mpq_class t_power_neg(std::uint64_t t, std::uint64_t expo, std::uint64_t cap = 2048) {
    // t^-min(expo, cap): capping only weakens (enlarges) the bound.
    mpq_class tinv(1, static_cast<unsigned long>(t));
    mpq_class out(1);
    std::uint64_t e = std::min(expo, cap);
    for (std::uint64_t i = 0; i < e; ++i) out *= tinv;
    return out;
}

struct TailBound {
    mpq_class scaled;  // upper bound of (discarded tail) * t^P
    std::string note;
};

DigitStream assemble_stream(std::vector<mpz_class> position_mass, const TailBound& tail,
                            std::uint64_t t, std::uint64_t P) {
    TreeNode root = digit_tree(position_mass, 1, P + 1, t);

    DigitStream out;
    out.base = t;
    out.positions = P;
    out.tail_bound_note = tail.note;

    // root.value = sum mass[p] t^(P-p); split off the integer part.
    mpz_class D, overflow;
    mpz_fdiv_qr(overflow.get_mpz_t(), D.get_mpz_t(), root.value.get_mpz_t(),
                root.power.get_mpz_t());
    out.carry_overflow = overflow;

    out.digits.assign(static_cast<std::size_t>(P) + 1, 0);
    std::vector<std::uint8_t> low_first(static_cast<std::size_t>(P), 0);
    extract_digits(D, t, static_cast<std::size_t>(P), low_first, 0);
    for (std::uint64_t p = 1; p <= P; ++p)
        out.digits[static_cast<std::size_t>(p)] = low_first[static_cast<std::size_t>(P - p)];

    for (std::uint64_t p = 1; p <= P; ++p)
        if (out.digits[static_cast<std::size_t>(p)] != 0) out.nonzero_positions.push_back(p);

    // Reliability: adding delta < 1 to the scaled integer cannot change any
    // digit; otherwise the bottom j positions (t^j > delta) plus a carry
    // chain through saturated digits are at risk.
    if (tail.scaled < 1) {
        out.reliable_limit = P;
    } else {
        mpz_class ceil_delta;
        mpz_cdiv_q(ceil_delta.get_mpz_t(), tail.scaled.get_num_mpz_t(),
                   tail.scaled.get_den_mpz_t());
        std::size_t j = mpz_sizeinbase(ceil_delta.get_mpz_t(), static_cast<int>(t));
        std::uint64_t boundary = (P > j) ? P - static_cast<std::uint64_t>(j) : 0;
        std::uint64_t q = boundary;
        while (q >= 1 && out.digits[static_cast<std::size_t>(q)] == t - 1) --q;
        out.reliable_limit = (q >= 1) ? q - 1 : 0;
    }
    return out;
}

}  // namespace

std::uint64_t DigitStream::nonzero_count_below(std::uint64_t x) const {
    return static_cast<std::uint64_t>(
        std::lower_bound(nonzero_positions.begin(), nonzero_positions.end(), x) -
        nonzero_positions.begin());
}

void DigitStream::write_text(std::ostream& os) const {
    os << "t=" << base << " P=" << positions << " reliable_limit=" << reliable_limit
       << " carry_overflow=" << carry_overflow.get_str() << " tail=" << tail_bound_note
       << "\n";
    std::uint64_t run_start = 0, run_digit = 0, prev = 0;
    auto flush = [&](std::uint64_t end) {
        if (run_start == 0) return;
        if (run_start == end)
            os << run_start << ":" << run_digit << "\n";
        else
            os << run_start << "-" << end << ":" << run_digit << "\n";
    };
    for (std::uint64_t p : nonzero_positions) {
        std::uint64_t d = digits[static_cast<std::size_t>(p)];
        if (run_start != 0 && p == prev + 1 && d == run_digit) {
            prev = p;
            continue;
        }
        flush(prev);
        run_start = p;
        prev = p;
        run_digit = d;
    }
    flush(prev);
}

DigitStream digit_stream(const FiberWeight& f, const ArithTable& g, std::uint64_t t,
                         std::uint64_t P) {
    if (t < 2 || t > 255) throw InvalidInput("digit stream base must be in [2, 255]");
    if (P < 1) throw InvalidInput("digit stream needs P >= 1");
    if (f.constant < 0) throw InvalidInput("fiber weight must be non-negative");
    if (f.table && f.table->horizon() < g.horizon())
        throw HorizonInsufficient("f table must cover the g table horizon",
                                  mpz_class(static_cast<unsigned long>(g.horizon())));
    // All m with g(m) <= P must lie inside the table.
    mpz_class need = required_value_set_horizon(g.function_id(), P + 1);
    if (mpz_class(static_cast<unsigned long>(g.horizon())) < need)
        throw HorizonInsufficient("g table cannot cover all preimages of [1, P]", need);
    if (g.function_id() == ArithFunction::Phi) {
        std::uint64_t start = g.horizon() - g.horizon() / 10;
        for (std::uint64_t m = std::max<std::uint64_t>(start, 1); m < g.horizon(); ++m)
            if (g.values()[static_cast<std::size_t>(m)] <= P)
                throw HorizonInsufficient(
                    "phi preimage policy violated in the top decile at m = " +
                        std::to_string(m),
                    mpz_class(static_cast<unsigned long>(g.horizon())) * 2);
    }

    constexpr std::uint64_t kWindow = 256;
    std::vector<mpz_class> mass(static_cast<std::size_t>(P) + 1, mpz_class(0));
    std::vector<mpz_class> beyond(static_cast<std::size_t>(kWindow), mpz_class(0));
    mpz_class deep_mass(0);
    for (std::uint64_t m = 1; m < g.horizon(); ++m) {
        std::uint64_t v = g.values()[static_cast<std::size_t>(m)];
        if (v < 1) continue;
        if (v <= P) {
            mpz_class w = f(m);
            if (w != 0) mass[static_cast<std::size_t>(v)] += w;
        } else if (v <= P + kWindow) {
            beyond[static_cast<std::size_t>(v - P - 1)] += f(m);
        } else {
            deep_mass += f(m);
        }
    }

    TailBound tail;
    // In-table discarded mass: exact position sums across a 256-deep window,
    // everything deeper bounded by its total mass at the window floor.
    {
        mpq_class scaled(0);
        mpq_class tp(1);
        mpq_class tinv(1, static_cast<unsigned long>(t));
        for (std::size_t w = 0; w < beyond.size(); ++w) {
            tp *= tinv;
            if (beyond[w] != 0) scaled += mpq_class(beyond[w]) * tp;
        }
        if (deep_mass != 0) scaled += mpq_class(deep_mass) * tp;
        tail.scaled = scaled;
    }

    // Beyond-table mass: bands delimited by the preimage policy thresholds
    // policy(2^k P): every m in band k has g(m) > 2^k P, with weights bounded
    // by f(m) <= m^2 for the sieve functions (or by the constant). The last
    // band is doubled to close the geometric remainder.
    {
        mpq_class band_total(0);
        const int kBands = 5;
        for (int k = 0; k < kBands; ++k) {
            std::uint64_t top_threshold = P << (k + 1);
            mpz_class next_mh = required_value_set_horizon(g.function_id(), top_threshold);
            mpq_class fmax = f.table ? mpq_class(next_mh * next_mh) : mpq_class(f.constant);
            mpq_class band = mpq_class(next_mh) * fmax;
            std::uint64_t expo = (k == 0) ? 1 : ((P << k) - P + 1);
            band *= t_power_neg(t, expo);
            band_total += (k + 1 == kBands) ? band * 2 : band;
        }
        tail.scaled += band_total;
    }
    tail.note = (g.function_id() == ArithFunction::Sigma)
                    ? "exact (sigma(m) >= m)"
                    : "preimage-policy asserted beyond the table";

    return assemble_stream(std::move(mass), tail, t, P);
}

DigitStream digit_stream_monomial(const FiberWeight& f, unsigned k, std::uint64_t t,
                                  std::uint64_t P) {
    if (t < 2 || t > 255) throw InvalidInput("digit stream base must be in [2, 255]");
    if (k < 1) throw InvalidInput("monomial exponent must be >= 1");
    if (f.constant < 0) throw InvalidInput("fiber weight must be non-negative");

    std::vector<mpz_class> mass(static_cast<std::size_t>(P) + 1, mpz_class(0));
    TailBound tail;
    tail.note = "exact (monomial exponents)";
    for (std::uint64_t m = 1;; ++m) {
        if (f.table && m >= f.table->horizon())
            throw HorizonInsufficient("f table too small for the monomial stream",
                                      mpz_class(static_cast<unsigned long>(m + 1)));
        mpz_class g;
        mpz_class mm(static_cast<unsigned long>(m));
        mpz_pow_ui(g.get_mpz_t(), mm.get_mpz_t(), k);
        if (g > static_cast<long>(P)) {
            // Remaining terms: sum_{m' >= m} f(m') t^(-m'^k) with
            // m'^k >= m' * m^(k-1), so the scaled tail stays below
            // (12 m^2 for table weights, 2c for constants) * t^(P - m^k).
            mpz_class gap = g - static_cast<long>(P);
            std::uint64_t expo =
                gap.fits_ulong_p() ? static_cast<std::uint64_t>(gap.get_ui()) : 4096;
            mpq_class fb =
                f.table ? mpq_class(mpz_class(12 * mm * mm)) : mpq_class(2 * f.constant);
            tail.scaled = fb * t_power_neg(t, expo, 4096);
            break;
        }
        mpz_class w = f(m);
        if (w != 0) mass[static_cast<std::size_t>(g.get_ui())] += w;
    }
    return assemble_stream(std::move(mass), tail, t, P);
}

std::vector<DigitDensityRow> nonzero_digit_density(const DigitStream& stream, unsigned ell,
                                                   long precision_bits) {
    if (ell < 1) throw InvalidInput("nonzero_digit_density needs ell >= 1");
    std::vector<DigitDensityRow> rows;
    std::vector<std::uint64_t> checkpoints;
    for (std::uint64_t x = 10; x < stream.positions; x *= 10) checkpoints.push_back(x);
    checkpoints.push_back(stream.positions);
    for (std::uint64_t x : checkpoints) {
        DigitDensityRow row;
        row.x = x;
        row.count = stream.nonzero_count_below(x);
        Interval xv =
            Interval::exact(mpz_class(static_cast<unsigned long>(x)), precision_bits);
        Interval norm = root_ui(div(log_natural(xv), xv), ell);
        row.normalized = mul(
            Interval::exact(mpz_class(static_cast<unsigned long>(row.count)), precision_bits),
            norm);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace sparseseries
