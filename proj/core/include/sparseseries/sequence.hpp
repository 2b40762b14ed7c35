#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "sparseseries/algebraic.hpp"
#include "sparseseries/arith_sieve.hpp"
#include "sparseseries/interval.hpp"

namespace sparseseries {

/// Strictly increasing positive integers below a horizon, tagged with how
/// they were generated.
class SupportSet {
public:
    SupportSet(std::vector<std::uint64_t> elements, std::uint64_t horizon,
               std::string generator_id);

    static SupportSet explicit_set(std::vector<std::uint64_t> elements,
                                   std::uint64_t horizon);

    const std::vector<std::uint64_t>& elements() const { return elements_; }
    std::uint64_t horizon() const { return horizon_; }
    const std::string& generator_id() const { return generator_id_; }
    std::size_t size() const { return elements_.size(); }
    bool contains(std::uint64_t n) const;
    std::uint64_t count_below(const mpq_class& x) const;

private:
    std::vector<std::uint64_t> elements_;
    std::uint64_t horizon_;
    std::string generator_id_;
};

/// {floor(n^alpha) : n >= 1} below H for rational alpha > 1, via exact
/// integer k-th roots.
SupportSet power_support(const mpq_class& alpha, std::uint64_t H);

/// {a + b : a in A, b in B} below H. Both sets must be non-empty.
SupportSet sumset(const SupportSet& A, const SupportSet& B, std::uint64_t H);

/// Explicit tail majorant: house(coef(n)) <= M * r^n for every n >= 1.
/// `complete` marks sequences known to vanish at and beyond the horizon, in
/// which case tail bounds beyond H are exactly zero. `asserted_beyond` marks
/// majorants whose beyond-horizon validity rests on growth assertions that
/// are verified below the horizon only.
struct TailMajorant {
    mpq_class M = 0;
    mpq_class r = 1;
    bool asserted_beyond = false;
    std::string note;
};

struct TailStats {
    mpq_class x, z, eta;
    std::uint64_t N_count = 0;
    Interval S_value;
    Interval R_value;
};

/// Finite-horizon sparse sequence of field elements with a tail majorant.
/// Immutable; all evaluators are pure.
class CoefficientSequence {
public:
    using Entry = std::pair<std::uint64_t, FieldElement>;

    /// Entries must be sorted by n, nonzero, with 1 <= n < H; the majorant is
    /// verified against every stored coefficient.
    static CoefficientSequence from_entries(FieldPtr field, std::uint64_t H,
                                            std::vector<Entry> entries,
                                            TailMajorant majorant, bool complete);

    static CoefficientSequence zero(FieldPtr field, std::uint64_t H);
    /// 0/1 coefficients on the support; majorant (1, 1).
    static CoefficientSequence indicator(FieldPtr field, const SupportSet& support,
                                         std::uint64_t H, bool complete = false);

    const FieldPtr& field() const { return field_; }
    std::uint64_t horizon() const { return horizon_; }
    const std::vector<Entry>& entries() const { return entries_; }
    const TailMajorant& majorant() const { return majorant_; }
    bool complete_below_horizon() const { return complete_; }

    bool is_zero() const { return entries_.empty(); }
    std::optional<FieldElement> coefficient(std::uint64_t n) const;
    std::vector<std::uint64_t> support() const;
    std::uint64_t support_count_below(const mpq_class& x) const;
    std::uint64_t last_support() const;  // requires !is_zero()

    /// True when every coefficient is certified >= 0 under the principal
    /// embedding.
    bool certainly_nonnegative(long precision_bits = 96) const;
    /// True when every stored coefficient is a rational integer.
    bool rational_integer_coefficients() const;

    /// sum_{n<x} house(coef(n)) as an enclosure.
    Interval sum_house_below(const mpq_class& x, long precision_bits = 128) const;
    /// sum_{n<x} |coef(n)| under the principal embedding.
    Interval sum_abs_principal_below(const mpq_class& x, long precision_bits = 128) const;
    /// sum_{n<x} coef(n) under the principal embedding (signed).
    Interval sum_principal_below(const mpq_class& x, long precision_bits = 128) const;

    void write_jsonl(std::ostream& os) const;
    static CoefficientSequence read_jsonl(std::istream& is);

private:
    CoefficientSequence(FieldPtr field, std::uint64_t H, std::vector<Entry> entries,
                        TailMajorant majorant, bool complete)
        : field_(std::move(field)),
          horizon_(H),
          entries_(std::move(entries)),
          majorant_(std::move(majorant)),
          complete_(complete) {}

    FieldPtr field_;
    std::uint64_t horizon_;
    std::vector<Entry> entries_;
    TailMajorant majorant_;
    bool complete_;
};

/// Weight for fiber sums: either a sieve table or a non-negative constant.
struct FiberWeight {
    const ArithTable* table = nullptr;
    mpz_class constant = 1;

    mpz_class operator()(std::uint64_t m) const {
        if (table) return mpz_class(static_cast<unsigned long>(table->value(m)));
        return constant;
    }
};

/// a(n) = sum_{g(m) = n} f(m) for n < H. The g table must cover the preimage
/// policy horizon for H (HorizonInsufficient otherwise).
CoefficientSequence fiber_sequence(const FiberWeight& f, const ArithTable& g,
                                   const FieldPtr& field, std::uint64_t H);

/// Coefficients of the j-th power of the generating series, truncated at H.
/// Requires non-negative rational-integer coefficients.
CoefficientSequence convolution_power(const CoefficientSequence& a, unsigned j,
                                      std::uint64_t H,
                                      std::optional<std::size_t> coefficient_bit_cap = {});

/// Pointwise sum with the majorant (Ma + Mb, max(ra, rb)).
CoefficientSequence sum_sequences(const CoefficientSequence& a,
                                  const CoefficientSequence& b);

/// N_count, S and R statistics at one checkpoint: S over n < x, R over
/// n < eta*x with inner tail j >= z.
TailStats stats(const CoefficientSequence& seq, const mpq_class& x, const mpq_class& z,
                const mpq_class& eta, long precision_bits = 128);

/// xi_N of the sequence (signed, principal embedding) and of |coefs|.
Interval xi_tail(const CoefficientSequence& seq, std::uint64_t N, long precision_bits);
Interval xi_tail_abs(const CoefficientSequence& seq, std::uint64_t N, long precision_bits);

/// Batch profiles of xi_N for N = 1..N_max (index N-1), sharing one pass.
std::vector<Interval> xi_abs_profile(const CoefficientSequence& seq, std::uint64_t N_max,
                                     long precision_bits);
std::vector<Interval> xi_signed_profile(const CoefficientSequence& seq,
                                        std::uint64_t N_max, long precision_bits);

/// R_c(q, X, z) = sum_{1<=n<X} sum_{j>=z} |c(n+j)|/q^j.
Interval r_statistic(const CoefficientSequence& seq, const mpq_class& X,
                     const mpq_class& z, long precision_bits = 128);

struct RDecomposition {
    Interval R, R1, R2;
};

/// The split of R(eta*x, z) into near (z <= j < x-n) and far (j >= x-n)
/// parts; R1 + R2 always intersects R and equals it exactly on the
/// below-horizon part.
RDecomposition r_decomposition_check(const CoefficientSequence& seq, const mpq_class& eta,
                                     const mpq_class& x, const mpq_class& z,
                                     long precision_bits = 128);

}  // namespace sparseseries
