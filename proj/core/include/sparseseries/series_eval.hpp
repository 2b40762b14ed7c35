#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sparseseries/arith_sieve.hpp"
#include "sparseseries/interval.hpp"
#include "sparseseries/sequence.hpp"

namespace sparseseries {

/// Enclosure of the principal value of sum (a(n)+b(n))/q^n to width
/// <= 2^-precision (RefinementBudgetExceeded when unreachable).
Interval evaluate_series(const CoefficientSequence& a, const CoefficientSequence& b,
                         long precision_bits);

/// Exact base-t digits of sum_m f(m) t^(-g(m)) at positions 1..P, with full
/// carry propagation from below. Digits at positions > reliable_limit could
/// still be altered by the discarded tail (bounded rigorously); positions
/// <= reliable_limit are final.
struct DigitStream {
    std::uint64_t base = 2;
    std::uint64_t positions = 0;
    std::vector<std::uint8_t> digits;  // digits[p] for 1 <= p <= positions
    mpz_class carry_overflow;          // integer part accumulated past position 1
    std::vector<std::uint64_t> nonzero_positions;
    std::uint64_t reliable_limit = 0;
    std::string tail_bound_note;  // "exact" or the policy the bound rests on

    std::uint64_t digit(std::uint64_t p) const { return digits[static_cast<std::size_t>(p)]; }
    std::uint64_t nonzero_count_below(std::uint64_t x) const;

    /// Header plus maximal runs "start-end:digit" of equal nonzero digits.
    void write_text(std::ostream& os) const;
};

/// g from a sieve table; the table must cover the preimage policy horizon
/// for P (HorizonInsufficient otherwise). When f is table-backed its table
/// must cover the g table horizon.
DigitStream digit_stream(const FiberWeight& f, const ArithTable& g, std::uint64_t t,
                         std::uint64_t P);

/// g(m) = m^k with exact preimage bounds.
DigitStream digit_stream_monomial(const FiberWeight& f, unsigned k, std::uint64_t t,
                                  std::uint64_t P);

struct DigitDensityRow {
    std::uint64_t x = 0;
    std::uint64_t count = 0;      // nonzero digits at positions < x
    Interval normalized;          // count * (log x / x)^(1/ell)
};

/// Cumulative nonzero-digit counts at geometric checkpoints (powers of 10
/// capped at P, plus P itself) with the (1.8)-style normalization.
std::vector<DigitDensityRow> nonzero_digit_density(const DigitStream& stream, unsigned ell,
                                                   long precision_bits = 96);

}  // namespace sparseseries
