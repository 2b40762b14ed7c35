#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sparseseries/interval.hpp"

namespace sparseseries {

enum class ArithFunction : std::uint16_t {
    Sigma = 0,
    Phi = 1,
    DivisorCount = 2,
    OmegaDistinct = 3,
    OmegaWithMultiplicity = 4,
};

std::string to_string(ArithFunction f);
ArithFunction arith_function_from_string(const std::string& name);

/// Exact table of one arithmetic function on 1 <= n < horizon, built by a
/// linear smallest-prime-factor sieve. Immutable once built; reads are
/// thread-safe.
class ArithTable {
public:
    static constexpr std::uint64_t kDefaultMaxHorizon = 1ull << 25;

    static ArithTable sieve(ArithFunction f, std::uint64_t horizon,
                            std::uint64_t max_horizon = kDefaultMaxHorizon);

    ArithFunction function_id() const { return function_; }
    std::uint64_t horizon() const { return horizon_; }
    std::uint64_t value(std::uint64_t n) const;
    const std::vector<std::uint64_t>& values() const { return values_; }

    void write_binary(std::ostream& os) const;
    static ArithTable read_binary(std::istream& is);
    void write_csv(std::ostream& os) const;

private:
    ArithTable(ArithFunction f, std::uint64_t horizon, std::vector<std::uint64_t> values)
        : function_(f), horizon_(horizon), values_(std::move(values)) {}

    ArithFunction function_;
    std::uint64_t horizon_;
    std::vector<std::uint64_t> values_;  // values_[n] for 1 <= n < horizon
};

/// Exact sum_{n<=x} f(n)^k; throws OutOfHorizon when x >= table horizon.
mpz_class summatory(const ArithTable& table, unsigned weight_exponent, std::uint64_t x);

struct ValueSetCount {
    std::uint64_t count = 0;                 // #(S_f intersect [1, x)), exact
    std::vector<std::uint64_t> witness_set;  // the values themselves, sorted
    bool witness_capped = false;             // set exceeded the size cap
};

/// Horizon that certifies every value of f below x is attained by some
/// m < horizon: m <= sigma(m) for sigma; the phi preimage policy
/// ceil(4 x loglog x) for phi; first-attainment witnesses (2^(v-1),
/// primorials, 2^v) for d/omega/Omega.
mpz_class required_value_set_horizon(ArithFunction f, std::uint64_t x);

/// Exact count of the value set below x; requires the table horizon to meet
/// required_value_set_horizon (HorizonInsufficient otherwise, carrying the
/// minimal sufficient horizon). For phi, additionally verifies the policy on
/// the top decile of the table.
ValueSetCount value_set_count(const ArithTable& table, std::uint64_t x,
                              std::size_t witness_cap = 1000000);

struct PhiLowerBoundScan {
    Interval minimum;        // enclosure of min over 3 <= n < x of phi(n) loglog(n)/n
    std::uint64_t argmin = 0;
};

/// Empirical minimum of the normalized phi ratio; validates the horizon
/// policy of value_set_count. Requires x >= 10 and a phi table covering x.
PhiLowerBoundScan phi_lower_bound_check(const ArithTable& table, std::uint64_t x);

}  // namespace sparseseries
