#pragma once

// Brute-force reference implementations used as independent oracles. These
// deliberately avoid the sieve/series code paths they check.

#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include <gmpxx.h>

namespace oracles {

inline std::uint64_t sigma_td(std::uint64_t n) {
    std::uint64_t s = 0;
    for (std::uint64_t d = 1; d <= n; ++d)
        if (n % d == 0) s += d;
    return s;
}

inline std::uint64_t phi_gcd(std::uint64_t n) {
    std::uint64_t c = 0;
    for (std::uint64_t m = 1; m <= n; ++m)
        if (std::gcd(m, n) == 1) ++c;
    return c;
}

inline std::uint64_t divisor_count_td(std::uint64_t n) {
    std::uint64_t c = 0;
    for (std::uint64_t d = 1; d <= n; ++d)
        if (n % d == 0) ++c;
    return c;
}

inline std::uint64_t omega_distinct_td(std::uint64_t n) {
    std::uint64_t c = 0;
    for (std::uint64_t p = 2; p <= n; ++p) {
        if (n % p == 0) {
            ++c;
            while (n % p == 0) n /= p;
        }
    }
    return c;
}

inline std::uint64_t omega_multiplicity_td(std::uint64_t n) {
    std::uint64_t c = 0;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        while (n % p == 0) {
            n /= p;
            ++c;
        }
    }
    if (n > 1) ++c;
    return c;
}

/// Distinct values of f below x over preimages m < mhorizon.
template <typename F>
std::set<std::uint64_t> value_set_enumerate(F f, std::uint64_t x, std::uint64_t mhorizon) {
    std::set<std::uint64_t> s;
    for (std::uint64_t m = 1; m < mhorizon; ++m) {
        std::uint64_t v = f(m);
        if (v >= 1 && v < x) s.insert(v);
    }
    return s;
}

/// Fiber sums a(n) = sum_{g(m)=n, m < mhorizon} f(m) for n < H.
template <typename F, typename G>
std::map<std::uint64_t, mpz_class> fiber_enumerate(F f, G g, std::uint64_t H,
                                                   std::uint64_t mhorizon) {
    std::map<std::uint64_t, mpz_class> a;
    for (std::uint64_t m = 1; m < mhorizon; ++m) {
        std::uint64_t n = g(m);
        if (n >= 1 && n < H) a[n] += mpz_class(static_cast<unsigned long>(f(m)));
    }
    for (auto it = a.begin(); it != a.end();)
        it = (it->second == 0) ? a.erase(it) : std::next(it);
    return a;
}

}  // namespace oracles
