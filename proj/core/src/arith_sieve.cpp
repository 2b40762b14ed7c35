#include "sparseseries/arith_sieve.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include <mpfr.h>

#include "sparseseries/errors.hpp"

namespace sparseseries {

std::string to_string(ArithFunction f) {
    switch (f) {
        case ArithFunction::Sigma: return "sigma";
        case ArithFunction::Phi: return "phi";
        case ArithFunction::DivisorCount: return "divisor_count";
        case ArithFunction::OmegaDistinct: return "omega_distinct";
        case ArithFunction::OmegaWithMultiplicity: return "omega_with_multiplicity";
    }
    return "sigma";
}

ArithFunction arith_function_from_string(const std::string& name) {
    if (name == "sigma") return ArithFunction::Sigma;
    if (name == "phi") return ArithFunction::Phi;
    if (name == "divisor_count" || name == "d") return ArithFunction::DivisorCount;
    if (name == "omega_distinct" || name == "omega") return ArithFunction::OmegaDistinct;
    if (name == "omega_with_multiplicity" || name == "Omega" || name == "bigomega")
        return ArithFunction::OmegaWithMultiplicity;
    throw InvalidInput("unknown arithmetic function '" + name + "'");
}

ArithTable ArithTable::sieve(ArithFunction f, std::uint64_t X, std::uint64_t max_horizon) {
    if (X < 2) throw InvalidInput("sieve horizon must be >= 2");
    if (X > max_horizon)
        throw HorizonTooLarge("sieve horizon " + std::to_string(X) +
                              " exceeds the memory budget " + std::to_string(max_horizon));

    const std::size_t n = static_cast<std::size_t>(X);
    std::vector<std::uint32_t> spf(n, 0);
    std::vector<std::uint32_t> primes;
    primes.reserve(n / 12 + 16);
    for (std::size_t i = 2; i < n; ++i) {
        if (spf[i] == 0) {
            spf[i] = static_cast<std::uint32_t>(i);
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : primes) {
            if (p > spf[i]) break;
            std::uint64_t ip = static_cast<std::uint64_t>(i) * p;
            if (ip >= X) break;
            spf[static_cast<std::size_t>(ip)] = p;
        }
    }

    // pw[n] = spf(n)^e, the full power of the smallest prime dividing n.
    std::vector<std::uint32_t> pw(n, 0);
    std::vector<std::uint64_t> v(n, 0);
    if (n > 1) v[1] = (f == ArithFunction::OmegaDistinct ||
                       f == ArithFunction::OmegaWithMultiplicity)
                          ? 0
                          : 1;
    for (std::size_t i = 2; i < n; ++i) {
        std::uint32_t p = spf[i];
        std::size_t m = i / p;
        pw[i] = (spf[m] == p) ? pw[m] * p : p;
        std::size_t rest = i / pw[i];
        bool prime_power = (rest == 1);
        switch (f) {
            case ArithFunction::Sigma:
                if (i == p)
                    v[i] = static_cast<std::uint64_t>(p) + 1;
                else if (prime_power)
                    v[i] = v[m] + i;  // sigma(p^e) = sigma(p^(e-1)) + p^e
                else
                    v[i] = v[pw[i]] * v[rest];
                break;
            case ArithFunction::Phi:
                if (i == p)
                    v[i] = p - 1;
                else if (spf[m] == p)
                    v[i] = v[m] * p;
                else
                    v[i] = v[m] * (p - 1);
                break;
            case ArithFunction::DivisorCount:
                if (prime_power)
                    v[i] = v[m] + 1;  // d(p^e) = e + 1
                else
                    v[i] = v[pw[i]] * v[rest];
                break;
            case ArithFunction::OmegaDistinct:
                v[i] = v[rest] + 1;
                break;
            case ArithFunction::OmegaWithMultiplicity:
                v[i] = v[m] + 1;
                break;
        }
    }
    return ArithTable(f, X, std::move(v));
}

std::uint64_t ArithTable::value(std::uint64_t n) const {
    if (n < 1 || n >= horizon_) throw OutOfHorizon("n out of table range");
    return values_[static_cast<std::size_t>(n)];
}

namespace {
void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}
std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}
}  // namespace

void ArithTable::write_binary(std::ostream& os) const {
    // 16-byte header: magic "SSAT", u16 version, u16 function id, u64 horizon.
    os.write("SSAT", 4);
    unsigned char ver[2] = {1, 0};
    os.write(reinterpret_cast<const char*>(ver), 2);
    unsigned char fid[2] = {static_cast<unsigned char>(function_), 0};
    os.write(reinterpret_cast<const char*>(fid), 2);
    put_u64(os, horizon_);
    for (std::uint64_t i = 1; i < horizon_; ++i)
        put_u64(os, values_[static_cast<std::size_t>(i)]);
}

ArithTable ArithTable::read_binary(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != "SSAT")
        throw InvalidInput("bad arithmetic table magic");
    unsigned char ver[2], fid[2];
    is.read(reinterpret_cast<char*>(ver), 2);
    is.read(reinterpret_cast<char*>(fid), 2);
    if (ver[0] != 1) throw InvalidInput("unsupported table version");
    std::uint64_t X = get_u64(is);
    std::vector<std::uint64_t> v(static_cast<std::size_t>(X), 0);
    for (std::uint64_t i = 1; i < X; ++i) v[static_cast<std::size_t>(i)] = get_u64(is);
    if (!is) throw InvalidInput("truncated arithmetic table");
    return ArithTable(static_cast<ArithFunction>(fid[0]), X, std::move(v));
}

void ArithTable::write_csv(std::ostream& os) const {
    os << "n,value\n";
    for (std::uint64_t i = 1; i < horizon_; ++i)
        os << i << "," << values_[static_cast<std::size_t>(i)] << "\n";
}

mpz_class summatory(const ArithTable& table, unsigned k, std::uint64_t x) {
    if (x >= table.horizon()) throw OutOfHorizon("summatory bound exceeds table horizon");
    if (k == 0) return mpz_class(static_cast<unsigned long>(x));
    mpz_class total(0);
    const auto& v = table.values();
    unsigned __int128 acc = 0;
    auto flush = [&] {
        if (acc == 0) return;
        mpz_class hi(static_cast<std::uint64_t>(acc >> 64));
        hi <<= 64;
        total += hi + mpz_class(static_cast<std::uint64_t>(acc));
        acc = 0;
    };
    const unsigned __int128 u128max = ~static_cast<unsigned __int128>(0);
    for (std::uint64_t n = 1; n <= x; ++n) {
        std::uint64_t f = v[static_cast<std::size_t>(n)];
        unsigned __int128 t = 1;
        bool safe = true;
        for (unsigned j = 0; j < k && safe; ++j) {
            if (f != 0 && t > u128max / f)
                safe = false;
            else
                t *= f;
        }
        if (safe && t <= u128max - acc) {
            acc += t;
        } else {
            flush();
            mpz_class p;
            mpz_class fp(f);
            mpz_pow_ui(p.get_mpz_t(), fp.get_mpz_t(), k);
            total += p;
        }
    }
    flush();
    return total;
}

namespace {

// ceil of 4 * x * loglog(max(x,16)), rounded up through mpfr; the clamp keeps
// the loglog shape meaningful below e^e.
mpz_class phi_policy_horizon(std::uint64_t x) {
    mpfr_t t;
    mpfr_init2(t, 96);
    mpfr_set_ui(t, static_cast<unsigned long>(std::max<std::uint64_t>(x, 16)), MPFR_RNDU);
    mpfr_log(t, t, MPFR_RNDU);
    mpfr_log(t, t, MPFR_RNDU);
    mpfr_mul_ui(t, t, 4, MPFR_RNDU);
    mpfr_mul_ui(t, t, static_cast<unsigned long>(x), MPFR_RNDU);
    mpfr_ceil(t, t);
    mpz_class out;
    mpfr_get_z(out.get_mpz_t(), t, MPFR_RNDU);
    mpfr_clear(t);
    mpz_class floor_x(static_cast<unsigned long>(x));
    if (out < floor_x) out = floor_x;
    return out;
}

}  // namespace

mpz_class required_value_set_horizon(ArithFunction f, std::uint64_t x) {
    if (x < 2) return 2;
    switch (f) {
        case ArithFunction::Sigma:
            // m <= sigma(m): every value < x is attained below x.
            return mpz_class(static_cast<unsigned long>(x));
        case ArithFunction::Phi:
            return phi_policy_horizon(x);
        case ArithFunction::DivisorCount: {
            // d(2^(v-1)) = v: horizon > 2^(x-2)
            mpz_class h(1);
            h <<= static_cast<unsigned long>(x - 2);
            return h + 1;
        }
        case ArithFunction::OmegaDistinct: {
            // omega(p1 p2 ... pv) = v: horizon > primorial(x-1)
            mpz_class h(1);
            std::uint64_t count = 0;
            for (std::uint64_t p = 2; count + 1 < x; ++p) {
                bool prime = true;
                for (std::uint64_t q = 2; q * q <= p; ++q)
                    if (p % q == 0) {
                        prime = false;
                        break;
                    }
                if (prime) {
                    h *= static_cast<unsigned long>(p);
                    ++count;
                }
            }
            return h + 1;
        }
        case ArithFunction::OmegaWithMultiplicity: {
            // Omega(2^v) = v: horizon > 2^(x-1)
            mpz_class h(1);
            h <<= static_cast<unsigned long>(x - 1);
            return h + 1;
        }
    }
    return mpz_class(static_cast<unsigned long>(x));
}

ValueSetCount value_set_count(const ArithTable& table, std::uint64_t x,
                              std::size_t witness_cap) {
    if (x < 1) throw InvalidInput("value_set_count needs x >= 1");
    if (x > table.horizon()) throw OutOfHorizon("x exceeds table horizon");
    mpz_class need = required_value_set_horizon(table.function_id(), x);
    if (mpz_class(static_cast<unsigned long>(table.horizon())) < need)
        throw HorizonInsufficient("table horizon cannot certify the value set below " +
                                      std::to_string(x),
                                  need);
    if (table.function_id() == ArithFunction::Phi) {
        // Policy verification pass: a phi value below x in the top decile of
        // the table would breach the preimage bound.
        std::uint64_t start = table.horizon() - table.horizon() / 10;
        for (std::uint64_t m = std::max<std::uint64_t>(start, 1); m < table.horizon(); ++m)
            if (table.values()[static_cast<std::size_t>(m)] < x)
                throw HorizonInsufficient(
                    "phi preimage policy violated in the top decile at m = " +
                        std::to_string(m),
                    mpz_class(static_cast<unsigned long>(table.horizon())) * 2);
    }

    std::vector<bool> seen(static_cast<std::size_t>(x), false);
    for (std::uint64_t m = 1; m < table.horizon(); ++m) {
        std::uint64_t v = table.values()[static_cast<std::size_t>(m)];
        if (v >= 1 && v < x) seen[static_cast<std::size_t>(v)] = true;
    }
    ValueSetCount out;
    for (std::uint64_t v = 1; v < x; ++v) {
        if (!seen[static_cast<std::size_t>(v)]) continue;
        ++out.count;
        if (out.witness_set.size() < witness_cap)
            out.witness_set.push_back(v);
        else
            out.witness_capped = true;
    }
    return out;
}

PhiLowerBoundScan phi_lower_bound_check(const ArithTable& table, std::uint64_t x) {
    if (table.function_id() != ArithFunction::Phi)
        throw InvalidInput("phi_lower_bound_check needs a phi table");
    if (x < 10) throw InvalidInput("phi_lower_bound_check needs x >= 10");
    if (x > table.horizon()) throw OutOfHorizon("x exceeds table horizon");

    // Double pass shortlists candidates; intervals certify the winner.
    double dmin = std::numeric_limits<double>::infinity();
    const auto& v = table.values();
    for (std::uint64_t n = 3; n < x; ++n) {
        double r = static_cast<double>(v[static_cast<std::size_t>(n)]) *
                   std::log(std::log(static_cast<double>(n))) / static_cast<double>(n);
        if (r < dmin) dmin = r;
    }
    const double margin = 1e-6;
    PhiLowerBoundScan out;
    bool first = true;
    for (std::uint64_t n = 3; n < x; ++n) {
        double r = static_cast<double>(v[static_cast<std::size_t>(n)]) *
                   std::log(std::log(static_cast<double>(n))) / static_cast<double>(n);
        if (r > dmin + margin) continue;
        Interval nn = Interval::exact(mpz_class(static_cast<unsigned long>(n)), 128);
        Interval phi_n = Interval::exact(
            mpz_class(static_cast<unsigned long>(v[static_cast<std::size_t>(n)])), 128);
        Interval ratio = div(mul(phi_n, log_natural(log_natural(nn))), nn);
        if (first || ratio.certainly_less(out.minimum)) {
            out.minimum = ratio;
            out.argmin = n;
            first = false;
        } else if (ratio.intersects(out.minimum) &&
                   ratio.lo_double() < out.minimum.lo_double()) {
            out.minimum = min_of(out.minimum, ratio);
        }
    }
    return out;
}

}  // namespace sparseseries
