#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sparseseries/interval.hpp"
#include "sparseseries/sequence.hpp"

namespace sparseseries {

/// Checkpoint schedule (x_i, y_i, z_i), the window constant eta, and the
/// interlacing constants. y defaults to x; z may be derived from the
/// Theorem-A reduction (z = sqrt(x / max(1, #N_a(x), #N_b(x)))).
struct CheckpointSchedule {
    std::vector<mpq_class> x;
    std::vector<mpq_class> y;  // empty: defaults to x
    std::vector<mpq_class> z;  // empty with theorem_a_z: derived from the data
    bool theorem_a_z = false;
    /// z_i = max(1, (2+delta)/ln(q) * ln ln x_i), the fiber-proof shape.
    std::optional<mpq_class> z_loglog_delta;
    mpq_class eta = mpq_class(1, 2);
    std::optional<mpq_class> interlace_delta;  // Delta > 1
    std::optional<mpq_class> interlace_l;      // L > 1

    /// x_i = first * factor^i while <= last.
    static CheckpointSchedule geometric(const mpq_class& first, const mpq_class& last,
                                        const mpq_class& factor = 10);

    void validate() const;
};

enum class Verdict { PassTrend, FailTrend, Inconclusive };
std::string to_string(Verdict v);

/// Evidence rules for asymptotic conditions at finite scale: an o(.) series
/// passes when the last ratio is certified <= halving * first and at least
/// ceil((m-1)/2) adjacent decreases are certified; an O(.) series passes
/// when every ratio stays certified <= big_o_cap.
struct TrendRule {
    mpq_class halving = mpq_class(1, 2);
    mpq_class big_o_cap = 10;
};

struct ConditionRow {
    std::string condition_id;
    std::string description;
    std::vector<mpq_class> checkpoints;  // the x_i
    std::vector<Interval> ratios;        // tracked series (empty when vacuous)
    Verdict verdict = Verdict::Inconclusive;
    bool vacuous = false;
    std::string note;
};

struct InterlacingViolation {
    std::uint64_t m = 0;
    std::uint64_t m_plus = 0;
    mpq_class mu;
};

struct InterlacingResult {
    bool pass = true;
    bool vacuous = false;
    std::uint64_t pairs_checked = 0;
    std::vector<InterlacingViolation> violations;  // capped at 100
};

struct NormWitness {
    unsigned long u = 0;
    std::uint64_t N = 0;
    Interval value;              // enclosure of u * xi_N(a + b)
    Interval conjugate_product;  // (u * S_{a+b}(N))^(d-1)
    bool contradiction = false;  // value in (0,1) and value * conjugate_product < 1
};

struct CriterionReport {
    std::string theorem;  // "main", "prepared", "rational", "rational-theorem-a"
    std::string minpoly;
    std::string base_description;
    std::string sequence_a;
    std::string sequence_b;
    std::vector<mpq_class> schedule_x;
    std::vector<mpq_class> schedule_y;
    std::vector<Interval> schedule_z;
    mpq_class eta = 1;
    std::vector<ConditionRow> rows;
    std::vector<NormWitness> witnesses;
    std::vector<InterlacingViolation> interlacing_violations;
};

CriterionReport check_theorem_main(const CoefficientSequence& a,
                                   const CoefficientSequence& b,
                                   const CheckpointSchedule& schedule,
                                   const TrendRule& rule = {});

CriterionReport check_theorem_prepared(const CoefficientSequence& a,
                                       const CoefficientSequence& b,
                                       const CheckpointSchedule& schedule,
                                       const TrendRule& rule = {});

CriterionReport check_theorem_rational(const mpz_class& t, const CoefficientSequence& a,
                                       const CoefficientSequence& b,
                                       const CheckpointSchedule& schedule,
                                       const TrendRule& rule = {});

/// Exhaustive critical-value scan of the interlacing condition: for every
/// consecutive pair m < m+ in B below `horizon` and every real mu in
/// [L, (m+ - m)/Delta), the window [m+mu, m+Delta*mu) must meet A.
/// Delta must exceed 1; L only needs to be positive (smaller L checks a
/// stronger condition than the theorems need).
InterlacingResult check_interlacing(const SupportSet& A, const SupportSet& B,
                                    const mpq_class& Delta, const mpq_class& L,
                                    std::uint64_t horizon,
                                    std::size_t violation_cap = 100);

struct DegreeEllRow {
    std::uint64_t k = 0;    // 1-based support index
    std::uint64_t n_k = 0;  // support element
    std::optional<Interval> ratio;  // n_k / (k^ell * log Q(n_k)); absent if log Q = 0
};

std::vector<DegreeEllRow> degree_ell_ratio(const CoefficientSequence& a, unsigned ell,
                                           std::uint64_t horizon,
                                           long precision_bits = 96);

struct LiouvilleGap {
    mpq_class max_ratio;
    std::uint64_t at_k = 0;  // 1-based: ratio n_{k+1} / n_k
    std::uint64_t n_k = 0;
    std::uint64_t n_k_plus = 0;
};

LiouvilleGap liouville_gap(const SupportSet& support);

struct CensusResult {
    std::uint64_t count = 0;
    std::uint64_t refined = 0;  // comparisons that needed extra precision
};

/// #{N in [1, eta*x) : w * xi_N(|c|) < delta}, exact; straddling enclosures
/// are refined up to three precision doublings, then UnresolvedIntervals.
CensusResult good_N_census(const CoefficientSequence& c, const mpq_class& w,
                           const mpq_class& delta, const mpq_class& eta,
                           const mpq_class& x, const mpq_class& z,
                           long precision_bits = 96);

/// #{N in [1, eta*x) : xi_N(|a|) > xi_N(|b|)}, exact.
CensusResult dominance_census(const CoefficientSequence& a, const CoefficientSequence& b,
                              const mpq_class& eta, const mpq_class& x,
                              long precision_bits = 96);

/// For each u <= u_max, the smallest N <= N_max such that
/// u*xi_N(|a+b|) * (u*S_{a+b}(N))^(d-1) < 1 is certified while
/// xi_N(a) > xi_N(|b|); throws NoWitnessFound listing every failing u.
std::vector<NormWitness> witness_search(const CoefficientSequence& a,
                                        const CoefficientSequence& b,
                                        unsigned long u_max, std::uint64_t N_max,
                                        long precision_bits = 128);

}  // namespace sparseseries
