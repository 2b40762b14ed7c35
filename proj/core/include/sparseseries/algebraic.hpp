#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sparseseries/interval.hpp"
#include "sparseseries/polynomial.hpp"

namespace sparseseries {

enum class BaseKind { Pisot, Salem, NeitherPisotNorSalem, Undecided };

std::string to_string(BaseKind k);

/// Certified classification of the base together with the modulus gap of
/// the non-principal conjugates from the unit circle (when meaningful:
/// 1 - max modulus for Pisot, max modulus - 1 for Neither, [0,0] for Salem).
struct BaseClassification {
    BaseKind kind = BaseKind::Undecided;
    Interval margin;
};

/// Element of Z[q] in the power basis 1, q, ..., q^{d-1}; d integer coords.
class FieldElement {
public:
    explicit FieldElement(std::vector<mpz_class> coords);

    static FieldElement zero(long degree);
    static FieldElement from_integer(const mpz_class& v, long degree);

    long degree() const { return static_cast<long>(coords_.size()); }
    const std::vector<mpz_class>& coords() const { return coords_; }
    bool is_zero() const;
    /// True when all coords above the constant one vanish.
    bool is_rational_integer() const;
    const mpz_class& rational_value() const;  // requires is_rational_integer()

    IntPolynomial to_polynomial() const;

    bool operator==(const FieldElement& o) const { return coords_ == o.coords_; }

    std::string to_string() const;

private:
    std::vector<mpz_class> coords_;
};

/// The ambient field Q(q): minimal polynomial, certified conjugate boxes,
/// the principal real embedding q > 1, and the Pisot/Salem classification.
/// Immutable after construction; all operations are pure and safe to call
/// concurrently.
class AlgebraicField {
public:
    struct Options {
        long precision_bits = 128;       // target width of construction boxes
        bool assume_irreducible = false; // required for degree > 4
        int refinement_doublings = 8;
    };

    static std::shared_ptr<const AlgebraicField> build(const MonicIntPolynomial& minpoly,
                                                       Options options);
    static std::shared_ptr<const AlgebraicField> build(const MonicIntPolynomial& minpoly);
    /// Degree-1 field with q = t; convenience for the rational-base theorems.
    static std::shared_ptr<const AlgebraicField> rational_base(const mpz_class& t);

    const MonicIntPolynomial& minpoly() const { return minpoly_; }
    long degree() const { return minpoly_.degree(); }
    std::size_t principal_index() const { return principal_index_; }
    const BaseClassification& classification() const { return classification_; }
    /// Conjugate boxes at construction precision, pairwise disjoint, each
    /// certified to contain exactly one root. Index principal_index() is the
    /// real root > 1.
    const std::vector<ComplexInterval>& roots() const { return boxes_; }
    long construction_precision() const { return options_.precision_bits; }

    bool is_rational() const { return degree() == 1; }
    /// For degree-1 fields: the integer value of q.
    mpz_class rational_q() const;

    // -- elements ----------------------------------------------------------
    FieldElement zero() const { return FieldElement::zero(degree()); }
    FieldElement from_integer(const mpz_class& v) const {
        return FieldElement::from_integer(v, degree());
    }
    FieldElement from_coords(std::vector<mpz_class> coords) const;
    FieldElement generator() const;  // q itself (degree >= 2), or t for d = 1

    FieldElement add(const FieldElement& x, const FieldElement& y) const;
    FieldElement sub(const FieldElement& x, const FieldElement& y) const;
    FieldElement mul(const FieldElement& x, const FieldElement& y) const;
    FieldElement negate(const FieldElement& x) const;

    /// Max modulus over all conjugates, enclosed to width <= 2^-precision.
    Interval house(const FieldElement& x, long precision_bits) const;
    /// Exact N_{K/Q}(x) as a rational integer (resultant route).
    mpz_class norm(const FieldElement& x) const;
    /// Image of x under the chosen embedding, width <= 2^-precision.
    ComplexInterval embed(const FieldElement& x, std::size_t conjugate_index,
                          long precision_bits) const;
    /// Real enclosure of x under the principal embedding.
    Interval principal_value(const FieldElement& x, long precision_bits) const;
    /// Enclosure of |x| under the principal embedding.
    Interval principal_abs(const FieldElement& x, long precision_bits) const;

    /// Enclosure of q to width <= 2^-precision.
    Interval principal_root(long precision_bits) const;
    /// All conjugate boxes refined to width <= 2^-precision (pure).
    std::vector<ComplexInterval> refined_roots(long precision_bits) const;

    /// Certified q > v (refines q as needed; throws RefinementBudgetExceeded
    /// if undecidable within budget, which cannot happen for v != q).
    bool q_certainly_greater(const mpq_class& v) const;

private:
    AlgebraicField(MonicIntPolynomial minpoly, Options options);
    void isolate_roots();
    void classify();
    void check_element(const FieldElement& x) const;
    FieldElement reduce(IntPolynomial p) const;

    struct RealRoot {
        mpq_class lo, hi;  // isolating interval, lo == hi for exact roots
    };
    struct ComplexPair {
        mpq_class re, im;  // center of the Im > 0 representative (dyadic)
        mpq_class radius;  // certified disk radius
    };

    // Best-known refinements, shared across calls. Monotone improvements of
    // the construction boxes only; all public operations stay semantically
    // pure.
    RealRoot refined_real(std::size_t i, long bits) const;
    ComplexPair refined_pair(std::size_t i, long bits) const;

    MonicIntPolynomial minpoly_;
    Options options_;
    std::unique_ptr<SturmChain> sturm_;
    std::vector<RealRoot> real_roots_;      // ascending
    std::vector<ComplexPair> complex_pairs_;  // ascending by re
    std::size_t principal_real_ = 0;        // index into real_roots_
    std::size_t principal_index_ = 0;       // index into boxes_
    std::vector<ComplexInterval> boxes_;    // construction-precision boxes
    BaseClassification classification_;

    mutable std::mutex cache_mu_;
    mutable std::vector<RealRoot> best_real_;
    mutable std::vector<ComplexPair> best_pairs_;
};

using FieldPtr = std::shared_ptr<const AlgebraicField>;

/// Certified base classification (cached at construction).
inline const BaseClassification& classify_base(const AlgebraicField& field) {
    return field.classification();
}

}  // namespace sparseseries
