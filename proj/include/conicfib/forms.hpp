#ifndef CONICFIB_FORMS_HPP
#define CONICFIB_FORMS_HPP

#include <string>
#include <string_view>

#include <boost/rational.hpp>

#include "conicfib/arith.hpp"

namespace conicfib {

using Rational = boost::rational<i64>;

/*
 * Integral binary quadratic form a*u1^2 + b*u1*u2 + c*u2^2 with nonzero
 * discriminant. Immutable after construction.
 */
class BinaryQuadraticForm
{
  public:
    /// Throws ContractError on zero discriminant.
    BinaryQuadraticForm(i64 a, i64 b, i64 c);

    /// Parses the literal "a,b,c" (no spaces). Throws ContractError.
    static BinaryQuadraticForm parse(std::string_view literal);

    i64 a() const { return a_; }
    i64 b() const { return b_; }
    i64 c() const { return c_; }

    i64 discriminant() const { return disc_; }

    /// max(|a|, |b|, |c|)
    i64 norm() const;

    /// Exact value; throws OverflowError instead of wrapping.
    i64 evaluate(i64 u1, i64 u2) const;

    /// Throws OverflowError unless 3 * norm * T^2 fits in 64 bits.
    void require_evaluable(i64 T) const;

    std::string to_string() const;

    bool operator==(BinaryQuadraticForm const &) const = default;

  private:
    i64 a_, b_, c_, disc_;
};

/// Splitting field data: splits over Q, or over Q(sqrt(d)) with d square-free, d != 1.
struct SplittingClass
{
    bool splits_over_q = false;
    i64 field_kernel = 1;

    bool operator==(SplittingClass const &) const = default;
};

SplittingClass splitting_class(BinaryQuadraticForm const & F);

/// Whether F factors mod p, for an odd prime p not dividing disc(F).
bool splits_at(BinaryQuadraticForm const & F, u64 p);

/// Whether some primitive (u1,u2) makes F(u1,u2) a perfect square (0 included).
bool represents_square(BinaryQuadraticForm const & F);

enum class PairCase
{
    BothSplitQ,
    FSplitsQOnly,
    GSplitsQOnly,
    NeitherSplitsQSameField,
    NeitherSplitsQDifferentFields,
};

std::string_view to_string(PairCase c);

struct FormPairProfile
{
    PairCase pair_case;
    Rational delta1; ///< primes splitting f only
    Rational delta2; ///< primes splitting g only
    Rational delta3; ///< primes splitting both
    Rational delta_pi;

    /// number of f, g splitting over Q (0, 1 or 2)
    int split_count() const;
};

FormPairProfile pair_profile(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g);

} // namespace conicfib

#endif
