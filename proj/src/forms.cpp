#include "conicfib/forms.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <vector>

#include "conicfib/errors.hpp"
#include "conicfib/factor.hpp"
#include "conicfib/localarith.hpp"

namespace conicfib {

BinaryQuadraticForm::BinaryQuadraticForm(i64 a, i64 b, i64 c)
    : a_(a)
    , b_(b)
    , c_(c)
{
    i128 d = i128(b) * b - i128(4) * a * c;
    if (d == 0)
        throw ContractError("binary quadratic form " + to_string() + " has zero discriminant");
    disc_ = narrow_checked(d);
}

BinaryQuadraticForm BinaryQuadraticForm::parse(std::string_view literal)
{
    std::vector<i64> coeffs;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = literal.find(',', pos);
        std::string_view piece = literal.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        i64 value = 0;
        auto [end, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
        if (piece.empty() || ec != std::errc() || end != piece.data() + piece.size())
            throw ContractError("malformed form literal '" + std::string(literal) + "', expected a,b,c");
        coeffs.push_back(value);
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    if (coeffs.size() != 3)
        throw ContractError("malformed form literal '" + std::string(literal) + "', expected a,b,c");
    return {coeffs[0], coeffs[1], coeffs[2]};
}

i64 BinaryQuadraticForm::norm() const
{
    return i64(std::max({abs_u64(a_), abs_u64(b_), abs_u64(c_)}));
}

i64 BinaryQuadraticForm::evaluate(i64 u1, i64 u2) const
{
    i128 v = i128(a_) * u1 * u1 + i128(b_) * u1 * u2 + i128(c_) * u2 * u2;
    return narrow_checked(v);
}

void BinaryQuadraticForm::require_evaluable(i64 T) const
{
    i128 bound = i128(3) * norm() * T * T;
    if (T < 0 || bound > std::numeric_limits<i64>::max())
        throw OverflowError("form " + to_string() + " cannot be evaluated exactly up to coordinate bound " + std::to_string(T));
}

std::string BinaryQuadraticForm::to_string() const
{
    return std::to_string(a_) + "," + std::to_string(b_) + "," + std::to_string(c_);
}

SplittingClass splitting_class(BinaryQuadraticForm const & F)
{
    i64 d = F.discriminant();
    if (is_square(d))
        return {true, 1};
    return {false, squarefree_kernel(d)};
}

bool splits_at(BinaryQuadraticForm const & F, u64 p)
{
    if (p < 3 || !is_prime(p))
        throw ContractError("splits_at: p must be an odd prime");
    if (F.discriminant() % i64(p) == 0)
        throw ContractError("splits_at: p divides the discriminant");
    return legendre(F.discriminant(), p) == 1;
}

bool represents_square(BinaryQuadraticForm const & F)
{
    if (splitting_class(F).splits_over_q)
        return true;
    // disc is not a square here, so a and c cannot both vanish
    i64 lead = F.a();
    if (lead == 0)
        lead = F.c();
    if (lead == 0)
        lead = F.evaluate(1, 1);
    // 4a f(u) = (2a u1 + b u2)^2 - D u2^2, so f(u) = w^2 has a primitive
    // solution iff X^2 = D Y^2 + 4a Z^2 has a nontrivial rational point.
    return conic_everywhere_soluble(F.discriminant(), checked_mul(4, lead), {.witness_bound = 0}).globally_soluble;
}

std::string_view to_string(PairCase c)
{
    switch (c) {
    case PairCase::BothSplitQ:
        return "BothSplitQ";
    case PairCase::FSplitsQOnly:
        return "FSplitsQOnly";
    case PairCase::GSplitsQOnly:
        return "GSplitsQOnly";
    case PairCase::NeitherSplitsQSameField:
        return "NeitherSplitsQSameField";
    case PairCase::NeitherSplitsQDifferentFields:
        return "NeitherSplitsQDifferentFields";
    }
    return "?";
}

int FormPairProfile::split_count() const
{
    switch (pair_case) {
    case PairCase::BothSplitQ:
        return 2;
    case PairCase::FSplitsQOnly:
    case PairCase::GSplitsQOnly:
        return 1;
    default:
        return 0;
    }
}

FormPairProfile pair_profile(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g)
{
    SplittingClass sf = splitting_class(f);
    SplittingClass sg = splitting_class(g);
    FormPairProfile r;
    if (sf.splits_over_q && sg.splits_over_q)
        r = {PairCase::BothSplitQ, {0}, {0}, {1}, {}};
    else if (sf.splits_over_q)
        r = {PairCase::FSplitsQOnly, {1, 2}, {0}, {1, 2}, {}};
    else if (sg.splits_over_q)
        r = {PairCase::GSplitsQOnly, {0}, {1, 2}, {1, 2}, {}};
    else if (sf.field_kernel == sg.field_kernel)
        r = {PairCase::NeitherSplitsQSameField, {0}, {0}, {1, 2}, {}};
    else
        r = {PairCase::NeitherSplitsQDifferentFields, {1, 4}, {1, 4}, {1, 4}, {}};
    r.delta_pi = r.delta1 + r.delta2 + Rational(2) * r.delta3;
    return r;
}

} // namespace conicfib
