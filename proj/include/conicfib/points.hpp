#ifndef CONICFIB_POINTS_HPP
#define CONICFIB_POINTS_HPP

#include <functional>
#include <vector>

#include "conicfib/arith.hpp"

namespace conicfib {

/*
 * A point of P^1(Q) as a primitive integer pair, sign-normalized so that
 * u2 > 0, or u2 == 0 and u1 == 1. Exactly one representative per point.
 */
struct ProjPoint
{
    i64 u1 = 1;
    i64 u2 = 0;

    /// max(|u1|, |u2|)
    i64 size() const;

    bool operator==(ProjPoint const &) const = default;
};

/// Throws ContractError for (0,0).
ProjPoint canonicalize(i64 u1, i64 u2);

/// Every point with size() <= T, ordered by size and then lexicographically.
std::vector<ProjPoint> enumerate(i64 T);

/// Streams the points of size exactly m (m >= 1) in lexicographic order.
void for_each_of_size(i64 m, std::function<void(ProjPoint)> const & visit);

/// Streams the points with size <= T whose first coordinate lies in [u1_lo, u1_hi].
void for_each_in_range(i64 T, i64 u1_lo, i64 u1_hi, std::function<void(ProjPoint)> const & visit);

/// Height of a single P^1 factor: size()^2.
u64 height(ProjPoint const & u);

struct SurfacePoint
{
    ProjPoint u;
    ProjPoint v;
};

/// Anticanonical height max(|u1|,|u2|)^2 * max(|v1|,|v2|)^2; overflow reported.
u64 height(SurfacePoint const & sp);

} // namespace conicfib

#endif
