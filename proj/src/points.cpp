#include "conicfib/points.hpp"

#include <numeric>

#include "conicfib/errors.hpp"

namespace conicfib {

i64 ProjPoint::size() const
{
    return i64(std::max(abs_u64(u1), abs_u64(u2)));
}

ProjPoint canonicalize(i64 u1, i64 u2)
{
    if (u1 == 0 && u2 == 0)
        throw ContractError("canonicalize: (0,0) is not a projective point");
    i64 g = std::gcd(u1, u2);
    u1 /= g;
    u2 /= g;
    if (u2 < 0 || (u2 == 0 && u1 < 0)) {
        u1 = -u1;
        u2 = -u2;
    }
    return {u1, u2};
}

void for_each_of_size(i64 m, std::function<void(ProjPoint)> const & visit)
{
    if (m < 1)
        return;
    if (m == 1) {
        for (ProjPoint p : {ProjPoint{-1, 1}, ProjPoint{0, 1}, ProjPoint{1, 0}, ProjPoint{1, 1}})
            visit(p);
        return;
    }
    // lexicographic: u1 = -m (u2 in 1..m-1), then |u1| < m with u2 = m, then u1 = m
    for (i64 u2 = 1; u2 < m; ++u2)
        if (std::gcd(m, u2) == 1)
            visit({-m, u2});
    for (i64 u1 = -m + 1; u1 < m; ++u1)
        if (std::gcd(u1, m) == 1)
            visit({u1, m});
    for (i64 u2 = 1; u2 < m; ++u2)
        if (std::gcd(m, u2) == 1)
            visit({m, u2});
}

std::vector<ProjPoint> enumerate(i64 T)
{
    std::vector<ProjPoint> out;
    for (i64 m = 1; m <= T; ++m)
        for_each_of_size(m, [&](ProjPoint p) { out.push_back(p); });
    return out;
}

void for_each_in_range(i64 T, i64 u1_lo, i64 u1_hi, std::function<void(ProjPoint)> const & visit)
{
    for (i64 m = 1; m <= T; ++m)
        for_each_of_size(m, [&](ProjPoint p) {
            if (p.u1 >= u1_lo && p.u1 <= u1_hi)
                visit(p);
        });
}

u64 height(ProjPoint const & u)
{
    u64 s = u64(u.size());
    u128 h = u128(s) * s;
    if (h > ~u64(0))
        throw OverflowError("height overflow");
    return u64(h);
}

u64 height(SurfacePoint const & sp)
{
    u128 h = u128(height(sp.u)) * height(sp.v);
    if (h > ~u64(0))
        throw OverflowError("height overflow");
    return u64(h);
}

} // namespace conicfib
