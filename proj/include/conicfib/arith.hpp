#ifndef CONICFIB_ARITH_HPP
#define CONICFIB_ARITH_HPP

#include <cstdint>
#include <numeric>

namespace conicfib {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

/* Checked arithmetic: throws OverflowError instead of wrapping. */
i64 checked_mul(i64 a, i64 b);
i64 checked_add(i64 a, i64 b);
i64 narrow_checked(i128 x);

/// floor(sqrt(n)) for n >= 0.
u64 isqrt(u64 n);

/// True iff n is the square of an integer (0 counts).
bool is_square(i64 n);

inline u64 abs_u64(i64 x)
{
    return x < 0 ? u64(0) - u64(x) : u64(x);
}

inline u64 mulmod(u64 a, u64 b, u64 m)
{
    return u64(u128(a) * b % m);
}

u64 powmod(u64 base, u64 exp, u64 m);

/// Jacobi symbol (a|n) for odd positive n.
int jacobi(i64 a, u64 n);

/// Kronecker symbol (a|n); n == 0 is rejected with ContractError.
int kronecker(i64 a, i64 n);

/// Legendre symbol for an odd prime p.
inline int legendre(i64 a, u64 p)
{
    return jacobi(a, p);
}

/// Nonnegative residue of a modulo m.
inline u64 mod_nonneg(i64 a, u64 m)
{
    i64 r = a % i64(m);
    return u64(r < 0 ? r + i64(m) : r);
}

} // namespace conicfib

#endif
