#include "conicfib/arith.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "conicfib/errors.hpp"

namespace conicfib {

i64 checked_mul(i64 a, i64 b)
{
    i64 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError("integer overflow in multiplication " + std::to_string(a) + " * " + std::to_string(b));
    return r;
}

i64 checked_add(i64 a, i64 b)
{
    i64 r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("integer overflow in addition " + std::to_string(a) + " + " + std::to_string(b));
    return r;
}

i64 narrow_checked(i128 x)
{
    if (x > std::numeric_limits<i64>::max() || x < std::numeric_limits<i64>::min())
        throw OverflowError("value exceeds 64-bit range");
    return i64(x);
}

u64 isqrt(u64 n)
{
    u64 r = u64(std::sqrt(double(n)));
    while (r > 0 && u128(r) * r > n)
        --r;
    while (u128(r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

bool is_square(i64 n)
{
    if (n < 0)
        return false;
    // quadratic residues mod 64 filter most non-squares cheaply
    static constexpr u64 sq64 = 0x0202021202030213ULL;
    if (!((sq64 >> (u64(n) & 63)) & 1))
        return false;
    u64 r = isqrt(u64(n));
    return r * r == u64(n);
}

u64 powmod(u64 base, u64 exp, u64 m)
{
    u64 result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1)
            result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

int jacobi(i64 a_signed, u64 n)
{
    if (n == 0 || (n & 1) == 0)
        throw ContractError("jacobi: modulus must be odd and positive");
    u64 a = mod_nonneg(a_signed, n);
    int t = 1;
    while (a != 0) {
        int tz = __builtin_ctzll(a);
        a >>= tz;
        if ((tz & 1) && ((n & 7) == 3 || (n & 7) == 5))
            t = -t;
        if ((a & 3) == 3 && (n & 3) == 3)
            t = -t;
        u64 tmp = a;
        a = n % tmp;
        n = tmp;
    }
    return n == 1 ? t : 0;
}

int kronecker(i64 a, i64 n)
{
    if (n == 0)
        throw ContractError("kronecker: n must be nonzero");
    int t = 1;
    u64 m = abs_u64(n);
    if (n < 0 && a < 0)
        t = -t;
    int tz = __builtin_ctzll(m);
    m >>= tz;
    if (tz > 0) {
        if ((a & 1) == 0)
            return 0;
        // (a|2) = 1 for a = ±1 mod 8, -1 for a = ±3 mod 8
        u64 r = mod_nonneg(a, 8);
        if ((tz & 1) && (r == 3 || r == 5))
            t = -t;
    }
    if (m == 1)
        return t;
    return t * jacobi(a, m);
}

} // namespace conicfib
