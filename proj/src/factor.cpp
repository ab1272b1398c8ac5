#include "conicfib/factor.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

#include "conicfib/errors.hpp"

namespace conicfib {

i64 Factorization::value() const
{
    i64 v = sign;
    for (auto [p, e] : factors)
        for (int i = 0; i < e; ++i)
            v = checked_mul(v, i64(p));
    return v;
}

bool is_prime(u64 n)
{
    if (n < 2)
        return false;
    static constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : small) {
        if (n % p == 0)
            return n == p;
    }
    u64 d = n - 1;
    int s = __builtin_ctzll(d);
    d >>= s;
    // these bases are deterministic for n < 2^64
    for (u64 a : small) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

std::vector<u64> primes_up_to(u64 n)
{
    std::vector<u64> primes;
    if (n < 2)
        return primes;
    std::vector<bool> composite(n + 1, false);
    for (u64 i = 2; i <= n; ++i) {
        if (composite[i])
            continue;
        primes.push_back(i);
        for (u64 j = i * i; j <= n; j += i)
            composite[j] = true;
    }
    return primes;
}

FactorTable::FactorTable(u64 bound)
    : bound_(std::max<u64>(bound, 2))
    , spf_(bound_ + 1, 0)
{
    if (bound_ > 0xFFFFFFFFu)
        throw ContractError("FactorTable: bound too large for 32-bit entries");
    std::vector<std::uint32_t> primes;
    for (u64 i = 2; i <= bound_; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = std::uint32_t(i);
            primes.push_back(std::uint32_t(i));
        }
        for (std::uint32_t p : primes) {
            u64 next = u64(p) * i;
            if (p > spf_[i] || next > bound_)
                break;
            spf_[next] = p;
        }
    }
}

static u64 gcd_u64(u64 a, u64 b)
{
    return std::gcd(a, b);
}

u64 pollard_brent(u64 n, u64 max_iterations)
{
    if (n % 2 == 0)
        return 2;
    u64 iterations = 0;
    for (u64 c = 1; c < 64; ++c) {
        auto step = [&](u64 x) { return (mulmod(x, x, n) + c) % n; };
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        u64 r = 1;
        constexpr u64 block = 128;
        do {
            x = y;
            for (u64 i = 0; i < r; ++i)
                y = step(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(block, r - k); ++i) {
                    y = step(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = gcd_u64(q, n);
                k += block;
                iterations += block;
            } while (k < r && g == 1);
            r *= 2;
            if (iterations > max_iterations)
                throw FactorizationError("pollard_brent: iteration budget exhausted for " + std::to_string(n));
        } while (g == 1);
        if (g == n) {
            do {
                ys = step(ys);
                g = gcd_u64(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
    throw FactorizationError("pollard_brent: no factor found for " + std::to_string(n));
}

void FactorTable::factor_abs(u64 n, std::vector<std::pair<u64, int>> & out) const
{
    auto push = [&](u64 p) {
        for (auto & [q, e] : out) {
            if (q == p) {
                ++e;
                return;
            }
        }
        out.emplace_back(p, 1);
    };
    if (n <= bound_) {
        while (n > 1) {
            u64 p = spf_[n];
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            bool merged = false;
            for (auto & [q, f] : out) {
                if (q == p) {
                    f += e;
                    merged = true;
                }
            }
            if (!merged)
                out.emplace_back(p, e);
        }
        return;
    }
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
        while (n % p == 0) {
            push(p);
            n /= p;
        }
    }
    if (n == 1)
        return;
    if (n <= bound_) {
        factor_abs(n, out);
        return;
    }
    if (is_prime(n)) {
        push(n);
        return;
    }
    u64 d = pollard_brent(n);
    factor_abs(d, out);
    factor_abs(n / d, out);
}

Factorization FactorTable::factorize(i64 n) const
{
    if (n == 0)
        throw ContractError("factorize: zero has no factorization");
    Factorization f;
    f.sign = n < 0 ? -1 : 1;
    factor_abs(abs_u64(n), f.factors);
    std::sort(f.factors.begin(), f.factors.end());
    return f;
}

std::shared_ptr<FactorTable const> shared_factor_table(u64 bound)
{
    static std::mutex mu;
    static std::shared_ptr<FactorTable const> table;
    std::lock_guard lock(mu);
    if (!table || table->bound() < bound)
        table = std::make_shared<FactorTable const>(std::max<u64>(bound, table ? table->bound() : 0));
    return table;
}

Factorization factorize(i64 n)
{
    return shared_factor_table()->factorize(n);
}

i64 squarefree_kernel(Factorization const & f)
{
    i64 d = f.sign;
    for (auto [p, e] : f.factors)
        if (e & 1)
            d = checked_mul(d, i64(p));
    return d;
}

i64 squarefree_kernel(i64 n)
{
    return squarefree_kernel(factorize(n));
}

} // namespace conicfib
