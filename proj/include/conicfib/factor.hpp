#ifndef CONICFIB_FACTOR_HPP
#define CONICFIB_FACTOR_HPP

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "conicfib/arith.hpp"

namespace conicfib {

struct Factorization
{
    int sign = 1;
    /// (prime, exponent) with strictly increasing primes
    std::vector<std::pair<u64, int>> factors;

    /// sign * prod p^e, checked
    i64 value() const;
};

/// Deterministic Miller-Rabin for the whole 64-bit range.
bool is_prime(u64 n);

/// All primes <= n in increasing order (sieve of Eratosthenes).
std::vector<u64> primes_up_to(u64 n);

/*
 * Smallest-prime-factor table on [0, bound]. Built once, then read-only and
 * safe to share between threads. Values above the bound are split with
 * Pollard-Brent rho after stripping small primes.
 */
class FactorTable
{
  public:
    static constexpr u64 default_bound = u64(1) << 25;

    explicit FactorTable(u64 bound = default_bound);

    u64 bound() const { return bound_; }

    /// Smallest prime factor of 2 <= n <= bound.
    u64 spf(u64 n) const { return spf_[n]; }

    /// Complete factorization of a nonzero integer.
    Factorization factorize(i64 n) const;

    /// Prime factors of |n| with exponents, appended to out (unsorted merge-free for n <= bound).
    void factor_abs(u64 n, std::vector<std::pair<u64, int>> & out) const;

  private:
    u64 bound_;
    std::vector<std::uint32_t> spf_;
};

/// Process-wide table, grown on demand to cover at least `bound`.
std::shared_ptr<FactorTable const> shared_factor_table(u64 bound = 1u << 20);

/// factorize with the shared default table
Factorization factorize(i64 n);

/// Unique square-free d with n = d * m^2; the sign of n is carried by d.
i64 squarefree_kernel(i64 n);
i64 squarefree_kernel(Factorization const & f);

/// Pollard-Brent: a nontrivial factor of composite odd n, or throws FactorizationError.
u64 pollard_brent(u64 n, u64 max_iterations = 1u << 24);

} // namespace conicfib

#endif
