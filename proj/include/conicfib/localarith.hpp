#ifndef CONICFIB_LOCALARITH_HPP
#define CONICFIB_LOCALARITH_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "conicfib/arith.hpp"
#include "conicfib/factor.hpp"

namespace conicfib {

/// A place of Q: the real place or a finite prime.
class Place
{
  public:
    static Place real() { return Place(); }

    /// Throws ContractError if p is not prime.
    static Place prime(u64 p);

    bool is_real() const { return p_ == 0; }
    u64 p() const { return p_; }

    std::string to_string() const;

    bool operator==(Place const &) const = default;
    auto operator<=>(Place const &) const = default;

  private:
    Place() = default;
    explicit Place(u64 p) : p_(p) {}
    u64 p_ = 0; // 0 encodes the real place
};

using Triple = std::array<i64, 3>;

struct SolubilityVerdict
{
    i64 F = 0;
    i64 G = 0;
    bool degenerate = false;
    /// every place where F x^2 + G y^2 = z^2 has no nontrivial local point, in increasing order (real first)
    std::vector<Place> obstructed_places;
    bool globally_soluble = true;
    std::optional<Triple> witness;
};

/// Hilbert symbol (a,b)_v for nonzero a, b.
int hilbert(i64 a, i64 b, Place v);

/* Same symbol at a specific place, without primality checks. */
int hilbert_real(i64 a, i64 b);
int hilbert_odd(i64 a, i64 b, u64 p);
int hilbert_two(i64 a, i64 b);

/// Local solubility of F x^2 + G y^2 = z^2 at v; zero coefficients are soluble.
bool conic_soluble_at(i64 F, i64 G, Place v);

struct SolveOptions
{
    /// attach a witness via find_point when |kernel(F) * kernel(G)| is at most this
    i64 witness_bound = 1'000'000;
};

/// Global solubility via the local-global principle for conics.
SolubilityVerdict conic_everywhere_soluble(i64 F, i64 G, SolveOptions const & opts = {});

/*
 * Solubility from already-reduced data. kF and kG are nonzero square-free,
 * primes lists the odd primes dividing kF * kG (any order, duplicates fine).
 */
bool kernel_pair_soluble(i64 kF, i64 kG, std::vector<u64> const & primes);
bool kernel_pair_soluble(i64 kF, i64 kG, u64 const * primes_f, std::size_t nf, u64 const * primes_g, std::size_t ng);

/// Largest |kernel(F) * kernel(G)| accepted by find_point.
inline constexpr i64 find_point_bound = 50'000'000;

/*
 * Exhaustive primitive search for F x^2 + G y^2 = z^2 over the region
 * |x| <= |G'|, |y| <= |F'|, |z| <= |F'G'| where F', G' are the square-free
 * kernels. Returns a primitive witness for the original F, G.
 */
std::optional<Triple> find_point(i64 F, i64 G);

/// p-adic valuation of nonzero n
int valuation(i64 n, u64 p);

} // namespace conicfib

#endif
