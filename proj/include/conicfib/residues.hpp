#ifndef CONICFIB_RESIDUES_HPP
#define CONICFIB_RESIDUES_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "conicfib/forms.hpp"

namespace conicfib {

/*
 * Bad residue classes modulo p^2 for the fibration f(u) x^2 + g(v) y^2 = z^2.
 *
 * For a good odd prime p (p not dividing 2 disc(f) disc(g)) the set of
 * certified insoluble classes is the disjoint union of
 *   Omega_f  : f(u) = p k (k a unit), g(v) a non-residue mod p
 *   Omega_g  : symmetric
 *   Omega_fg : f(u) = p k, g(v) = p l, -k l a non-residue mod p
 * with u, v primitive mod p. Membership factors over the two coordinate
 * halves, so everything here is computed on (Z/p^2)^2 and combined.
 */

/// True iff p is an odd prime not dividing 2 disc(f) disc(g).
bool is_good_prime(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p);

/// Counts over the primitive classes of (Z/p^2)^2 for one form.
struct HalfClassTally
{
    u64 p = 0;
    u64 zero_mod_p2 = 0;         ///< form = 0 mod p^2
    std::vector<u64> by_k;       ///< [k] = #{form = p k mod p^2}, k in 1..p-1
    std::vector<u64> by_residue; ///< [r] = #{form = r mod p}, r in 1..p-1

    u64 total() const;
    /// #{form = p k mod p^2, k a unit}; the in-proof F(p)
    u64 divisible_once() const;
    /// #{form a quadratic non-residue mod p}; the in-proof G(p)
    u64 nonresidue() const;
};

/// Brute force over (Z/p^2)^2; results are memoized per (form, p).
HalfClassTally tally_half(BinaryQuadraticForm const & F, u64 p);

enum class OmegaSource
{
    BruteForce,
    ClosedForm
};

struct OmegaCounts
{
    u64 p = 0;
    u64 omega_f = 0;
    u64 omega_g = 0;
    u64 omega_fg = 0;
    u64 omega_p2_sup = 0;
    int eta = 0;
    OmegaSource source = OmegaSource::BruteForce;

    /// |Omega'_p|
    u64 omega_prime() const { return omega_f + omega_g + omega_fg; }
};

OmegaCounts omega_brute(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p);
OmegaCounts omega_closed(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p);

/// 0 for bad primes, otherwise the number of f, g split by p.
int eta(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p);

/// (1 + (D|p)) p (p-1): primitive classes mod p^2 on which a form of discriminant D vanishes mod p^2.
u64 zero_mod_p2_closed(i64 disc, u64 p);

struct SupersetCount
{
    u64 count = 0;
    u64 Hf = 0;
    u64 Hg = 0;
    u64 Hf_closed = 0;
    u64 Hg_closed = 0;

    bool matches_closed_form() const { return Hf == Hf_closed && Hg == Hg_closed; }
};

/// Classes with f = 0 mod p^2 or g = 0 mod p^2 (u, v primitive mod p), by inclusion-exclusion.
SupersetCount omega_p2_superset(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p);

/// |Omega'_p| / p^8 and the superset's share, in floating point, from the closed forms. 0 for bad p.
long double omega_prime_share(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p);
long double superset_share(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p);

/// Residue data of one coordinate half mod p^2.
struct HalfState
{
    enum Kind : std::uint8_t
    {
        NotPrimitive, ///< both coordinates divisible by p
        ZeroModP2,
        DivisibleOnce, ///< form = p k mod p^2, k stored
        Residue,       ///< nonzero square mod p
        NonResidue,
    };
    Kind kind = NotPrimitive;
    std::uint32_t k = 0;

    bool operator==(HalfState const &) const = default;
};

HalfState classify_half(BinaryQuadraticForm const & F, u64 p, i64 x1, i64 x2);

/// Membership of (u, v) mod p^2 in Omega'_p given both half states.
bool in_omega_prime(HalfState u, HalfState v, u64 p);

/// Membership for integer coordinates; false for bad primes.
bool in_omega_prime(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p, i64 u1, i64 u2, i64 v1, i64 v2);

struct Lemma41Report
{
    u64 p = 0;
    u64 samples = 0;
    u64 insoluble = 0;
    bool vacuous = false;
    /// lifted fibres that turned out locally soluble at p (should stay empty)
    std::vector<std::array<i64, 4>> counterexamples;

    bool passed() const { return vacuous || insoluble == samples; }
};

struct Lemma41Options
{
    u64 seed = 1;
    /// lifts are drawn from coordinates with absolute value at most this
    i64 lift_range = 1'000'000;
};

/*
 * Draws classes uniformly from Omega'_p, lifts each to a primitive integer
 * pair congruent to it mod p^2, and checks local insolubility at p.
 */
Lemma41Report lemma41_sample(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p, u64 n,
                             Lemma41Options const & opts = {});

} // namespace conicfib

#endif
