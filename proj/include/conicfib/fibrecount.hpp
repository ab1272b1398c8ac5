#ifndef CONICFIB_FIBRECOUNT_HPP
#define CONICFIB_FIBRECOUNT_HPP

#include <string>
#include <vector>

#include "conicfib/factor.hpp"
#include "conicfib/forms.hpp"
#include "conicfib/localarith.hpp"
#include "conicfib/points.hpp"

namespace conicfib {

struct FibreClass
{
    i64 F = 0;
    i64 G = 0;
    bool soluble = false;
    bool thin1 = false; ///< F or G is a square
    bool thin2 = false; ///< F * G is a square
    std::vector<Place> obstructed_places;
};

FibreClass classify_fibre(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, ProjPoint const & u,
                          ProjPoint const & v);

struct CountRow
{
    u64 B = 0;
    u64 points_total = 0;
    u64 N = 0;
    u64 Nstar = 0;
    u64 thin1 = 0;
    u64 thin2 = 0;
    double seconds = 0; ///< wall clock from start until this row was complete

    bool operator==(CountRow const & o) const
    {
        return B == o.B && points_total == o.points_total && N == o.N && Nstar == o.Nstar && thin1 == o.thin1
               && thin2 == o.thin2;
    }
};

struct CountReport
{
    std::vector<CountRow> rows;
    u64 memo_lookups = 0;
    u64 memo_hits = 0;

    double memo_hit_rate() const { return memo_lookups ? double(memo_hits) / double(memo_lookups) : 0.0; }

    /// Header plus one row per B; with timing off the seconds column reads 0.000.
    std::string to_csv(bool timing = true) const;
};

struct CountOptions
{
    unsigned workers = 1;
    /// largest smallest-prime-factor table the counter may build
    u64 factor_table_cap = FactorTable::default_bound;
    /// direct-mapped verdict cache slots per worker (power of two)
    std::size_t memo_slots = std::size_t(1) << 16;
    /// refuse runs enumerating more surface points than this
    u64 max_pairs = 20'000'000'000ULL;
};

/*
 * N(B), N*(B), thin-set counts and the total number of points of height
 * H(u,v) <= B, for every B in the ascending grid.
 */
CountReport count(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, std::vector<u64> const & B_grid,
                  CountOptions const & opts = {});

/// Dyadic box [T1,2T1] x [T2,2T2] x [S1,2S1] x [S2,2S2] in positive coordinates.
struct DyadicBox
{
    i64 T1 = 1, T2 = 1, S1 = 1, S2 = 1;
    double cutoff = 2;

    i64 R() const;
    /// R^(1/100)
    double default_cutoff() const;
    /// throws ContractError unless all sides are positive powers of two and cutoff >= 2
    void validate() const;
};

/// Primitive (u, v) in the box avoiding Omega'_p mod p^2 for every good odd p <= cutoff.
u64 dyadic_sieved_count(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, DyadicBox const & box);

} // namespace conicfib

#endif
