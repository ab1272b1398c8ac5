#include "conicfib/fibrecount.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <thread>

#include "conicfib/errors.hpp"
#include "conicfib/residues.hpp"

namespace conicfib {

FibreClass classify_fibre(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, ProjPoint const & u,
                          ProjPoint const & v)
{
    FibreClass c;
    c.F = f.evaluate(u.u1, u.u2);
    c.G = g.evaluate(v.u1, v.u2);
    SolubilityVerdict verdict;
    try {
        verdict = conic_everywhere_soluble(c.F, c.G, {.witness_bound = 0});
    } catch (FactorizationError const & e) {
        throw FactorizationError(std::string(e.what()) + " (fibre F=" + std::to_string(c.F)
                                 + ", G=" + std::to_string(c.G) + ")");
    }
    c.soluble = verdict.globally_soluble;
    c.obstructed_places = verdict.obstructed_places;
    c.thin1 = is_square(c.F) || is_square(c.G);
    c.thin2 = c.F == 0 || c.G == 0 || squarefree_kernel(c.F) == squarefree_kernel(c.G);
    return c;
}

std::string CountReport::to_csv(bool timing) const
{
    std::string out = "B,points_total,N,Nstar,thin1,thin2,seconds\n";
    char buf[256];
    for (CountRow const & r : rows) {
        std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%llu,%llu,%llu,%.3f\n", (unsigned long long)r.B,
                      (unsigned long long)r.points_total, (unsigned long long)r.N, (unsigned long long)r.Nstar,
                      (unsigned long long)r.thin1, (unsigned long long)r.thin2, timing ? r.seconds : 0.0);
        out += buf;
    }
    return out;
}

namespace {

/* Per-point data for one side of the fibration. */
struct SideTable
{
    std::vector<i64> kernel;       // 0 when the value is 0
    std::vector<std::uint8_t> sq;  // value is a perfect square (0 included)
    std::vector<std::uint32_t> off; // odd kernel primes: primes[off[i] .. off[i+1])
    std::vector<u64> primes;
};

SideTable build_side(BinaryQuadraticForm const & form, std::vector<ProjPoint> const & pts, FactorTable const & table)
{
    SideTable s;
    s.kernel.resize(pts.size());
    s.sq.resize(pts.size());
    s.off.resize(pts.size() + 1);
    std::vector<std::pair<u64, int>> fac;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        s.off[i] = std::uint32_t(s.primes.size());
        i64 val = form.evaluate(pts[i].u1, pts[i].u2);
        s.sq[i] = is_square(val);
        if (val == 0) {
            s.kernel[i] = 0;
            continue;
        }
        fac.clear();
        table.factor_abs(abs_u64(val), fac);
        i64 k = val < 0 ? -1 : 1;
        for (auto [p, e] : fac) {
            if (!(e & 1))
                continue;
            k *= i64(p);
            if (p != 2)
                s.primes.push_back(p);
        }
        s.kernel[i] = k;
    }
    s.off[pts.size()] = std::uint32_t(s.primes.size());
    return s;
}

struct Tally
{
    u64 total = 0, N = 0, Nstar = 0, thin1 = 0, thin2 = 0;
    u64 lookups = 0, hits = 0;

    Tally & operator+=(Tally const & o)
    {
        total += o.total;
        N += o.N;
        Nstar += o.Nstar;
        thin1 += o.thin1;
        thin2 += o.thin2;
        lookups += o.lookups;
        hits += o.hits;
        return *this;
    }
};

/* Direct-mapped cache of verdicts keyed on the kernel pair. */
class VerdictCache
{
  public:
    explicit VerdictCache(std::size_t slots)
    {
        std::size_t n = 1;
        while (n < slots)
            n <<= 1;
        entries_.assign(n, Entry{});
        mask_ = n - 1;
    }

    template <class Compute>
    bool get(i64 kF, i64 kG, Tally & t, Compute && compute)
    {
        ++t.lookups;
        u64 h = u64(kF) * 0x9E3779B97F4A7C15ULL ^ (u64(kG) + 0x632BE59BD9B4E019ULL) * 0xC2B2AE3D27D4EB4FULL;
        Entry & e = entries_[(h >> 17) & mask_];
        if (e.valid && e.kF == kF && e.kG == kG) {
            ++t.hits;
            return e.soluble;
        }
        bool v = compute();
        e = {kF, kG, v, true};
        return v;
    }

  private:
    struct Entry
    {
        i64 kF = 0, kG = 0;
        bool soluble = false;
        bool valid = false;
    };
    std::vector<Entry> entries_;
    std::size_t mask_ = 0;
};

} // namespace

CountReport count(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, std::vector<u64> const & B_grid,
                  CountOptions const & opts)
{
    using clock = std::chrono::steady_clock;
    auto const start = clock::now();
    if (B_grid.empty())
        throw ContractError("count: empty B grid");
    for (std::size_t i = 0; i < B_grid.size(); ++i)
        if (B_grid[i] < 1 || (i > 0 && B_grid[i] <= B_grid[i - 1]))
            throw ContractError("count: B grid must be positive and strictly ascending");

    i64 const S = i64(isqrt(B_grid.back()));
    f.require_evaluable(S);
    g.require_evaluable(S);
    // about (12/pi^2)^2 B log B pairs; refuse before doing any work
    double const est = 1.5 * double(B_grid.back()) * (std::log(double(B_grid.back())) + 1.0);
    if (est > double(opts.max_pairs))
        throw BudgetError("count: B = " + std::to_string(B_grid.back()) + " exceeds the pair budget");

    std::vector<ProjPoint> const pts = enumerate(S);
    // first index of points of each size m, for m = 1..S+1
    std::vector<std::size_t> first(std::size_t(S) + 2, pts.size());
    for (std::size_t i = pts.size(); i-- > 0;)
        first[std::size_t(pts[i].size())] = i;
    for (std::size_t m = std::size_t(S); m >= 1; --m)
        first[m] = std::min(first[m], first[m + 1]);

    u64 const vmax = u64(3) * u64(std::max(f.norm(), g.norm())) * u64(S) * u64(S);
    auto const table = shared_factor_table(std::min<u64>(std::max<u64>(vmax, 1u << 16), opts.factor_table_cap));
    SideTable const sf = build_side(f, pts, *table);
    SideTable const sg = build_side(g, pts, *table);

    unsigned const workers = std::max(1u, opts.workers);
    std::vector<VerdictCache> caches(workers, VerdictCache(opts.memo_slots));

    auto pair_work = [&](std::size_t iu, std::size_t jlo, std::size_t jhi, VerdictCache & cache, Tally & t) {
        i64 const kF = sf.kernel[iu];
        bool const sqF = sf.sq[iu];
        u64 const * pf = sf.primes.data() + sf.off[iu];
        std::size_t const nf = sf.off[iu + 1] - sf.off[iu];
        for (std::size_t jv = jlo; jv < jhi; ++jv) {
            i64 const kG = sg.kernel[jv];
            bool const sqG = sg.sq[jv];
            ++t.total;
            if (sqF || sqG)
                ++t.thin1;
            if (kF == 0 || kG == 0) {
                ++t.N;
                ++t.thin2;
                continue;
            }
            if (kF == kG)
                ++t.thin2;
            bool sol = cache.get(kF, kG, t, [&] {
                return kernel_pair_soluble(kF, kG, pf, nf, sg.primes.data() + sg.off[jv], sg.off[jv + 1] - sg.off[jv]);
            });
            if (sol) {
                ++t.N;
                if (!sqF && !sqG)
                    ++t.Nstar;
            }
        }
    };

    CountReport report;
    Tally running;
    u64 s_prev = 0;
    for (u64 B : B_grid) {
        u64 const s_cur = isqrt(B);
        std::vector<Tally> tallies(workers);
        std::atomic<u64> next_a{1};
        auto run = [&](unsigned w) {
            Tally & t = tallies[w];
            while (true) {
                u64 a = next_a.fetch_add(1);
                if (a > s_cur)
                    break;
                u64 const b_lo = s_prev / a + 1, b_hi = s_cur / a;
                if (b_lo > b_hi)
                    continue;
                std::size_t const jlo = first[b_lo], jhi = first[b_hi + 1];
                for (std::size_t iu = first[a]; iu < first[a + 1]; ++iu)
                    pair_work(iu, jlo, jhi, caches[w], t);
            }
        };
        if (workers == 1) {
            run(0);
        } else {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back(run, w);
        }
        for (Tally const & t : tallies)
            running += t;
        CountRow row;
        row.B = B;
        row.points_total = running.total;
        row.N = running.N;
        row.Nstar = running.Nstar;
        row.thin1 = running.thin1;
        row.thin2 = running.thin2;
        row.seconds = std::chrono::duration<double>(clock::now() - start).count();
        report.rows.push_back(row);
        s_prev = s_cur;
    }
    report.memo_lookups = running.lookups;
    report.memo_hits = running.hits;
    return report;
}

i64 DyadicBox::R() const
{
    return std::min({T1, T2, S1, S2});
}

double DyadicBox::default_cutoff() const
{
    return std::pow(double(R()), 0.01);
}

void DyadicBox::validate() const
{
    for (i64 side : {T1, T2, S1, S2})
        if (side < 1 || (side & (side - 1)) != 0)
            throw ContractError("DyadicBox: sides must be positive powers of two");
    if (!(cutoff >= 2))
        throw ContractError("DyadicBox: cutoff must be at least 2");
}

u64 dyadic_sieved_count(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, DyadicBox const & box)
{
    box.validate();
    std::vector<u64> sieve_primes;
    for (u64 p : primes_up_to(u64(std::floor(box.cutoff))))
        if (is_good_prime(f, g, p))
            sieve_primes.push_back(p);

    // group primitive pairs of each half by their residue signature across the sieving primes
    using Signature = std::vector<HalfState>;
    auto groups = [&](BinaryQuadraticForm const & form, i64 A1, i64 A2) {
        std::map<std::vector<std::uint32_t>, std::pair<Signature, u64>> out;
        for (i64 x1 = A1; x1 <= 2 * A1; ++x1)
            for (i64 x2 = A2; x2 <= 2 * A2; ++x2) {
                if (std::gcd(x1, x2) != 1)
                    continue;
                Signature sig;
                std::vector<std::uint32_t> key;
                for (u64 p : sieve_primes) {
                    HalfState s = classify_half(form, p, x1, x2);
                    sig.push_back(s);
                    key.push_back(std::uint32_t(s.kind) << 24 | s.k);
                }
                auto [it, fresh] = out.try_emplace(std::move(key), std::move(sig), 0);
                ++it->second.second;
            }
        return out;
    };
    auto const gu = groups(f, box.T1, box.T2);
    auto const gv = groups(g, box.S1, box.S2);

    u64 total = 0;
    for (auto const & [ku, su] : gu)
        for (auto const & [kv, sv] : gv) {
            bool bad = false;
            for (std::size_t i = 0; i < sieve_primes.size() && !bad; ++i)
                bad = in_omega_prime(su.first[i], sv.first[i], sieve_primes[i]);
            if (!bad)
                total += su.second * sv.second;
        }
    return total;
}

} // namespace conicfib
