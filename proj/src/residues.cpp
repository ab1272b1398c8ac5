#include "conicfib/residues.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <tuple>

#include "conicfib/errors.hpp"
#include "conicfib/factor.hpp"
#include "conicfib/localarith.hpp"

namespace conicfib {

bool is_good_prime(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p)
{
    if (p < 3 || !is_prime(p))
        return false;
    return f.discriminant() % i64(p) != 0 && g.discriminant() % i64(p) != 0;
}

static void require_good(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p, char const * who)
{
    if (!is_good_prime(f, g, p))
        throw ContractError(std::string(who) + ": p = " + std::to_string(p) + " is not a good odd prime");
}

u64 HalfClassTally::total() const
{
    u64 t = zero_mod_p2;
    for (u64 x : by_k)
        t += x;
    for (u64 x : by_residue)
        t += x;
    return t;
}

u64 HalfClassTally::divisible_once() const
{
    return std::accumulate(by_k.begin(), by_k.end(), u64(0));
}

u64 HalfClassTally::nonresidue() const
{
    u64 n = 0;
    for (u64 r = 1; r < p; ++r)
        if (legendre(i64(r), p) == -1)
            n += by_residue[r];
    return n;
}

namespace {

HalfClassTally compute_tally(BinaryQuadraticForm const & F, u64 p)
{
    u64 const m = p * p;
    u64 const a = mod_nonneg(F.a(), m), b = mod_nonneg(F.b(), m), c = mod_nonneg(F.c(), m);
    HalfClassTally t;
    t.p = p;
    t.by_k.assign(p, 0);
    t.by_residue.assign(p, 0);
    for (u64 x1 = 0; x1 < m; ++x1) {
        u64 const ax = a * x1 % m * x1 % m;
        u64 const bx = b * x1 % m;
        bool const x1_div = x1 % p == 0;
        for (u64 x2 = 0; x2 < m; ++x2) {
            if (x1_div && x2 % p == 0)
                continue;
            u64 val = (ax + bx * x2 + c * x2 % m * x2) % m;
            if (val == 0)
                ++t.zero_mod_p2;
            else if (val % p == 0)
                ++t.by_k[val / p];
            else
                ++t.by_residue[val % p];
        }
    }
    return t;
}

} // namespace

HalfClassTally tally_half(BinaryQuadraticForm const & F, u64 p)
{
    if (p < 2 || !is_prime(p) || p > 0xFFFF)
        throw ContractError("tally_half: p must be a prime below 2^16");
    using Key = std::tuple<i64, i64, i64, u64>;
    static std::mutex mu;
    static std::map<Key, HalfClassTally> cache;
    Key key{F.a(), F.b(), F.c(), p};
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end())
            return it->second;
    }
    HalfClassTally t = compute_tally(F, p);
    std::lock_guard lock(mu);
    cache.emplace(key, t);
    return t;
}

int eta(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p)
{
    if (!is_good_prime(f, g, p))
        return 0;
    return int(splits_at(f, p)) + int(splits_at(g, p));
}

u64 zero_mod_p2_closed(i64 disc, u64 p)
{
    return u64(1 + legendre(disc, p)) * p * (p - 1);
}

static u64 superset_from_halves(u64 Hf, u64 Hg, u64 p)
{
    u128 half = u128(p) * p * p * p - u128(p) * p;
    u128 v = u128(Hf) * half + u128(Hg) * half - u128(Hf) * Hg;
    if (v > ~u64(0))
        throw OverflowError("superset count overflow");
    return u64(v);
}

OmegaCounts omega_brute(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p)
{
    require_good(f, g, p, "omega_brute");
    HalfClassTally tf = tally_half(f, p);
    HalfClassTally tg = tally_half(g, p);
    OmegaCounts r;
    r.p = p;
    r.source = OmegaSource::BruteForce;
    r.omega_f = tf.divisible_once() * tg.nonresidue();
    r.omega_g = tg.divisible_once() * tf.nonresidue();
    for (u64 k = 1; k < p; ++k) {
        if (tf.by_k[k] == 0)
            continue;
        for (u64 l = 1; l < p; ++l)
            if (legendre(-i64(k * l), p) == -1)
                r.omega_fg += tf.by_k[k] * tg.by_k[l];
    }
    r.omega_p2_sup = superset_from_halves(tf.zero_mod_p2, tg.zero_mod_p2, p);
    r.eta = eta(f, g, p);
    return r;
}

OmegaCounts omega_closed(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p)
{
    require_good(f, g, p, "omega_closed");
    int const cf = legendre(f.discriminant(), p);
    int const cg = legendre(g.discriminant(), p);
    u128 const cube = u128(p) * p * p * (p - 1) * (p - 1) * (p - 1);
    auto narrow = [](u128 v) {
        if (v > ~u64(0))
            throw OverflowError("omega_closed: count exceeds 64 bits");
        return u64(v);
    };
    OmegaCounts r;
    r.p = p;
    r.source = OmegaSource::ClosedForm;
    if (cf == 1)
        r.omega_f = narrow(cube * u128(i64(p) - cg));
    if (cg == 1)
        r.omega_g = narrow(cube * u128(i64(p) - cf));
    // summing 4p^2(p-1)^2 over the (p-1)^2/2 pairs (k, l) with -kl a non-residue
    if (cf == 1 && cg == 1)
        r.omega_fg = narrow(2 * cube / p * (p - 1));
    r.omega_p2_sup = superset_from_halves(zero_mod_p2_closed(f.discriminant(), p), zero_mod_p2_closed(g.discriminant(), p), p);
    r.eta = int(cf == 1) + int(cg == 1);
    return r;
}

SupersetCount omega_p2_superset(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p)
{
    require_good(f, g, p, "omega_p2_superset");
    SupersetCount s;
    s.Hf = tally_half(f, p).zero_mod_p2;
    s.Hg = tally_half(g, p).zero_mod_p2;
    s.Hf_closed = zero_mod_p2_closed(f.discriminant(), p);
    s.Hg_closed = zero_mod_p2_closed(g.discriminant(), p);
    s.count = superset_from_halves(s.Hf, s.Hg, p);
    return s;
}

long double omega_prime_share(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p)
{
    if (!is_good_prime(f, g, p))
        return 0;
    int const cf = legendre(f.discriminant(), p);
    int const cg = legendre(g.discriminant(), p);
    long double const q = 1.0L / (long double)p;
    long double const base = (1 - q) * (1 - q) * (1 - q) * q;
    long double s = 0;
    if (cf == 1)
        s += base * (1 - cg * q);
    if (cg == 1)
        s += base * (1 - cf * q);
    if (cf == 1 && cg == 1)
        s += 2 * base * q * (1 - q);
    return s;
}

long double superset_share(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p)
{
    if (!is_good_prime(f, g, p))
        return 0;
    long double const q = 1.0L / (long double)p;
    // H / p^4 = (1 + chi) (1 - q) q^2
    long double const hf = (1 + legendre(f.discriminant(), p)) * (1 - q) * q * q;
    long double const hg = (1 + legendre(g.discriminant(), p)) * (1 - q) * q * q;
    return (hf + hg) * (1 - q * q) - hf * hg;
}

HalfState classify_half(BinaryQuadraticForm const & F, u64 p, i64 x1, i64 x2)
{
    u64 const m = p * p;
    u64 const y1 = mod_nonneg(x1, m), y2 = mod_nonneg(x2, m);
    if (y1 % p == 0 && y2 % p == 0)
        return {HalfState::NotPrimitive, 0};
    u64 const a = mod_nonneg(F.a(), m), b = mod_nonneg(F.b(), m), c = mod_nonneg(F.c(), m);
    u64 const val = (a * y1 % m * y1 + b * y1 % m * y2 + c * y2 % m * y2) % m;
    if (val == 0)
        return {HalfState::ZeroModP2, 0};
    if (val % p == 0)
        return {HalfState::DivisibleOnce, std::uint32_t(val / p)};
    return {legendre(i64(val % p), p) == 1 ? HalfState::Residue : HalfState::NonResidue, 0};
}

bool in_omega_prime(HalfState u, HalfState v, u64 p)
{
    if (u.kind == HalfState::NotPrimitive || v.kind == HalfState::NotPrimitive)
        return false;
    if (u.kind == HalfState::DivisibleOnce && v.kind == HalfState::NonResidue)
        return true;
    if (v.kind == HalfState::DivisibleOnce && u.kind == HalfState::NonResidue)
        return true;
    if (u.kind == HalfState::DivisibleOnce && v.kind == HalfState::DivisibleOnce)
        return legendre(-i64(u64(u.k) * v.k), p) == -1;
    return false;
}

bool in_omega_prime(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p, i64 u1, i64 u2, i64 v1, i64 v2)
{
    if (!is_good_prime(f, g, p))
        return false;
    return in_omega_prime(classify_half(f, p, u1, u2), classify_half(g, p, v1, v2), p);
}

namespace {

using Class = std::pair<i64, i64>;

struct HalfLists
{
    std::vector<std::vector<Class>> by_k; // index k in 1..p-1
    std::vector<Class> nonresidue;
};

HalfLists half_lists(BinaryQuadraticForm const & F, u64 p)
{
    HalfLists h;
    h.by_k.resize(p);
    i64 const m = i64(p * p);
    for (i64 x1 = 0; x1 < m; ++x1)
        for (i64 x2 = 0; x2 < m; ++x2) {
            HalfState s = classify_half(F, p, x1, x2);
            if (s.kind == HalfState::DivisibleOnce)
                h.by_k[s.k].emplace_back(x1, x2);
            else if (s.kind == HalfState::NonResidue)
                h.nonresidue.emplace_back(x1, x2);
        }
    return h;
}

} // namespace

Lemma41Report lemma41_sample(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 p, u64 n,
                             Lemma41Options const & opts)
{
    require_good(f, g, p, "lemma41_sample");
    Lemma41Report rep;
    rep.p = p;

    HalfLists const lf = half_lists(f, p);
    HalfLists const lg = half_lists(g, p);
    std::vector<Class> af, ag;
    for (auto const & v : lf.by_k)
        af.insert(af.end(), v.begin(), v.end());
    for (auto const & v : lg.by_k)
        ag.insert(ag.end(), v.begin(), v.end());

    // blocks of Omega'_p as products of two class lists
    struct Block
    {
        std::vector<Class> const * us;
        std::vector<Class> const * vs;
    };
    std::vector<Block> blocks;
    std::vector<double> weights;
    auto add = [&](std::vector<Class> const & us, std::vector<Class> const & vs) {
        if (us.empty() || vs.empty())
            return;
        blocks.push_back({&us, &vs});
        weights.push_back(double(us.size()) * double(vs.size()));
    };
    add(af, lg.nonresidue);
    add(lf.nonresidue, ag);
    for (u64 k = 1; k < p; ++k)
        for (u64 l = 1; l < p; ++l)
            if (legendre(-i64(k * l), p) == -1)
                add(lf.by_k[k], lg.by_k[l]);

    if (blocks.empty()) {
        rep.vacuous = true;
        return rep;
    }

    std::mt19937_64 rng(opts.seed ^ (p * 0x9E3779B97F4A7C15ULL));
    std::discrete_distribution<std::size_t> pick_block(weights.begin(), weights.end());
    i64 const m = i64(p * p);
    i64 const tmax = std::max<i64>(1, opts.lift_range / m - 1);
    std::uniform_int_distribution<i64> pick_t(-tmax, tmax);

    auto lift = [&](Class c) {
        while (true) {
            i64 x1 = c.first + m * pick_t(rng);
            i64 x2 = c.second + m * pick_t(rng);
            if (std::gcd(x1, x2) == 1)
                return Class{x1, x2};
        }
    };

    for (u64 i = 0; i < n; ++i) {
        Block const & b = blocks[pick_block(rng)];
        Class cu = (*b.us)[std::uniform_int_distribution<std::size_t>(0, b.us->size() - 1)(rng)];
        Class cv = (*b.vs)[std::uniform_int_distribution<std::size_t>(0, b.vs->size() - 1)(rng)];
        Class u = lift(cu), v = lift(cv);
        i64 F = f.evaluate(u.first, u.second);
        i64 G = g.evaluate(v.first, v.second);
        ++rep.samples;
        if (!conic_soluble_at(F, G, Place::prime(p)))
            ++rep.insoluble;
        else
            rep.counterexamples.push_back({u.first, u.second, v.first, v.second});
    }
    return rep;
}

} // namespace conicfib
