#include "conicfib/localarith.hpp"

#include <algorithm>

#include "conicfib/errors.hpp"

namespace conicfib {

Place Place::prime(u64 p)
{
    if (!is_prime(p))
        throw ContractError("Place: " + std::to_string(p) + " is not prime");
    return Place(p);
}

std::string Place::to_string() const
{
    return is_real() ? std::string("real") : std::to_string(p_);
}

int valuation(i64 n, u64 p)
{
    if (n == 0)
        throw ContractError("valuation of zero");
    u64 m = abs_u64(n);
    int v = 0;
    while (m % p == 0) {
        m /= p;
        ++v;
    }
    return v;
}

namespace {

/// n = p^v * unit; returns v and sets unit
int split_power(i64 n, u64 p, i64 & unit)
{
    int v = 0;
    while (n % i64(p) == 0) {
        n /= i64(p);
        ++v;
    }
    unit = n;
    return v;
}

int sign_from_parity(unsigned e)
{
    return (e & 1) ? -1 : 1;
}

} // namespace

int hilbert_real(i64 a, i64 b)
{
    return (a < 0 && b < 0) ? -1 : 1;
}

int hilbert_odd(i64 a, i64 b, u64 p)
{
    i64 u, w;
    int alpha = split_power(a, p, u);
    int beta = split_power(b, p, w);
    unsigned e = 0;
    if ((alpha & 1) && (beta & 1) && (p & 3) == 3)
        ++e;
    int s = sign_from_parity(e);
    if (beta & 1)
        s *= legendre(u, p);
    if (alpha & 1)
        s *= legendre(w, p);
    return s;
}

int hilbert_two(i64 a, i64 b)
{
    i64 u, w;
    int alpha = split_power(a, 2, u);
    int beta = split_power(b, 2, w);
    u64 u8 = mod_nonneg(u, 8), w8 = mod_nonneg(w, 8);
    unsigned eps_u = (u8 & 3) == 3, eps_w = (w8 & 3) == 3;
    unsigned om_u = (u8 == 3 || u8 == 5), om_w = (w8 == 3 || w8 == 5);
    unsigned e = eps_u * eps_w + unsigned(alpha) * om_w + unsigned(beta) * om_u;
    return sign_from_parity(e);
}

int hilbert(i64 a, i64 b, Place v)
{
    if (a == 0 || b == 0)
        throw ContractError("hilbert: arguments must be nonzero");
    if (v.is_real())
        return hilbert_real(a, b);
    if (v.p() == 2)
        return hilbert_two(a, b);
    return hilbert_odd(a, b, v.p());
}

bool conic_soluble_at(i64 F, i64 G, Place v)
{
    if (F == 0 || G == 0)
        return true;
    return hilbert(F, G, v) == 1;
}

bool kernel_pair_soluble(i64 kF, i64 kG, u64 const * primes_f, std::size_t nf, u64 const * primes_g, std::size_t ng)
{
    if (hilbert_real(kF, kG) != 1)
        return false;
    if (hilbert_two(kF, kG) != 1)
        return false;
    for (std::size_t i = 0; i < nf; ++i)
        if (primes_f[i] != 2 && hilbert_odd(kF, kG, primes_f[i]) != 1)
            return false;
    for (std::size_t i = 0; i < ng; ++i)
        if (primes_g[i] != 2 && hilbert_odd(kF, kG, primes_g[i]) != 1)
            return false;
    return true;
}

bool kernel_pair_soluble(i64 kF, i64 kG, std::vector<u64> const & primes)
{
    return kernel_pair_soluble(kF, kG, primes.data(), primes.size(), nullptr, 0);
}

namespace {

Triple primitive(Triple t)
{
    i64 g = std::gcd(std::gcd(t[0], t[1]), t[2]);
    if (g > 1)
        for (auto & x : t)
            x /= g;
    return t;
}

} // namespace

std::optional<Triple> find_point(i64 F, i64 G)
{
    if (F == 0)
        return Triple{1, 0, 0};
    if (G == 0)
        return Triple{0, 1, 0};
    auto const table = shared_factor_table();
    i64 kF = squarefree_kernel(table->factorize(F));
    i64 kG = squarefree_kernel(table->factorize(G));
    i64 s = i64(isqrt(u64(F / kF)));
    i64 t = i64(isqrt(u64(G / kG)));
    i64 xmax = i64(abs_u64(kG));
    i64 ymax = i64(abs_u64(kF));
    i128 zmax = i128(xmax) * ymax;
    if (zmax > find_point_bound)
        throw ContractError("find_point: |F'G'| exceeds the oracle bound");

    for (i64 y = 0; y <= ymax; ++y) {
        i128 gy = i128(kG) * y * y;
        for (i64 x = 0; x <= xmax; ++x) {
            if (x == 0 && y == 0)
                continue;
            i128 val = i128(kF) * x * x + gy;
            if (val < 0 || val > zmax * zmax)
                continue;
            i64 v = i64(val);
            if (!is_square(v))
                continue;
            i64 z = i64(isqrt(u64(v)));
            Triple base = primitive({x, y, z});
            Triple lifted{narrow_checked(i128(base[0]) * t), narrow_checked(i128(base[1]) * s),
                          narrow_checked(i128(base[2]) * s * t)};
            return primitive(lifted);
        }
    }
    return std::nullopt;
}

SolubilityVerdict conic_everywhere_soluble(i64 F, i64 G, SolveOptions const & opts)
{
    SolubilityVerdict v;
    v.F = F;
    v.G = G;
    if (F == 0 || G == 0) {
        v.degenerate = true;
        v.globally_soluble = true;
        v.witness = F == 0 ? Triple{1, 0, 0} : Triple{0, 1, 0};
        return v;
    }
    auto const table = shared_factor_table();
    Factorization fF = table->factorize(F);
    Factorization fG = table->factorize(G);
    i64 kF = squarefree_kernel(fF);
    i64 kG = squarefree_kernel(fG);

    std::vector<u64> odd;
    for (auto const * fac : {&fF, &fG})
        for (auto [p, e] : fac->factors)
            if (p != 2 && (e & 1))
                odd.push_back(p);
    std::sort(odd.begin(), odd.end());
    odd.erase(std::unique(odd.begin(), odd.end()), odd.end());

    if (hilbert_real(kF, kG) != 1)
        v.obstructed_places.push_back(Place::real());
    if (hilbert_two(kF, kG) != 1)
        v.obstructed_places.push_back(Place::prime(2));
    for (u64 p : odd)
        if (hilbert_odd(kF, kG, p) != 1)
            v.obstructed_places.push_back(Place::prime(p));
    v.globally_soluble = v.obstructed_places.empty();

    i128 kprod = i128(kF) * kG;
    if (kprod < 0)
        kprod = -kprod;
    if (v.globally_soluble && kprod <= opts.witness_bound && kprod <= find_point_bound)
        v.witness = find_point(F, G);
    return v;
}

} // namespace conicfib
