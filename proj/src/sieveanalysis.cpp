#include "conicfib/sieveanalysis.hpp"

#include <algorithm>
#include <cmath>

#include "conicfib/errors.hpp"
#include "conicfib/factor.hpp"
#include "conicfib/residues.hpp"

namespace conicfib {

DensityEstimate densities_empirical(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 P)
{
    if (P < 1000)
        throw ContractError("densities_empirical: P must be at least 1000");
    DensityEstimate d;
    d.P = P;
    d.exact = pair_profile(f, g);
    for (u64 p : primes_up_to(P)) {
        if (!is_good_prime(f, g, p))
            continue;
        ++d.good_primes;
        bool sf = splits_at(f, p), sg = splits_at(g, p);
        if (sf && sg)
            ++d.both;
        else if (sf)
            ++d.only_f;
        else if (sg)
            ++d.only_g;
    }
    if (d.good_primes > 0) {
        double n = double(d.good_primes);
        d.freq_only_f = double(d.only_f) / n;
        d.freq_only_g = double(d.only_g) / n;
        d.freq_both = double(d.both) / n;
    }
    return d;
}

std::string_view to_string(SieveMode m)
{
    return m == SieveMode::OmegaPrime ? "omega" : "omega+superset";
}

double SieveSeries::F_at(u64 L) const
{
    if (support_.empty())
        throw ContractError("SieveSeries::F_at: series carries no support table");
    if (L < 1)
        return 0;
    auto it = std::upper_bound(support_.begin(), support_.end(), L);
    return cumulative_[std::size_t(it - support_.begin()) - 1];
}

SieveSeries saving_function(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, std::vector<u64> L_grid,
                            SieveMode mode)
{
    if (L_grid.empty())
        throw ContractError("saving_function: empty L grid");
    std::sort(L_grid.begin(), L_grid.end());
    if (L_grid.front() < 1)
        throw ContractError("saving_function: L must be positive");
    u64 const Lmax = L_grid.back();

    SieveSeries s;
    s.mode = mode;
    s.L_grid = L_grid;
    std::vector<u64> primes;
    std::vector<double> hp;
    for (u64 p : primes_up_to(Lmax)) {
        if (!is_good_prime(f, g, p))
            continue;
        long double share = omega_prime_share(f, g, p);
        if (mode == SieveMode::OmegaPrimePlusSuperset)
            share += superset_share(f, g, p);
        double h = double(share / (1 - share));
        s.h.emplace_back(p, h);
        if (h > 0) {
            primes.push_back(p);
            hp.push_back(h);
        }
    }

    // square-free m <= Lmax built from primes with h(p) > 0
    std::vector<std::pair<u64, double>> terms{{1, 1.0}};
    struct Frame
    {
        std::size_t next;
        u64 m;
        double value;
    };
    std::vector<Frame> stack{{0, 1, 1.0}};
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        for (std::size_t j = fr.next; j < primes.size(); ++j) {
            if (primes[j] > Lmax / fr.m)
                break;
            u64 m = fr.m * primes[j];
            double v = fr.value * hp[j];
            terms.emplace_back(m, v);
            stack.push_back({j + 1, m, v});
        }
    }
    std::sort(terms.begin(), terms.end());
    s.support_.reserve(terms.size());
    s.cumulative_.reserve(terms.size());
    double acc = 0;
    for (auto [m, v] : terms) {
        acc += v;
        s.support_.push_back(m);
        s.cumulative_.push_back(acc);
    }
    for (u64 L : L_grid)
        s.F_of_L.push_back(s.F_at(L));
    return s;
}

std::vector<u64> log_grid(u64 lo, u64 hi, std::size_t points)
{
    if (lo < 1 || hi < lo || points < 2)
        throw ContractError("log_grid: need 1 <= lo <= hi and at least 2 points");
    std::vector<u64> out;
    double const a = std::log(double(lo)), b = std::log(double(hi));
    for (std::size_t i = 0; i < points; ++i) {
        double x = std::exp(a + (b - a) * double(i) / double(points - 1));
        out.push_back(i == 0 ? lo : i + 1 == points ? hi : u64(std::llround(x)));
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ExponentFit fit_exponent(SieveSeries const & series, u64 window_lo, u64 window_hi)
{
    if (series.L_grid.empty() || series.L_grid.front() > window_lo || series.L_grid.back() < window_hi)
        throw ContractError("fit_exponent: L grid does not span the fitting window");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < series.L_grid.size(); ++i) {
        u64 L = series.L_grid[i];
        if (L < window_lo || L > window_hi || L < 3)
            continue;
        xs.push_back(std::log(std::log(double(L))));
        ys.push_back(std::log(series.F_of_L[i]));
    }
    if (xs.size() < 3)
        throw DegenerateFit("fit_exponent: fewer than three grid points in the window");
    if (std::all_of(series.F_of_L.begin(), series.F_of_L.end(), [&](double v) { return v == series.F_of_L.front(); }))
        throw DegenerateFit("fit_exponent: F(L) is constant over the window");

    double const n = double(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    ExponentFit fit;
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double ssr = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - fit.intercept - fit.exponent * xs[i];
        ssr += r * r;
    }
    fit.std_error = xs.size() > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.points = xs.size();
    return fit;
}

double large_sieve_rhs(std::array<double, 4> const & N, u64 L, double F_L)
{
    if (!(F_L > 0))
        throw ContractError("large_sieve_rhs: F(L) must be positive");
    double const L2 = double(L) * double(L);
    long double prod = 1;
    for (double n : N) {
        long double t = std::sqrt((long double)n) + L2;
        prod *= t * t;
    }
    return double(prod / F_L);
}

double large_sieve_rhs(std::array<double, 4> const & N, u64 L, SieveSeries const & series)
{
    return large_sieve_rhs(N, L, series.F_at(L));
}

double predicted_growth(FormPairProfile const & profile, double B)
{
    if (B < 2)
        throw ContractError("predicted_growth: B must be at least 2");
    switch (profile.split_count()) {
    case 2:
        return B / std::log(B);
    case 1:
        return B / std::sqrt(std::log(B));
    default:
        return B;
    }
}

} // namespace conicfib
