#include <gtest/gtest.h>

#include "conicfib/errors.hpp"
#include "conicfib/sieveanalysis.hpp"
#include "oracles.hpp"

using namespace conicfib;

TEST(Sieve, FirstTermsExact)
{
    BinaryQuadraticForm f(1, 0, -1);
    auto s = saving_function(f, f, {1, 2, 3, 4, 5}, SieveMode::OmegaPrime);
    EXPECT_DOUBLE_EQ(s.F_of_L[0], 1.0);
    EXPECT_DOUBLE_EQ(s.F_of_L[1], 1.0);
    double h3 = 1152.0 / (6561.0 - 1152.0);
    EXPECT_NEAR(s.F_of_L[2], 1 + h3, 1e-14);
    EXPECT_NEAR(s.F_of_L[3], 1 + h3, 1e-14);
    EXPECT_GT(s.F_of_L[4], s.F_of_L[3]);
}

TEST(Sieve, MatchesBruteForceSum)
{
    std::vector<std::pair<BinaryQuadraticForm, BinaryQuadraticForm>> pairs = {
        {BinaryQuadraticForm(1, 0, -1), BinaryQuadraticForm(1, 0, -1)},
        {BinaryQuadraticForm(1, 0, -1), BinaryQuadraticForm(1, 0, 1)},
        {BinaryQuadraticForm(1, 0, 1), BinaryQuadraticForm(1, 0, -2)},
    };
    for (auto const & [f, g] : pairs) {
        auto s = saving_function(f, g, {10, 30, 47}, SieveMode::OmegaPrime);
        for (std::size_t i = 0; i < s.L_grid.size(); ++i)
            EXPECT_NEAR(s.F_of_L[i], oracle::saving_function_brute(f, g, s.L_grid[i]), 1e-12);
    }
}

TEST(Sieve, MonotoneAndModesOrdered)
{
    BinaryQuadraticForm f(1, 0, -1), g(1, 0, 1);
    auto grid = log_grid(1, 100000, 40);
    auto a = saving_function(f, g, grid, SieveMode::OmegaPrime);
    auto b = saving_function(f, g, grid, SieveMode::OmegaPrimePlusSuperset);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i) {
            EXPECT_GE(a.F_of_L[i], a.F_of_L[i - 1]);
        }
        EXPECT_GE(b.F_of_L[i], a.F_of_L[i]);
        EXPECT_DOUBLE_EQ(a.F_at(grid[i]), a.F_of_L[i]);
    }
    for (auto [p, h] : a.h)
        EXPECT_GE(h, 0.0);
}

TEST(Sieve, LogGrid)
{
    auto g = log_grid(1000, 1000000, 61);
    EXPECT_EQ(g.front(), 1000u);
    EXPECT_EQ(g.back(), 1000000u);
    EXPECT_EQ(g.size(), 61u);
    EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
    EXPECT_THROW(log_grid(0, 10, 3), ContractError);
}

TEST(Sieve, FitRecoversKnownPower)
{
    // a synthetic series with F = 3 (log L)^1.7 must fit back to 1.7
    BinaryQuadraticForm f(1, 0, 1);
    auto s = saving_function(f, f, log_grid(1000, 1000000, 31), SieveMode::OmegaPrime);
    for (std::size_t i = 0; i < s.L_grid.size(); ++i)
        s.F_of_L[i] = 3 * std::pow(std::log(double(s.L_grid[i])), 1.7);
    auto fit = fit_exponent(s);
    EXPECT_NEAR(fit.exponent, 1.7, 1e-9);
    EXPECT_NEAR(fit.std_error, 0.0, 1e-9);
    EXPECT_EQ(fit.points, 31u);
}

TEST(Sieve, FitRejections)
{
    BinaryQuadraticForm f(1, 0, 1);
    auto narrow = saving_function(f, f, log_grid(1000, 10000, 5), SieveMode::OmegaPrime);
    EXPECT_THROW(fit_exponent(narrow), ContractError);
    // f = g = x^2 + y^2 still has split primes (p = 1 mod 4), so force a flat series
    auto flat = saving_function(f, f, log_grid(1000, 1000000, 7), SieveMode::OmegaPrime);
    std::fill(flat.F_of_L.begin(), flat.F_of_L.end(), 1.0);
    EXPECT_THROW(fit_exponent(flat), DegenerateFit);
}

TEST(Sieve, ExponentOrderedByDelta)
{
    auto fit = [](BinaryQuadraticForm f, BinaryQuadraticForm g) {
        return fit_exponent(saving_function(f, g, log_grid(1000, 1000000, 61), SieveMode::OmegaPrime)).exponent;
    };
    double e2 = fit({1, 0, -1}, {1, 0, -1});
    double e15 = fit({1, 0, -1}, {1, 0, 1});
    double e1 = fit({1, 0, 1}, {1, 0, -2});
    EXPECT_GT(e2, e15);
    EXPECT_GT(e15, e1);
    EXPECT_GT(e1, 0.5);
}

TEST(Sieve, LargeSieveRhs)
{
    EXPECT_DOUBLE_EQ(large_sieve_rhs({1, 1, 1, 1}, 1, 1.0), 256.0);
    EXPECT_DOUBLE_EQ(large_sieve_rhs({16, 16, 16, 16}, 2, 2.0), 16777216.0 / 2); // ((4 + 4)^2)^4 / 2
    EXPECT_THROW(large_sieve_rhs({1, 1, 1, 1}, 1, 0.0), ContractError);
}

TEST(Sieve, PredictedGrowth)
{
    BinaryQuadraticForm split(1, 0, -1), gauss(1, 0, 1);
    double B = 1e6;
    EXPECT_DOUBLE_EQ(predicted_growth(pair_profile(split, split), B), B / std::log(B));
    EXPECT_DOUBLE_EQ(predicted_growth(pair_profile(split, gauss), B), B / std::sqrt(std::log(B)));
    EXPECT_DOUBLE_EQ(predicted_growth(pair_profile(gauss, gauss), B), B);
    EXPECT_THROW(predicted_growth(pair_profile(gauss, gauss), 1), ContractError);
}

TEST(Densities, CloseToChebotarev)
{
    std::vector<std::pair<BinaryQuadraticForm, BinaryQuadraticForm>> pairs = {
        {BinaryQuadraticForm(1, 0, -1), BinaryQuadraticForm(1, 0, 1)},
        {BinaryQuadraticForm(1, 0, 1), BinaryQuadraticForm(1, 0, -2)},
        {BinaryQuadraticForm(1, 0, 1), BinaryQuadraticForm(1, 0, 4)},
    };
    for (auto const & [f, g] : pairs) {
        auto d = densities_empirical(f, g, 100000);
        EXPECT_NEAR(d.freq_only_f, boost::rational_cast<double>(d.exact.delta1), 0.02);
        EXPECT_NEAR(d.freq_only_g, boost::rational_cast<double>(d.exact.delta2), 0.02);
        EXPECT_NEAR(d.freq_both, boost::rational_cast<double>(d.exact.delta3), 0.02);
        EXPECT_EQ(d.only_f + d.only_g + d.both <= d.good_primes, true);
    }
    EXPECT_THROW(densities_empirical(BinaryQuadraticForm(1, 0, 1), BinaryQuadraticForm(1, 0, 1), 999), ContractError);
}
