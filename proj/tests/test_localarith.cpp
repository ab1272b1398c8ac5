#include <gtest/gtest.h>

#include <random>

#include "conicfib/errors.hpp"
#include "conicfib/localarith.hpp"
#include "oracles.hpp"

using namespace conicfib;

TEST(Place, Construction)
{
    EXPECT_TRUE(Place::real().is_real());
    EXPECT_EQ(Place::prime(7).p(), 7u);
    EXPECT_EQ(Place::prime(2).to_string(), "2");
    EXPECT_EQ(Place::real().to_string(), "real");
    EXPECT_THROW(Place::prime(9), ContractError);
    EXPECT_LT(Place::real(), Place::prime(2));
}

TEST(Hilbert, KnownValues)
{
    EXPECT_EQ(hilbert(5, 3, Place::prime(3)), -1);
    EXPECT_EQ(hilbert(-1, -1, Place::real()), -1);
    EXPECT_EQ(hilbert(-1, -1, Place::prime(2)), -1);
    EXPECT_EQ(hilbert(-1, -1, Place::prime(3)), 1);
    EXPECT_EQ(hilbert(2, 3, Place::prime(2)), -1);
    EXPECT_EQ(hilbert(2, 7, Place::prime(2)), 1);
    EXPECT_EQ(hilbert(1, -5, Place::prime(5)), 1);
}

TEST(Hilbert, AgreesWithModularSearch)
{
    for (u64 p : {2u, 3u, 5u, 7u, 11u})
        for (i64 a = -24; a <= 24; ++a)
            for (i64 b = -24; b <= 24; ++b) {
                if (a == 0 || b == 0)
                    continue;
                bool oracle = oracle::local_soluble(a, b, p);
                ASSERT_EQ(hilbert(a, b, Place::prime(p)) == 1, oracle) << a << " " << b << " at " << p;
            }
}

TEST(Hilbert, Bimultiplicative)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<i64> d(-3000, 3000);
    for (int i = 0; i < 3000; ++i) {
        i64 a = d(rng), b = d(rng), c = d(rng);
        if (!a || !b || !c)
            continue;
        for (Place v : {Place::real(), Place::prime(2), Place::prime(3), Place::prime(5), Place::prime(13)}) {
            ASSERT_EQ(hilbert(a, b * c, v), hilbert(a, b, v) * hilbert(a, c, v));
            ASSERT_EQ(hilbert(a, b, v), hilbert(b, a, v));
            ASSERT_EQ(hilbert(a, -a, v), 1);
            ASSERT_EQ(hilbert(a, 1 - a == 0 ? 1 : 1 - a, v), 1);
        }
    }
}

TEST(Hilbert, ProductFormula)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<i64> d(-10000, 10000);
    for (int i = 0; i < 500; ++i) {
        i64 a = d(rng), b = d(rng);
        if (!a || !b)
            continue;
        int prod = hilbert(a, b, Place::real()) * hilbert(a, b, Place::prime(2));
        for (auto [p, e] : factorize(a * b).factors)
            if (p != 2)
                prod *= hilbert(a, b, Place::prime(p));
        EXPECT_EQ(prod, 1) << a << " " << b;
    }
}

TEST(Conic, Examples)
{
    auto v = conic_everywhere_soluble(2, 7);
    EXPECT_TRUE(v.globally_soluble);
    ASSERT_TRUE(v.witness.has_value());
    auto [x, y, z] = *v.witness;
    EXPECT_EQ(2 * x * x + 7 * y * y, z * z);

    auto w = conic_everywhere_soluble(-1, -1);
    EXPECT_FALSE(w.globally_soluble);
    EXPECT_EQ(w.obstructed_places, (std::vector<Place>{Place::real(), Place::prime(2)}));

    auto d = conic_everywhere_soluble(0, 5);
    EXPECT_TRUE(d.degenerate);
    EXPECT_TRUE(d.globally_soluble);

    EXPECT_FALSE(find_point(3, 5).has_value());
    EXPECT_FALSE(conic_everywhere_soluble(3, 5).globally_soluble);
}

TEST(Conic, ObstructionsComeInPairs)
{
    for (i64 F = -60; F <= 60; ++F)
        for (i64 G = -60; G <= 60; ++G) {
            if (!F || !G)
                continue;
            auto v = conic_everywhere_soluble(F, G, {.witness_bound = 0});
            EXPECT_EQ(v.obstructed_places.size() % 2, 0u);
            EXPECT_EQ(v.globally_soluble, v.obstructed_places.empty());
        }
}

TEST(Conic, InvariantUnderSquares)
{
    for (i64 F = -30; F <= 30; ++F)
        for (i64 G = -30; G <= 30; ++G) {
            if (!F || !G)
                continue;
            bool s = conic_everywhere_soluble(F, G, {.witness_bound = 0}).globally_soluble;
            EXPECT_EQ(s, conic_everywhere_soluble(F * 9, G * 4, {.witness_bound = 0}).globally_soluble);
            EXPECT_EQ(s, conic_everywhere_soluble(G, F, {.witness_bound = 0}).globally_soluble);
        }
}

TEST(Conic, WitnessesSolve)
{
    for (i64 F = -40; F <= 40; ++F)
        for (i64 G = -40; G <= 40; ++G) {
            if (!F || !G)
                continue;
            auto pt = find_point(F, G);
            if (!pt)
                continue;
            auto [x, y, z] = *pt;
            ASSERT_EQ(F * x * x + G * y * y, z * z);
            ASSERT_FALSE(x == 0 && y == 0 && z == 0);
            ASSERT_EQ(std::gcd(std::gcd(x, y), z), 1);
        }
}

TEST(Conic, KernelPairMatchesFull)
{
    for (i64 F = -80; F <= 80; ++F)
        for (i64 G = -80; G <= 80; G += 3) {
            if (!F || !G)
                continue;
            i64 kF = squarefree_kernel(F), kG = squarefree_kernel(G);
            std::vector<u64> ps;
            for (i64 k : {kF, kG})
                for (auto [p, e] : factorize(k).factors)
                    if (p != 2)
                        ps.push_back(p);
            ASSERT_EQ(kernel_pair_soluble(kF, kG, ps),
                      conic_everywhere_soluble(F, G, {.witness_bound = 0}).globally_soluble);
        }
}

TEST(Conic, FindPointRefusesHugeSearch)
{
    EXPECT_THROW(find_point(1000003, 1000033), ContractError);
}
