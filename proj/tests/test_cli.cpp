#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "conicfib/cli.hpp"

using namespace conicfib;

namespace {

struct Result
{
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string body(std::string const & csv)
{
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#')
            out += line + "\n";
    return out;
}

std::filesystem::path temp_file(std::string const & name)
{
    return std::filesystem::temp_directory_path() / ("conicfib_test_" + name);
}

} // namespace

TEST(Cli, Sha256)
{
    EXPECT_EQ(cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, Solvable)
{
    auto r = run({"solvable", "--F", "2", "--G", "7"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["soluble"].get<bool>());
    EXPECT_EQ(j["witness"], nlohmann::json::array({1, 1, 3}));
    EXPECT_TRUE(j.contains("input_sha256"));

    auto s = nlohmann::json::parse(run({"solvable", "--F", "-1", "--G", "-1"}).out);
    EXPECT_FALSE(s["soluble"].get<bool>());
    EXPECT_EQ(s["obstructed"], nlohmann::json::array({"real", "2"}));
}

TEST(Cli, CountCsv)
{
    auto r = run({"count", "--f", "1,0,1", "--g", "1,0,1", "--B", "1", "--no-timing"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(body(r.out), "B,points_total,N,Nstar,thin1,thin2,seconds\n1,16,16,4,12,8,0.000\n");
    EXPECT_NE(r.out.find("# input_sha256="), std::string::npos);
    EXPECT_NE(r.err.find("memo hit rate"), std::string::npos);
}

TEST(Cli, CountWorkersGiveSameRows)
{
    std::vector<std::string> base{"count", "--f", "2,1,3", "--g", "1,0,-2", "--B", "100,400", "--no-timing"};
    auto a = base, b = base;
    a.insert(a.end(), {"--workers", "1"});
    b.insert(b.end(), {"--workers", "4"});
    EXPECT_EQ(body(run(a).out), body(run(b).out));
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(run({}).code, cli::UsageError);
    EXPECT_EQ(run({"nonsense"}).code, cli::UsageError);
    EXPECT_EQ(run({"count", "--f", "1,2"}).code, cli::UsageError);
    EXPECT_EQ(run({"count", "--f", "1,2,1"}).code, cli::UsageError); // zero discriminant
    EXPECT_EQ(run({"count", "--B", "0"}).code, cli::UsageError);
    EXPECT_EQ(run({"count", "--B", "1000000000000000"}).code, cli::BudgetExceeded);
    EXPECT_EQ(run({"residues", "--pmax", "101"}).code, cli::BudgetExceeded);
    EXPECT_EQ(run({"residues", "--f", "1,0,-1", "--g", "1,0,1", "--pmax", "13"}).code, cli::Success);
    EXPECT_EQ(run({"residues", "--f", "1,0,-1", "--g", "1,0,1", "--pmax", "13", "--corrupt-closed-form"}).code,
              cli::VerificationMismatch);
    EXPECT_EQ(run({"densities", "--pmax", "10"}).code, cli::UsageError);
    EXPECT_EQ(run({"sieve", "--mode", "other"}).code, cli::UsageError);
    EXPECT_EQ(run({"dyadic", "--T1", "12"}).code, cli::UsageError);
    EXPECT_EQ(run({"count", "--config", "/nonexistent/file.cfg"}).code, cli::UsageError);
}

TEST(Cli, ResiduesTable)
{
    auto r = run({"residues", "--f", "1,0,-1", "--g", "1,0,1", "--pmax", "13", "--samples", "20"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::string b = body(r.out);
    EXPECT_EQ(b.substr(0, b.find('\n')),
              "p,eta,omega_f_brute,omega_f_closed,omega_g_brute,omega_g_closed,omega_fg_brute,omega_fg_closed,"
              "omega_p2_sup,match");
    EXPECT_NE(b.find("\n3,1,864,864,0,0,0,0,"), std::string::npos);
    EXPECT_EQ(b.find(",0\n"), std::string::npos);
}

TEST(Cli, CountGridIsSorted)
{
    auto r = run({"count", "--B", "10,5,10", "--no-timing"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::string b = body(r.out);
    EXPECT_LT(b.find("\n5,"), b.find("\n10,"));
    EXPECT_EQ(std::count(b.begin(), b.end(), '\n'), 3);
}

TEST(Cli, ConfigFileFillsMissingKeys)
{
    auto cfg = temp_file("count.cfg");
    {
        std::ofstream o(cfg);
        o << "# shared settings\nf = 1,0,1\ng=1,0,1\nB=1\nno-timing=true\npmax=50\n";
    }
    auto r = run({"count", "--config", cfg.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(body(r.out), "B,points_total,N,Nstar,thin1,thin2,seconds\n1,16,16,4,12,8,0.000\n");
    // the command line wins over the file
    auto s = run({"count", "--config", cfg.string(), "--B", "2"});
    EXPECT_NE(body(s.out).find("\n2,"), std::string::npos);
    EXPECT_NE(s.out.find("# B=2\n"), std::string::npos);
    std::filesystem::remove(cfg);
}

TEST(Cli, SameInputsSameHash)
{
    auto hash = [](Result const & r) {
        auto at = r.out.find("# input_sha256=");
        return r.out.substr(at, r.out.find('\n', at) - at);
    };
    auto a = run({"densities", "--pmax", "2000", "--workers", "1"});
    auto b = run({"densities", "--pmax", "2000", "--workers", "3"});
    auto c = run({"densities", "--pmax", "3000"});
    EXPECT_EQ(hash(a), hash(b));
    EXPECT_NE(hash(a), hash(c));
}

TEST(Cli, SieveWritesSeriesAndFit)
{
    auto series = temp_file("series.csv");
    auto r = run({"sieve", "--f", "1,0,-1", "--g", "1,0,1", "--Lmax", "100000", "--points", "21", "--series-out",
                  series.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_GT(j["exponent"].get<double>(), 0.5);
    EXPECT_EQ(j["delta_pi"].get<double>(), 1.5);
    std::ifstream in(series);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string b = body(ss.str());
    EXPECT_EQ(b.substr(0, 6), "L,F_L\n");
    EXPECT_NE(b.find("\n1,1\n"), std::string::npos);
    std::filesystem::remove(series);
}

TEST(Cli, DyadicRow)
{
    auto r = run({"dyadic", "--f", "1,0,-1", "--g", "1,0,1", "--T1", "8", "--T2", "8", "--S1", "8", "--S2", "8",
                  "--cutoff", "13"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::string b = body(r.out);
    EXPECT_EQ(b.substr(0, b.find('\n')), "T1,T2,S1,S2,cutoff,count,unsieved,F_L,rhs,ratio");
}
