#include "conicfib/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "conicfib/errors.hpp"
#include "conicfib/fibrecount.hpp"
#include "conicfib/forms.hpp"
#include "conicfib/localarith.hpp"
#include "conicfib/residues.hpp"
#include "conicfib/sieveanalysis.hpp"

namespace conicfib::cli {

using json = nlohmann::ordered_json;

namespace {

/// A verification gate failed; maps to exit code 4.
class VerificationFailure : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

std::string trim(std::string s)
{
    auto const ws = " \t\r\n";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
}

std::string format_fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

struct Shared
{
    std::string f = "1,0,1";
    std::string g = "1,0,1";
    std::string out;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    u64 seed = 1;
};

void add_shared(CLI::App * sub, Shared & s)
{
    sub->add_option("--f", s.f, "first form as a,b,c");
    sub->add_option("--g", s.g, "second form as a,b,c");
    sub->add_option("--out", s.out, "output path (default: stdout)");
    sub->add_option("--workers", s.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", s.seed, "random seed");
}

std::set<std::string> const flag_keys{"no-timing", "corrupt-closed-form"};

/* Resolved configuration of the selected subcommand, sorted by key. */
std::vector<std::pair<std::string, std::string>> resolved_config(CLI::App const * sub)
{
    std::vector<std::pair<std::string, std::string>> kv;
    for (CLI::Option const * opt : sub->get_options()) {
        std::string name = opt->get_single_name();
        if (name.empty() || name == "help")
            continue;
        std::string value;
        if (flag_keys.count(name)) {
            value = opt->count() > 0 ? "true" : "false";
        } else if (opt->count() > 0) {
            auto res = opt->reduced_results();
            for (std::size_t i = 0; i < res.size(); ++i)
                value += (i ? "," : "") + res[i];
        } else {
            value = opt->get_default_str();
        }
        kv.emplace_back(name, value);
    }
    std::sort(kv.begin(), kv.end());
    return kv;
}

struct Provenance
{
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::string hash;

    std::string csv_preamble() const
    {
        std::string s = "# conicfib " + command + "\n";
        for (auto const & [k, v] : config)
            s += "# " + k + "=" + v + "\n";
        s += "# input_sha256=" + hash + "\n";
        return s;
    }

    json json_block() const
    {
        json c = json::object();
        for (auto const & [k, v] : config)
            c[k] = v;
        return c;
    }
};

Provenance provenance(CLI::App const * sub)
{
    Provenance p;
    p.command = sub->get_name();
    p.config = resolved_config(sub);
    std::string canon = p.command + "\n";
    for (auto const & [k, v] : p.config)
        if (k != "out" && k != "workers" && k != "config")
            canon += k + "=" + v + "\n";
    p.hash = sha256_hex(canon);
    return p;
}

void emit(std::string const & path, std::string const & content, std::ostream & out)
{
    if (path.empty()) {
        out << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ContractError("cannot open output file " + path);
    f << content;
}

BinaryQuadraticForm form_arg(std::string const & literal)
{
    return BinaryQuadraticForm::parse(literal);
}

// ---- count ----------------------------------------------------------------

struct CountArgs
{
    std::vector<u64> B{1000};
    bool no_timing = false;
    u64 factor_table_cap = FactorTable::default_bound;
};

int cmd_count(CLI::App const * sub, Shared const & s, CountArgs const & a, std::ostream & out, std::ostream & err)
{
    auto f = form_arg(s.f), g = form_arg(s.g);
    std::vector<u64> grid = a.B;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    CountOptions opts;
    opts.workers = s.workers;
    opts.factor_table_cap = a.factor_table_cap;
    CountReport rep = count(f, g, grid, opts);
    Provenance prov = provenance(sub);
    std::string doc = prov.csv_preamble();
    doc += rep.to_csv(!a.no_timing);
    emit(s.out, doc, out);
    err << "count: memo hit rate " << format_fixed(100 * rep.memo_hit_rate(), 2) << "% over " << rep.memo_lookups
        << " lookups\n";
    return Success;
}

// ---- residues -------------------------------------------------------------

struct ResiduesArgs
{
    u64 pmax = 97;
    u64 pmax_limit = 97;
    u64 samples = 0;
    bool corrupt_closed_form = false;
};

int cmd_residues(CLI::App const * sub, Shared const & s, ResiduesArgs const & a, std::ostream & out, std::ostream & err)
{
    auto f = form_arg(s.f), g = form_arg(s.g);
    if (a.pmax > a.pmax_limit)
        throw BudgetError("residues: --pmax " + std::to_string(a.pmax) + " exceeds --pmax-limit "
                          + std::to_string(a.pmax_limit));
    std::vector<u64> primes;
    for (u64 p : primes_up_to(a.pmax))
        if (is_good_prime(f, g, p))
            primes.push_back(p);

    struct Row
    {
        OmegaCounts brute, closed;
        SupersetCount sup;
        std::optional<Lemma41Report> sample;
    };
    std::vector<Row> rows(primes.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mu;
    std::exception_ptr error;
    auto work = [&] {
        try {
            for (std::size_t i; (i = next.fetch_add(1)) < primes.size();) {
                u64 p = primes[i];
                rows[i].brute = omega_brute(f, g, p);
                rows[i].closed = omega_closed(f, g, p);
                rows[i].sup = omega_p2_superset(f, g, p);
                if (a.samples > 0)
                    rows[i].sample = lemma41_sample(f, g, p, a.samples, {.seed = s.seed});
            }
        } catch (...) {
            std::lock_guard lock(error_mu);
            error = std::current_exception();
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < s.workers; ++w)
            pool.emplace_back(work);
        work();
    }
    if (error)
        std::rethrow_exception(error);

    Provenance prov = provenance(sub);
    std::string doc = prov.csv_preamble();
    doc += "p,eta,omega_f_brute,omega_f_closed,omega_g_brute,omega_g_closed,omega_fg_brute,omega_fg_closed,omega_p2_sup,match\n";
    bool all_match = true, samples_ok = true;
    for (Row & r : rows) {
        if (a.corrupt_closed_form)
            r.closed.omega_f += 1;
        bool match = r.brute.omega_f == r.closed.omega_f && r.brute.omega_g == r.closed.omega_g
                     && r.brute.omega_fg == r.closed.omega_fg && r.sup.matches_closed_form();
        all_match = all_match && match;
        std::ostringstream line;
        line << r.brute.p << ',' << r.brute.eta << ',' << r.brute.omega_f << ',' << r.closed.omega_f << ','
             << r.brute.omega_g << ',' << r.closed.omega_g << ',' << r.brute.omega_fg << ',' << r.closed.omega_fg << ','
             << r.sup.count << ',' << (match ? 1 : 0) << '\n';
        doc += line.str();
        if (r.sample) {
            err << "residues: p=" << r.sample->p << " lifted samples insoluble " << r.sample->insoluble << "/"
                << r.sample->samples << (r.sample->vacuous ? " (vacuous)" : "") << '\n';
            samples_ok = samples_ok && r.sample->passed();
        }
    }
    emit(s.out, doc, out);
    if (!all_match)
        throw VerificationFailure("residues: brute-force and closed-form counts disagree");
    if (!samples_ok)
        throw VerificationFailure("residues: a lifted class from Omega'_p was locally soluble");
    return Success;
}

// ---- sieve ----------------------------------------------------------------

struct SieveArgs
{
    u64 Lmin = 1000;
    u64 Lmax = 1000000;
    std::size_t points = 61;
    std::string mode = "omega";
    std::string series_out;
    u64 window_lo = 1000;
    u64 window_hi = 0; // 0: Lmax
};

int cmd_sieve(CLI::App const * sub, Shared const & s, SieveArgs const & a, std::ostream & out, std::ostream &)
{
    auto f = form_arg(s.f), g = form_arg(s.g);
    SieveMode mode = a.mode == "omega" ? SieveMode::OmegaPrime : SieveMode::OmegaPrimePlusSuperset;
    if (a.Lmin < 1 || a.Lmax < a.Lmin)
        throw ContractError("sieve: need 1 <= Lmin <= Lmax");
    std::vector<u64> grid = log_grid(a.Lmin, a.Lmax, a.points);
    if (grid.front() != 1)
        grid.insert(grid.begin(), 1);
    SieveSeries series = saving_function(f, g, grid, mode);
    u64 const hi = a.window_hi ? a.window_hi : a.Lmax;
    ExponentFit fit = fit_exponent(series, a.window_lo, hi);
    Provenance prov = provenance(sub);

    if (!a.series_out.empty()) {
        std::string doc = prov.csv_preamble() + "L,F_L\n";
        char buf[96];
        for (std::size_t i = 0; i < series.L_grid.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%llu,%.12g\n", (unsigned long long)series.L_grid[i], series.F_of_L[i]);
            doc += buf;
        }
        emit(a.series_out, doc, out);
    }

    FormPairProfile prof = pair_profile(f, g);
    json j;
    j["command"] = "sieve";
    j["config"] = prov.json_block();
    j["input_sha256"] = prov.hash;
    j["mode"] = std::string(to_string(mode));
    j["exponent"] = fit.exponent;
    j["std_error"] = fit.std_error;
    j["window"] = {fit.window_lo, fit.window_hi};
    j["points"] = fit.points;
    j["delta_pi"] = boost::rational_cast<double>(prof.delta_pi);
    j["F_at_Lmax"] = series.F_of_L.back();
    emit(s.out, j.dump(2) + "\n", out);
    return Success;
}

// ---- densities ------------------------------------------------------------

int cmd_densities(CLI::App const * sub, Shared const & s, u64 pmax, std::ostream & out, std::ostream &)
{
    auto f = form_arg(s.f), g = form_arg(s.g);
    DensityEstimate d = densities_empirical(f, g, pmax);
    std::string doc = provenance(sub).csv_preamble();
    doc += "P,freq_only_f,freq_only_g,freq_both,exact_d1,exact_d2,exact_d3\n";
    auto r = [](Rational q) { return format_fixed(boost::rational_cast<double>(q), 6); };
    doc += std::to_string(d.P) + "," + format_fixed(d.freq_only_f, 6) + "," + format_fixed(d.freq_only_g, 6) + ","
           + format_fixed(d.freq_both, 6) + "," + r(d.exact.delta1) + "," + r(d.exact.delta2) + ","
           + r(d.exact.delta3) + "\n";
    emit(s.out, doc, out);
    return Success;
}

// ---- solvable -------------------------------------------------------------

int cmd_solvable(CLI::App const * sub, Shared const & s, i64 F, i64 G, std::ostream & out, std::ostream &)
{
    SolubilityVerdict v = conic_everywhere_soluble(F, G);
    json places = json::array();
    if (!v.degenerate) {
        std::vector<Place> checked{Place::real(), Place::prime(2)};
        for (i64 k : {squarefree_kernel(F), squarefree_kernel(G)})
            for (auto [p, e] : factorize(k).factors)
                if (p != 2)
                    checked.push_back(Place::prime(p));
        std::sort(checked.begin(), checked.end());
        checked.erase(std::unique(checked.begin(), checked.end()), checked.end());
        for (Place const & pl : checked)
            places.push_back({{"place", pl.to_string()}, {"soluble", conic_soluble_at(F, G, pl)}});
    }
    json obstructed = json::array();
    for (Place const & pl : v.obstructed_places)
        obstructed.push_back(pl.to_string());
    Provenance prov = provenance(sub);
    json j;
    j["soluble"] = v.globally_soluble;
    j["witness"] = v.witness ? json(*v.witness) : json(nullptr);
    j["F"] = F;
    j["G"] = G;
    j["degenerate"] = v.degenerate;
    j["places"] = places;
    j["obstructed"] = obstructed;
    j["config"] = prov.json_block();
    j["input_sha256"] = prov.hash;
    emit(s.out, j.dump() + "\n", out);
    return Success;
}

// ---- dyadic ---------------------------------------------------------------

struct DyadicArgs
{
    i64 T1 = 16, T2 = 16, S1 = 16, S2 = 16;
    double cutoff = 0;          // 0: max(2, R^(1/100))
    double cutoff_exponent = 0; // > 0: R^exponent
};

int cmd_dyadic(CLI::App const * sub, Shared const & s, DyadicArgs const & a, std::ostream & out, std::ostream &)
{
    auto f = form_arg(s.f), g = form_arg(s.g);
    DyadicBox box{a.T1, a.T2, a.S1, a.S2, 2};
    if (a.cutoff > 0)
        box.cutoff = a.cutoff;
    else if (a.cutoff_exponent > 0)
        box.cutoff = std::max(2.0, std::pow(double(box.R()), a.cutoff_exponent));
    else
        box.cutoff = std::max(2.0, box.default_cutoff());
    box.validate();
    u64 sieved = dyadic_sieved_count(f, g, box);
    DyadicBox plain = box;
    plain.cutoff = 2;
    u64 unsieved = dyadic_sieved_count(f, g, plain);
    u64 L = u64(std::floor(box.cutoff));
    SieveSeries series = saving_function(f, g, {L}, SieveMode::OmegaPrime);
    double rhs = large_sieve_rhs({double(box.T1), double(box.T2), double(box.S1), double(box.S2)}, L, series);
    std::string doc = provenance(sub).csv_preamble();
    doc += "T1,T2,S1,S2,cutoff,count,unsieved,F_L,rhs,ratio\n";
    std::ostringstream line;
    line << box.T1 << ',' << box.T2 << ',' << box.S1 << ',' << box.S2 << ',' << format_fixed(box.cutoff, 6) << ','
         << sieved << ',' << unsieved << ',' << format_fixed(series.F_of_L.back(), 9) << ',' << std::setprecision(12)
         << rhs << ',' << double(sieved) / rhs << '\n';
    doc += line.str();
    emit(s.out, doc, out);
    return Success;
}

/*
 * Splices key=value pairs from --config into args wherever the key is not
 * given explicitly. Keys the selected subcommand does not know are skipped,
 * so one file can serve several subcommands.
 */
std::vector<std::string> apply_config(CLI::App & app, std::vector<std::string> args)
{
    CLI::App * sub = nullptr;
    for (std::string const & a : args)
        if (!a.empty() && a[0] != '-') {
            sub = app.get_subcommand_no_throw(a);
            break;
        }
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty())
        return args;
    auto present = [&](std::string const & key) {
        return std::any_of(args.begin(), args.end(), [&](std::string const & a) {
            return a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
        });
    };
    std::vector<std::string> extra;
    for (auto const & [key, value] : read_config_file(path)) {
        if (key == "config" || present(key))
            continue;
        if (sub == nullptr || sub->get_option_no_throw("--" + key) == nullptr)
            continue;
        if (flag_keys.count(key)) {
            if (value == "true" || value == "1")
                extra.push_back("--" + key);
            continue;
        }
        extra.push_back("--" + key + "=" + value);
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

} // namespace

std::string sha256_hex(std::string const & data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

std::vector<std::pair<std::string, std::string>> read_config_file(std::string const & path)
{
    std::ifstream in(path);
    if (!in)
        throw ContractError("cannot read config file " + path);
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ContractError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0)
            key = key.substr(2);
        kv.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return kv;
}

int run(std::vector<std::string> args, std::ostream & out, std::ostream & err)
{
    CLI::App app{"Solubility statistics for the conic bundle f(u) x^2 + g(v) y^2 = z^2 over P1 x P1"};
    app.name("conicfib");
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    Shared shared;
    std::string config_path;

    auto * c_count = app.add_subcommand("count", "count soluble fibres by height");
    CountArgs count_args;
    c_count->add_option("--B", count_args.B, "height bounds, comma separated")->delimiter(',');
    c_count->add_flag("--no-timing", count_args.no_timing, "write 0.000 in the seconds column");
    c_count->add_option("--factor-table-cap", count_args.factor_table_cap, "largest smallest-prime-factor table");

    auto * c_res = app.add_subcommand("residues", "bad residue class counts, brute force vs closed form");
    ResiduesArgs res_args;
    c_res->add_option("--pmax", res_args.pmax, "largest prime");
    c_res->add_option("--pmax-limit", res_args.pmax_limit, "refuse larger --pmax");
    c_res->add_option("--samples", res_args.samples, "lifted samples per prime for the insolubility check");
    c_res->add_flag("--corrupt-closed-form", res_args.corrupt_closed_form)->group("");

    auto * c_sieve = app.add_subcommand("sieve", "large sieve saving function and exponent fit");
    SieveArgs sieve_args;
    c_sieve->add_option("--Lmin", sieve_args.Lmin, "smallest L on the grid");
    c_sieve->add_option("--Lmax", sieve_args.Lmax, "largest L on the grid");
    c_sieve->add_option("--points", sieve_args.points, "log-spaced grid points")->check(CLI::Range(2, 100000));
    c_sieve->add_option("--mode", sieve_args.mode, "omega | omega+superset")
        ->check(CLI::IsMember({"omega", "omega+superset"}));
    c_sieve->add_option("--series-out", sieve_args.series_out, "write the L,F_L series here");
    c_sieve->add_option("--window-lo", sieve_args.window_lo, "fit window start");
    c_sieve->add_option("--window-hi", sieve_args.window_hi, "fit window end (0: Lmax)");

    auto * c_dens = app.add_subcommand("densities", "empirical splitting densities");
    u64 dens_pmax = 1000000;
    c_dens->add_option("--pmax", dens_pmax, "prime bound P")->check(CLI::Range(u64(1000), u64(1) << 40));

    auto * c_solv = app.add_subcommand("solvable", "local and global solubility of F x^2 + G y^2 = z^2");
    i64 F = 1, G = 1;
    c_solv->add_option("--F", F, "coefficient F")->required();
    c_solv->add_option("--G", G, "coefficient G")->required();

    auto * c_dy = app.add_subcommand("dyadic", "sieved dyadic box count against the large sieve bound");
    DyadicArgs dy_args;
    c_dy->add_option("--T1", dy_args.T1);
    c_dy->add_option("--T2", dy_args.T2);
    c_dy->add_option("--S1", dy_args.S1);
    c_dy->add_option("--S2", dy_args.S2);
    c_dy->add_option("--cutoff", dy_args.cutoff, "sieve primes up to this bound");
    c_dy->add_option("--cutoff-exponent", dy_args.cutoff_exponent, "cutoff R^e instead of R^(1/100)");

    for (auto * sub : {c_count, c_res, c_sieve, c_dens, c_solv, c_dy}) {
        add_shared(sub, shared);
        sub->add_option("--config", config_path, "flat key=value config file");
    }

    try {
        args = apply_config(app, std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (CLI::CallForHelp const &) {
        out << app.help();
        return Success;
    } catch (CLI::ParseError const & e) {
        err << "conicfib: " << e.what() << '\n';
        return UsageError;
    } catch (ContractError const & e) {
        err << "conicfib: " << e.what() << '\n';
        return UsageError;
    }

    try {
        CLI::App const * sub = app.get_subcommands().front();
        std::string const name = sub->get_name();
        if (name == "count")
            return cmd_count(sub, shared, count_args, out, err);
        if (name == "residues")
            return cmd_residues(sub, shared, res_args, out, err);
        if (name == "sieve")
            return cmd_sieve(sub, shared, sieve_args, out, err);
        if (name == "densities")
            return cmd_densities(sub, shared, dens_pmax, out, err);
        if (name == "solvable")
            return cmd_solvable(sub, shared, F, G, out, err);
        if (name == "dyadic")
            return cmd_dyadic(sub, shared, dy_args, out, err);
    } catch (VerificationFailure const & e) {
        err << "conicfib: " << e.what() << '\n';
        return VerificationMismatch;
    } catch (ContractError const & e) {
        err << "conicfib: " << e.what() << '\n';
        return UsageError;
    } catch (DegenerateFit const & e) {
        err << "conicfib: " << e.what() << '\n';
        return UsageError;
    } catch (OverflowError const & e) {
        err << "conicfib: " << e.what() << '\n';
        return BudgetExceeded;
    } catch (BudgetError const & e) {
        err << "conicfib: " << e.what() << '\n';
        return BudgetExceeded;
    }
    return UsageError;
}

} // namespace conicfib::cli
