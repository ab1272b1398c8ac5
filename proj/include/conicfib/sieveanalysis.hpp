#ifndef CONICFIB_SIEVEANALYSIS_HPP
#define CONICFIB_SIEVEANALYSIS_HPP

#include <array>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "conicfib/forms.hpp"

namespace conicfib {

struct DensityEstimate
{
    u64 P = 0;
    u64 good_primes = 0;
    u64 only_f = 0;
    u64 only_g = 0;
    u64 both = 0;
    double freq_only_f = 0;
    double freq_only_g = 0;
    double freq_both = 0;
    FormPairProfile exact;

    double freq_neither() const { return 1.0 - freq_only_f - freq_only_g - freq_both; }
};

/// Splitting frequencies over good primes p <= P next to the exact densities.
DensityEstimate densities_empirical(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, u64 P);

enum class SieveMode
{
    OmegaPrime,             ///< Y_p = Omega'_p
    OmegaPrimePlusSuperset, ///< Y_p = Omega'_p plus the p^2 superset
};

std::string_view to_string(SieveMode m);

/*
 * F(L) = sum over square-free m <= L of prod_{p | m} h(p), with
 * h(p) = |Y_p| / (p^8 - |Y_p|).
 */
class SieveSeries
{
  public:
    SieveMode mode = SieveMode::OmegaPrime;
    std::vector<u64> L_grid;
    std::vector<double> F_of_L;
    /// (p, h(p)) for every good prime p <= max L
    std::vector<std::pair<u64, double>> h;

    /// Exact step-function value at any L <= max L.
    double F_at(u64 L) const;

  private:
    friend SieveSeries saving_function(BinaryQuadraticForm const &, BinaryQuadraticForm const &, std::vector<u64>, SieveMode);
    std::vector<u64> support_;       // square-free m with h(m) > 0, sorted
    std::vector<double> cumulative_; // F at each support point
};

SieveSeries saving_function(BinaryQuadraticForm const & f, BinaryQuadraticForm const & g, std::vector<u64> L_grid,
                            SieveMode mode);

/// Log-spaced integer grid from lo to hi inclusive (points >= 2).
std::vector<u64> log_grid(u64 lo, u64 hi, std::size_t points);

struct ExponentFit
{
    double exponent = 0;
    double std_error = 0;
    double intercept = 0;
    u64 window_lo = 0;
    u64 window_hi = 0;
    std::size_t points = 0;
};

class DegenerateFit : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

/// Least-squares slope of log F(L) against log log L over [window_lo, window_hi].
ExponentFit fit_exponent(SieveSeries const & series, u64 window_lo = 1000, u64 window_hi = 1000000);

/// prod_j (sqrt(N_j) + L^2)^2 / F(L)
double large_sieve_rhs(std::array<double, 4> const & N, u64 L, double F_L);
double large_sieve_rhs(std::array<double, 4> const & N, u64 L, SieveSeries const & series);

/// B / log B, B / sqrt(log B) or B according to how many of f, g split over Q.
double predicted_growth(FormPairProfile const & profile, double B);

} // namespace conicfib

#endif
