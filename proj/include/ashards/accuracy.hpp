#ifndef ASHARDS_ACCURACY_HPP
#define ASHARDS_ACCURACY_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ashards/params.hpp"
#include "ashards/rng.hpp"

namespace ashards {

// Ratio of extreme singular values. Throws Singular on rank deficiency.
double condition_number(const std::vector<std::vector<cplx>>& matrix);

// Worst-case decode perturbation under the floating-point model:
// delta_f = a_D * sqrt(t+1) * m^D * kappa * 2^-(v+1), valid for r <= m.
struct AccuracyBound {
    double delta_f = 0.0;
    double kappa = 1.0;
    double a_d = 1.0;     // leading coefficient magnitude of the evaluated polynomial
    double noise_cap = 0.0;
    std::uint32_t t = 1;
    std::uint32_t degree = 1;
    int precision_bits = 52;
};

// kappa defaults to 1 for the canonical evaluation points and is computed
// from the encoding Vandermonde otherwise; pass a value to override.
AccuracyBound accuracy_bound(double leading_coeff, const ProtocolParams& params,
                             const FloatModel& fm, std::optional<double> kappa = std::nullopt);

struct TradeoffRow {
    double sigma_n = 0.0;
    double log10_delta_f = 0.0;
    double log10_eta_s = 0.0;
    std::string flags; // "", "accuracy-vacuous", "error:<reason>"
    bool error = false;
};

// One row per sigma: the accuracy bound against the collusion DS bound.
// Parameter errors mark the row and the table continues.
std::vector<TradeoffRow> tradeoff_table(std::span<const double> sigma_grid,
                                        const ProtocolParams& base, double leading_coeff,
                                        const FloatModel& fm);

// CSV with header sigma_n,log10_delta_f,log10_eta_s,flags.
std::string tradeoff_csv(const std::vector<TradeoffRow>& rows);
std::string tradeoff_json(const std::vector<TradeoffRow>& rows);

// Full share -> evaluate -> decode pipeline over random secrets with
// |s| <= r; returns the maximum absolute decode error against the plaintext
// evaluation. Trial streams derive from (params.seed, trial index).
double empirical_error(int trials, std::span<const cplx> poly_coeffs,
                       const ProtocolParams& params, bool zero_noise_hook = false);

} // namespace ashards

#endif
